#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "tda/point_cloud.hpp"

namespace tda {

enum class CloudShape { Circle, Blobs, CircleAndNoise };

std::string cloud_shape_name(CloudShape s);
CloudShape cloud_shape_from_name(const std::string& name);

struct SyntheticSpec {
    CloudShape shape = CloudShape::Circle;
    int n_points = 50;
    double noise_sd = 0.05;
    int count = 1;            // clouds to draw
    std::uint32_t seed = 0;
    double radius_min = 1.0;  // circle radius drawn uniformly from this range
    double radius_max = 1.0;
    double background_fraction = 0.2; // CircleAndNoise: share of uniform clutter
};

/// One cloud from an already-seeded stream.
PointCloud sample_cloud(const SyntheticSpec& spec, std::mt19937& rng);

/// spec.count clouds from a fresh generator seeded with spec.seed.
std::vector<PointCloud> generate_clouds(const SyntheticSpec& spec);

} // namespace tda
