#include "tda/synthetic.hpp"

#include <cmath>
#include <numbers>

#include "tda/errors.hpp"

namespace tda {

std::string cloud_shape_name(CloudShape s) {
    switch (s) {
        case CloudShape::Circle: return "circle";
        case CloudShape::Blobs: return "blobs";
        case CloudShape::CircleAndNoise: return "circle_plus_noise";
    }
    throw ConfigError("unreachable cloud shape");
}

CloudShape cloud_shape_from_name(const std::string& name) {
    if (name == "circle") return CloudShape::Circle;
    if (name == "blobs") return CloudShape::Blobs;
    if (name == "circle_plus_noise") return CloudShape::CircleAndNoise;
    throw ConfigError("unknown generator '" + name +
                      "' (expected circle, blobs or circle_plus_noise)");
}

namespace {

void validate(const SyntheticSpec& spec) {
    if (spec.n_points < 1) throw ConfigError("generator needs n_points >= 1");
    if (spec.noise_sd < 0) throw ConfigError("noise sd must be >= 0");
    if (spec.count < 1) throw ConfigError("generator needs count >= 1");
    if (!(spec.radius_min > 0) || spec.radius_max < spec.radius_min)
        throw ConfigError("need 0 < radius_min <= radius_max");
    if (spec.background_fraction < 0 || spec.background_fraction >= 1)
        throw ConfigError("background fraction must lie in [0, 1)");
}

Eigen::MatrixXd circle_points(int n, double radius, double sd, std::mt19937& rng) {
    std::normal_distribution<double> noise(0.0, sd);
    Eigen::MatrixXd pts(n, 2);
    for (int i = 0; i < n; ++i) {
        const double a = 2.0 * std::numbers::pi * i / n;
        pts(i, 0) = radius * std::cos(a) + (sd > 0 ? noise(rng) : 0.0);
        pts(i, 1) = radius * std::sin(a) + (sd > 0 ? noise(rng) : 0.0);
    }
    return pts;
}

} // namespace

PointCloud sample_cloud(const SyntheticSpec& spec, std::mt19937& rng) {
    validate(spec);
    std::uniform_real_distribution<double> radius(spec.radius_min, spec.radius_max);

    switch (spec.shape) {
        case CloudShape::Circle: {
            const double r = spec.radius_max > spec.radius_min ? radius(rng) : spec.radius_min;
            return PointCloud(circle_points(spec.n_points, r, spec.noise_sd, rng));
        }
        case CloudShape::Blobs: {
            // three tight, asymmetric clusters: no loops, so H1 stays
            // (near-)empty
            static constexpr double centers[3][2] = {{0.0, 0.0}, {1.3, 0.2}, {0.4, 1.1}};
            std::normal_distribution<double> noise(0.0, spec.noise_sd);
            Eigen::MatrixXd pts(spec.n_points, 2);
            for (int i = 0; i < spec.n_points; ++i) {
                const auto& c = centers[i % 3];
                pts(i, 0) = c[0] + noise(rng);
                pts(i, 1) = c[1] + noise(rng);
            }
            return PointCloud(pts);
        }
        case CloudShape::CircleAndNoise: {
            const double r = spec.radius_max > spec.radius_min ? radius(rng) : spec.radius_min;
            const int clutter =
                static_cast<int>(std::floor(spec.n_points * spec.background_fraction));
            const int on_circle = spec.n_points - clutter;
            if (on_circle < 1) throw ConfigError("background fraction leaves no circle points");
            Eigen::MatrixXd pts(spec.n_points, 2);
            pts.topRows(on_circle) = circle_points(on_circle, r, spec.noise_sd, rng);
            std::uniform_real_distribution<double> box(-1.5 * r, 1.5 * r);
            for (int i = on_circle; i < spec.n_points; ++i) {
                pts(i, 0) = box(rng);
                pts(i, 1) = box(rng);
            }
            return PointCloud(pts);
        }
    }
    throw ConfigError("unreachable cloud shape");
}

std::vector<PointCloud> generate_clouds(const SyntheticSpec& spec) {
    validate(spec);
    std::mt19937 rng(spec.seed);
    std::vector<PointCloud> out;
    out.reserve(spec.count);
    for (int i = 0; i < spec.count; ++i) out.push_back(sample_cloud(spec, rng));
    return out;
}

} // namespace tda
