#pragma once

#include <string>

#include <Eigen/Dense>

#include "tda/errors.hpp"
#include "tda/point_cloud.hpp"

namespace tda {

/// Ground metric used to turn a point cloud into pairwise distances.
enum class Metric { Euclidean, Manhattan, Chebyshev, Precomputed };

std::string metric_name(Metric m);
Metric metric_from_name(const std::string& name);

/// Symmetric matrix of pairwise distances with a record of the metric used.
class DistanceMatrix {
public:
    DistanceMatrix() = default;
    DistanceMatrix(Eigen::MatrixXd d, Metric metric);

    const Eigen::MatrixXd& matrix() const { return d_; }
    Metric metric_id() const { return metric_; }
    Eigen::Index size() const { return d_.rows(); }
    double operator()(Eigen::Index i, Eigen::Index j) const { return d_(i, j); }

    /// Largest pairwise distance.
    double diameter() const { return d_.maxCoeff(); }

private:
    Eigen::MatrixXd d_;
    Metric metric_ = Metric::Euclidean;
};

/// Pairwise distance between two coordinate vectors under the named metric.
double point_distance(const Eigen::RowVectorXd& a, const Eigen::RowVectorXd& b, Metric metric);

/// Builds the full symmetric pairwise distance matrix of a cloud.
/// `threads` > 1 splits rows across workers; the result does not depend on it.
DistanceMatrix build_distance_matrix(const PointCloud& cloud, Metric metric, int threads = 1);

/// Wraps a user-supplied matrix; validates symmetry, zero diagonal and nonnegativity.
DistanceMatrix distance_matrix_from_precomputed(Eigen::MatrixXd d);

} // namespace tda
