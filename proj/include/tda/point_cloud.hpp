#pragma once

#include <Eigen/Dense>

#include "tda/errors.hpp"

namespace tda {

/// A finite point cloud, one point per row. Immutable after construction.
class PointCloud {
public:
    PointCloud() = default;

    /// Throws InputError if the matrix is empty or contains NaN/inf.
    explicit PointCloud(Eigen::MatrixXd points) : points_(std::move(points)) {
        if (points_.rows() == 0 || points_.cols() == 0)
            throw InputError("point cloud must contain at least one point");
        if (!points_.allFinite())
            throw InputError("point cloud contains NaN or infinite coordinates");
    }

    const Eigen::MatrixXd& points() const { return points_; }
    Eigen::Index size() const { return points_.rows(); }
    Eigen::Index ambient_dim() const { return points_.cols(); }
    Eigen::RowVectorXd point(Eigen::Index i) const { return points_.row(i); }

private:
    Eigen::MatrixXd points_;
};

} // namespace tda
