#include "tda/distance_matrix.hpp"

#include <cmath>
#include <thread>
#include <vector>

namespace tda {

std::string metric_name(Metric m) {
    switch (m) {
    case Metric::Euclidean: return "euclidean";
    case Metric::Manhattan: return "manhattan";
    case Metric::Chebyshev: return "chebyshev";
    case Metric::Precomputed: return "precomputed";
    }
    return "euclidean";
}

Metric metric_from_name(const std::string& name) {
    if (name == "euclidean") return Metric::Euclidean;
    if (name == "manhattan") return Metric::Manhattan;
    if (name == "chebyshev") return Metric::Chebyshev;
    if (name == "precomputed") return Metric::Precomputed;
    throw ConfigError("unknown metric: " + name);
}

DistanceMatrix::DistanceMatrix(Eigen::MatrixXd d, Metric metric) : d_(std::move(d)), metric_(metric) {
    if (d_.rows() != d_.cols())
        throw InputError("distance matrix must be square");
    if (d_.rows() == 0)
        throw InputError("distance matrix must be nonempty");
}

double point_distance(const Eigen::RowVectorXd& a, const Eigen::RowVectorXd& b, Metric metric) {
    switch (metric) {
    case Metric::Euclidean: return (a - b).norm();
    case Metric::Manhattan: return (a - b).lpNorm<1>();
    case Metric::Chebyshev: return (a - b).lpNorm<Eigen::Infinity>();
    case Metric::Precomputed:
        throw ConfigError("cannot evaluate the 'precomputed' metric on coordinates");
    }
    return 0.0;
}

DistanceMatrix build_distance_matrix(const PointCloud& cloud, Metric metric, int threads) {
    if (metric == Metric::Precomputed)
        throw ConfigError("build_distance_matrix requires a coordinate metric, not 'precomputed'");
    const Eigen::Index n = cloud.size();
    Eigen::MatrixXd d = Eigen::MatrixXd::Zero(n, n);

    auto fill_rows = [&](Eigen::Index begin, Eigen::Index end) {
        for (Eigen::Index i = begin; i < end; ++i)
            for (Eigen::Index j = i + 1; j < n; ++j)
                d(i, j) = point_distance(cloud.point(i), cloud.point(j), metric);
    };

    if (threads <= 1 || n < 64) {
        fill_rows(0, n);
    } else {
        const int workers = std::min<long>(threads, n);
        std::vector<std::thread> pool;
        pool.reserve(workers);
        for (int w = 0; w < workers; ++w) {
            const Eigen::Index begin = n * w / workers;
            const Eigen::Index end = n * (w + 1) / workers;
            pool.emplace_back(fill_rows, begin, end);
        }
        for (auto& t : pool) t.join();
    }

    d = d.selfadjointView<Eigen::Upper>();
    return DistanceMatrix(std::move(d), metric);
}

DistanceMatrix distance_matrix_from_precomputed(Eigen::MatrixXd d) {
    if (d.rows() != d.cols())
        throw InputError("precomputed distance matrix must be square");
    const Eigen::Index n = d.rows();
    for (Eigen::Index i = 0; i < n; ++i) {
        if (d(i, i) != 0.0)
            throw InputError("precomputed distance matrix must have a zero diagonal");
        for (Eigen::Index j = 0; j < n; ++j) {
            if (!std::isfinite(d(i, j)) || d(i, j) < 0.0)
                throw InputError("precomputed distances must be finite and nonnegative");
            if (d(i, j) != d(j, i))
                throw InputError("precomputed distance matrix must be symmetric");
        }
    }
    return DistanceMatrix(std::move(d), Metric::Precomputed);
}

} // namespace tda
