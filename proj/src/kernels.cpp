#include "tda/kernels.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numbers>
#include <sstream>
#include <thread>

#include "tda/errors.hpp"
#include "tda/summaries.hpp"

namespace tda {

std::string kernel_kind_name(KernelKind k) {
    switch (k) {
        case KernelKind::GeodesicGaussian: return "geodesic_gaussian";
        case KernelKind::GeodesicLaplacian: return "geodesic_laplacian";
        case KernelKind::Pss: return "pss";
        case KernelKind::Pwg: return "pwg";
        case KernelKind::LandscapeL2: return "landscape_l2";
    }
    throw ConfigError("unreachable kernel kind");
}

KernelKind kernel_kind_from_name(const std::string& name) {
    if (name == "geodesic_gaussian") return KernelKind::GeodesicGaussian;
    if (name == "geodesic_laplacian") return KernelKind::GeodesicLaplacian;
    if (name == "pss") return KernelKind::Pss;
    if (name == "pwg") return KernelKind::Pwg;
    if (name == "landscape_l2") return KernelKind::LandscapeL2;
    throw ConfigError("unknown kernel kind '" + name + "'");
}

std::string KernelSpec::params_string() const {
    std::ostringstream os;
    os.precision(17);
    switch (kind) {
        case KernelKind::GeodesicGaussian:
        case KernelKind::GeodesicLaplacian:
            os << "h=" << h << " ground=" << ground_name(ground) << " p=" << p;
            break;
        case KernelKind::Pss:
            os << "sigma=" << sigma;
            break;
        case KernelKind::Pwg:
            os << "sigma=" << sigma << " tau=" << tau << " c=" << c << " q=" << q
               << " square_dg=" << (pwg_square_dg ? 1 : 0);
            break;
        case KernelKind::LandscapeL2:
            os << "k_max=" << k_max << " t_grid=" << t_grid.size() << "pts";
            if (!t_grid.empty()) os << " t0=" << t_grid.front() << " t1=" << t_grid.back();
            break;
    }
    return os.str();
}

void validate_kernel_spec(const KernelSpec& spec) {
    switch (spec.kind) {
        case KernelKind::GeodesicGaussian:
        case KernelKind::GeodesicLaplacian:
            if (!(spec.h > 0)) throw ConfigError("geodesic kernel bandwidth h must be > 0");
            if (std::isnan(spec.p) || spec.p < 1.0)
                throw ConfigError("geodesic kernel transport order p must be >= 1");
            break;
        case KernelKind::Pss:
            if (!(spec.sigma > 0)) throw ConfigError("pss kernel sigma must be > 0");
            break;
        case KernelKind::Pwg:
            if (!(spec.sigma > 0) || !(spec.tau > 0) || !(spec.c > 0) || !(spec.q > 0))
                throw ConfigError("pwg kernel parameters (sigma, tau, c, q) must all be > 0");
            break;
        case KernelKind::LandscapeL2:
            if (spec.k_max < 1) throw ConfigError("landscape kernel k_max must be >= 1");
            if (spec.t_grid.size() < 2)
                throw ConfigError("landscape kernel needs a t_grid with >= 2 points");
            if (!std::is_sorted(spec.t_grid.begin(), spec.t_grid.end()))
                throw ConfigError("landscape kernel t_grid must be sorted ascending");
            break;
    }
}

KernelSpec with_bandwidth(const KernelSpec& spec, double bandwidth) {
    KernelSpec out = spec;
    switch (spec.kind) {
        case KernelKind::GeodesicGaussian:
        case KernelKind::GeodesicLaplacian:
            out.h = bandwidth;
            break;
        case KernelKind::Pss:
        case KernelKind::Pwg:
            out.sigma = bandwidth;
            break;
        case KernelKind::LandscapeL2:
            throw ConfigError("landscape kernel has no smoothing bandwidth to select");
    }
    validate_kernel_spec(out);
    return out;
}

std::size_t WassersteinCache::KeyHash::operator()(const Key& k) const {
    std::uint64_t h = 14695981039346656037ull;
    auto mix = [&h](std::uint64_t v) {
        h ^= v;
        h *= 1099511628211ull;
        h ^= h >> 29;
    };
    mix(k.lo);
    mix(k.hi);
    mix(static_cast<std::uint64_t>(k.ground));
    mix(std::bit_cast<std::uint64_t>(k.p));
    return static_cast<std::size_t>(h);
}

double WassersteinCache::distance(const PersistenceDiagram& a, const PersistenceDiagram& b,
                                  Ground ground, double p) {
    const std::uint64_t ha = diagram_content_hash(a);
    const std::uint64_t hb = diagram_content_hash(b);
    const Key key{std::min(ha, hb), std::max(ha, hb), static_cast<int>(ground), p};
    {
        std::lock_guard<std::mutex> lock(mu_);
        auto it = map_.find(key);
        if (it != map_.end()) return it->second;
    }
    const double d = wasserstein(a, b, {ground, p}).value;
    std::lock_guard<std::mutex> lock(mu_);
    map_[key] = d; // last write wins; all writers agree
    return d;
}

std::size_t WassersteinCache::size() const {
    std::lock_guard<std::mutex> lock(mu_);
    return map_.size();
}

namespace {

double transport_distance(const PersistenceDiagram& a, const PersistenceDiagram& b,
                          Ground ground, double p, WassersteinCache* cache) {
    if (cache) return cache->distance(a, b, ground, p);
    return wasserstein(a, b, {ground, p}).value;
}

double pss_value(const PersistenceDiagram& a, const PersistenceDiagram& b, double sigma) {
    double sum = 0.0;
    for (const auto& x : a.points)
        for (const auto& y : b.points) {
            const double db = x.birth - y.birth, dd = x.death - y.death;
            const double mb = x.birth - y.death, md = x.death - y.birth;
            sum += std::exp(-(db * db + dd * dd) / (8.0 * sigma)) -
                   std::exp(-(mb * mb + md * md) / (8.0 * sigma));
        }
    return sum / (8.0 * std::numbers::pi * sigma);
}

double pwg_embedding_product(const PersistenceDiagram& a, const PersistenceDiagram& b,
                             double tau, double c, double q) {
    double sum = 0.0;
    for (const auto& x : a.points) {
        const double wx = std::atan(c * std::pow(x.pers(), q));
        for (const auto& y : b.points) {
            const double wy = std::atan(c * std::pow(y.pers(), q));
            const double db = x.birth - y.birth, dd = x.death - y.death;
            sum += wx * wy * std::exp(-(db * db + dd * dd) / (2.0 * tau * tau));
        }
    }
    return sum;
}

} // namespace

double k_geodesic_gaussian(const PersistenceDiagram& a, const PersistenceDiagram& b,
                           double h, Ground ground, double p) {
    if (!(h > 0)) throw ConfigError("geodesic kernel bandwidth h must be > 0");
    const double w = wasserstein(a, b, {ground, p}).value;
    return std::exp(-(w * w) / h);
}

double k_geodesic_laplacian(const PersistenceDiagram& a, const PersistenceDiagram& b,
                            double h, Ground ground, double p) {
    if (!(h > 0)) throw ConfigError("geodesic kernel bandwidth h must be > 0");
    const double w = wasserstein(a, b, {ground, p}).value;
    return std::exp(-w / h);
}

double k_pss(const PersistenceDiagram& a, const PersistenceDiagram& b, double sigma) {
    if (!(sigma > 0)) throw ConfigError("pss kernel sigma must be > 0");
    // canonical argument order keeps the summation order, hence the value,
    // exactly symmetric
    return diagram_content_less(b, a) ? pss_value(b, a, sigma) : pss_value(a, b, sigma);
}

double k_pwg(const PersistenceDiagram& a, const PersistenceDiagram& b, double sigma,
             double tau, double c, double q, bool square_dg) {
    if (!(sigma > 0) || !(tau > 0) || !(c > 0) || !(q > 0))
        throw ConfigError("pwg kernel parameters (sigma, tau, c, q) must all be > 0");
    const PersistenceDiagram& lhs = diagram_content_less(b, a) ? b : a;
    const PersistenceDiagram& rhs = (&lhs == &a) ? b : a;
    const double saa = pwg_embedding_product(lhs, lhs, tau, c, q);
    const double sbb = pwg_embedding_product(rhs, rhs, tau, c, q);
    const double sab = pwg_embedding_product(lhs, rhs, tau, c, q);
    const double dg = std::max(0.0, (saa + sbb) - 2.0 * sab);
    const double arg = square_dg ? dg * dg : dg;
    return std::exp(-arg / (2.0 * sigma * sigma));
}

double kernel_value(const PersistenceDiagram& a, const PersistenceDiagram& b,
                    const KernelSpec& spec, WassersteinCache* cache) {
    validate_kernel_spec(spec);
    switch (spec.kind) {
        case KernelKind::GeodesicGaussian: {
            const double w = transport_distance(a, b, spec.ground, spec.p, cache);
            return std::exp(-(w * w) / spec.h);
        }
        case KernelKind::GeodesicLaplacian: {
            const double w = transport_distance(a, b, spec.ground, spec.p, cache);
            return std::exp(-w / spec.h);
        }
        case KernelKind::Pss:
            return k_pss(a, b, spec.sigma);
        case KernelKind::Pwg:
            return k_pwg(a, b, spec.sigma, spec.tau, spec.c, spec.q, spec.pwg_square_dg);
        case KernelKind::LandscapeL2:
            return landscape_l2_inner(a, b, spec.k_max, spec.t_grid);
    }
    throw ConfigError("unreachable kernel kind");
}

KernelMatrix::KernelMatrix(Eigen::MatrixXd k, KernelSpec spec)
    : k_(std::move(k)), spec_(std::move(spec)) {
    if (k_.rows() == 0 || k_.rows() != k_.cols())
        throw InputError("kernel matrix must be square and nonempty");
    if (!k_.allFinite()) throw NumericError("kernel matrix has non-finite entries");
    const double asym = (k_ - k_.transpose()).cwiseAbs().maxCoeff();
    if (asym > 1e-12)
        throw NumericError("kernel matrix asymmetric beyond 1e-12 (max deviation " +
                           std::to_string(asym) + ")");
}

void KernelMatrix::ensure_eigen() const {
    if (eig_done_) return;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(k_);
    if (es.info() != Eigen::Success)
        throw NumericError("kernel matrix eigendecomposition failed");
    evals_ = es.eigenvalues();
    evecs_ = es.eigenvectors();
    eig_done_ = true;
}

const Eigen::VectorXd& KernelMatrix::eigenvalues() const {
    ensure_eigen();
    return evals_;
}

const Eigen::MatrixXd& KernelMatrix::eigenvectors() const {
    ensure_eigen();
    return evecs_;
}

double KernelMatrix::min_eigenvalue() const {
    ensure_eigen();
    return evals_.minCoeff();
}

KernelMatrix kernel_matrix(const std::vector<PersistenceDiagram>& diagrams,
                           const KernelSpec& spec, int threads, WassersteinCache* cache) {
    validate_kernel_spec(spec);
    const int n = static_cast<int>(diagrams.size());
    if (n < 1) throw InputError("kernel matrix needs at least one diagram");

    WassersteinCache local;
    if (!cache) cache = &local;

    std::vector<std::pair<int, int>> entries;
    entries.reserve(static_cast<std::size_t>(n) * (n + 1) / 2);
    for (int i = 0; i < n; ++i)
        for (int j = i; j < n; ++j) entries.emplace_back(i, j);

    Eigen::MatrixXd k(n, n);
    auto run = [&](std::size_t begin, std::size_t end) {
        for (std::size_t e = begin; e < end; ++e) {
            const auto [i, j] = entries[e];
            const double v = kernel_value(diagrams[i], diagrams[j], spec, cache);
            k(i, j) = v;
            k(j, i) = v;
        }
    };

    const int workers = std::max(1, threads);
    if (workers == 1 || entries.size() < 32) {
        run(0, entries.size());
    } else {
        std::vector<std::thread> pool;
        const std::size_t chunk = (entries.size() + workers - 1) / workers;
        for (int w = 0; w < workers; ++w) {
            const std::size_t begin = std::min(entries.size(), w * chunk);
            const std::size_t end = std::min(entries.size(), begin + chunk);
            if (begin < end) pool.emplace_back(run, begin, end);
        }
        for (auto& t : pool) t.join();
    }
    return KernelMatrix(std::move(k), spec);
}

std::string spectral_mode_name(SpectralMode m) {
    switch (m) {
        case SpectralMode::Clip: return "clip";
        case SpectralMode::Flip: return "flip";
        case SpectralMode::Square: return "square";
    }
    throw ConfigError("unreachable spectral mode");
}

SpectralMode spectral_mode_from_name(const std::string& name) {
    if (name == "clip") return SpectralMode::Clip;
    if (name == "flip") return SpectralMode::Flip;
    if (name == "square") return SpectralMode::Square;
    throw ConfigError("unknown spectral mode '" + name + "' (expected clip, flip or square)");
}

KernelMatrix spectral_transform(const KernelMatrix& k, SpectralMode mode) {
    const Eigen::VectorXd& lam = k.eigenvalues();
    const Eigen::MatrixXd& u = k.eigenvectors();
    Eigen::VectorXd g(lam.size());
    for (Eigen::Index i = 0; i < lam.size(); ++i) {
        switch (mode) {
            case SpectralMode::Clip: g[i] = std::max(lam[i], 0.0); break;
            case SpectralMode::Flip: g[i] = std::abs(lam[i]); break;
            case SpectralMode::Square: g[i] = lam[i] * lam[i]; break;
        }
    }
    Eigen::MatrixXd out = u * g.asDiagonal() * u.transpose();
    out = 0.5 * (out + out.transpose()).eval();
    return KernelMatrix(std::move(out), k.spec());
}

WitnessResult indefiniteness_witness(const DiagramCollectionGenerator& gen,
                                     const KernelSpec& spec, int trials, std::uint32_t seed) {
    if (trials < 1) throw ConfigError("witness search needs trials >= 1");
    validate_kernel_spec(spec);

    const bool geodesic = spec.kind == KernelKind::GeodesicGaussian ||
                          spec.kind == KernelKind::GeodesicLaplacian;
    static constexpr double kLadder[] = {0.05, 0.1, 0.25, 0.5, 1.0, 2.0};

    std::mt19937 rng(seed);
    WitnessResult best;
    for (int trial = 0; trial < trials; ++trial) {
        auto collection = gen(rng);
        if (collection.size() < 2) continue;
        const int n = static_cast<int>(collection.size());

        std::vector<double> bandwidths;
        Eigen::MatrixXd w;
        if (geodesic) {
            // one transport solve per pair, then sweep a bandwidth ladder
            // scaled to the squared-distance median
            w.setZero(n, n);
            std::vector<double> sq;
            for (int i = 0; i < n; ++i)
                for (int j = i + 1; j < n; ++j) {
                    w(i, j) = w(j, i) =
                        wasserstein(collection[i], collection[j], {spec.ground, spec.p}).value;
                    sq.push_back(w(i, j) * w(i, j));
                }
            std::sort(sq.begin(), sq.end());
            const double med = sq.empty() ? 0.0 : sq[sq.size() / 2];
            const double base = med > 0 ? med : 1.0;
            for (double f : kLadder) bandwidths.push_back(f * base);
        } else {
            bandwidths.push_back(0.0); // parameters fixed by the spec itself
        }

        for (double bw : bandwidths) {
            Eigen::MatrixXd k(n, n);
            if (geodesic) {
                for (int i = 0; i < n; ++i)
                    for (int j = i; j < n; ++j) {
                        const double wij = w(i, j);
                        const double v = spec.kind == KernelKind::GeodesicGaussian
                                             ? std::exp(-(wij * wij) / bw)
                                             : std::exp(-wij / bw);
                        k(i, j) = k(j, i) = v;
                    }
            } else {
                for (int i = 0; i < n; ++i)
                    for (int j = i; j < n; ++j)
                        k(i, j) = k(j, i) = kernel_value(collection[i], collection[j], spec);
            }
            Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(k, Eigen::EigenvaluesOnly);
            if (es.info() != Eigen::Success) continue;
            const double lo = es.eigenvalues().minCoeff();
            if (lo < best.min_eigenvalue) {
                best.min_eigenvalue = lo;
                best.collection = collection;
                best.bandwidth = geodesic ? bw : spec.sigma;
                best.trial = trial;
            }
        }
    }
    best.found = best.min_eigenvalue < -1e-8;
    return best;
}

} // namespace tda
