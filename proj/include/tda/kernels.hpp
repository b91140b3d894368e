#pragma once

#include <cstdint>
#include <functional>
#include <mutex>
#include <random>
#include <string>
#include <unordered_map>
#include <vector>

#include <Eigen/Dense>

#include "tda/diagram_metrics.hpp"
#include "tda/persistence.hpp"

namespace tda {

enum class KernelKind { GeodesicGaussian, GeodesicLaplacian, Pss, Pwg, LandscapeL2 };

std::string kernel_kind_name(KernelKind k);
KernelKind kernel_kind_from_name(const std::string& name);

struct KernelSpec {
    KernelKind kind = KernelKind::GeodesicGaussian;

    // geodesic kinds
    double h = 1.0;
    Ground ground = Ground::L2;
    double p = 2.0; // Wasserstein order fed to the transport solver

    // pss: sigma; pwg: (sigma, tau, c, q) with sigma reused as the outer bandwidth
    double sigma = 1.0;
    double tau = 1.0;
    double c = 1.0;
    double q = 1.0;
    // exponentiate the three-term sum squared instead of as-is (the literal
    // d_G^2 reading; see README on the two readings)
    bool pwg_square_dg = false;

    // landscape_l2
    int k_max = 3;
    std::vector<double> t_grid;

    /// Compact `key=value` list for file headers and reports.
    std::string params_string() const;
};

void validate_kernel_spec(const KernelSpec& spec);

/// Spec with the kind's smoothing bandwidth (h or sigma) replaced; used by
/// bandwidth selection.
KernelSpec with_bandwidth(const KernelSpec& spec, double bandwidth);

/// Cache of transport distances keyed by diagram content, safe under
/// concurrent insertion (all writers compute identical values).
class WassersteinCache {
public:
    double distance(const PersistenceDiagram& a, const PersistenceDiagram& b,
                    Ground ground, double p);
    std::size_t size() const;

private:
    struct Key {
        std::uint64_t lo, hi;
        int ground;
        double p;
        bool operator==(const Key&) const = default;
    };
    struct KeyHash {
        std::size_t operator()(const Key& k) const;
    };
    mutable std::mutex mu_;
    std::unordered_map<Key, double, KeyHash> map_;
};

double k_geodesic_gaussian(const PersistenceDiagram& a, const PersistenceDiagram& b,
                           double h, Ground ground, double p = 2.0);
double k_geodesic_laplacian(const PersistenceDiagram& a, const PersistenceDiagram& b,
                            double h, Ground ground, double p = 2.0);
double k_pss(const PersistenceDiagram& a, const PersistenceDiagram& b, double sigma);
double k_pwg(const PersistenceDiagram& a, const PersistenceDiagram& b, double sigma,
             double tau, double c, double q, bool square_dg = false);

/// Single kernel evaluation under `spec`; the optional cache short-circuits
/// the transport solve for geodesic kinds.
double kernel_value(const PersistenceDiagram& a, const PersistenceDiagram& b,
                    const KernelSpec& spec, WassersteinCache* cache = nullptr);

/// Symmetric Gram matrix with a lazy eigendecomposition.
class KernelMatrix {
public:
    KernelMatrix(Eigen::MatrixXd k, KernelSpec spec);

    const Eigen::MatrixXd& matrix() const { return k_; }
    const KernelSpec& spec() const { return spec_; }
    int size() const { return static_cast<int>(k_.rows()); }

    const Eigen::VectorXd& eigenvalues() const;
    const Eigen::MatrixXd& eigenvectors() const;
    double min_eigenvalue() const;

private:
    void ensure_eigen() const;

    Eigen::MatrixXd k_;
    KernelSpec spec_;
    mutable bool eig_done_ = false;
    mutable Eigen::VectorXd evals_;
    mutable Eigen::MatrixXd evecs_;
};

/// Pairwise kernel matrix; each distinct transport distance is solved once
/// (shared cache) and entries may be evaluated in parallel.
KernelMatrix kernel_matrix(const std::vector<PersistenceDiagram>& diagrams,
                           const KernelSpec& spec, int threads = 1,
                           WassersteinCache* cache = nullptr);

enum class SpectralMode { Clip, Flip, Square };

std::string spectral_mode_name(SpectralMode m);
SpectralMode spectral_mode_from_name(const std::string& name);

/// Eigenvalue surgery U g(L) U^t: clip = max(0, .), flip = |.|, square = .^2.
/// The result is symmetric positive semidefinite.
KernelMatrix spectral_transform(const KernelMatrix& k, SpectralMode mode);

using DiagramCollectionGenerator = std::function<std::vector<PersistenceDiagram>(std::mt19937&)>;

struct WitnessResult {
    double min_eigenvalue = std::numeric_limits<double>::infinity();
    std::vector<PersistenceDiagram> collection; // collection realizing it
    double bandwidth = 0.0;                     // bandwidth at which it was seen
    int trial = -1;
    bool found = false; // min_eigenvalue < -1e-8
};

/// Random search for an indefinite Gram matrix: draws `trials` collections,
/// scans a bandwidth ladder for geodesic kinds, and keeps the most negative
/// eigenvalue seen (returned even when no witness is certified).
WitnessResult indefiniteness_witness(const DiagramCollectionGenerator& gen,
                                     const KernelSpec& spec, int trials, std::uint32_t seed);

} // namespace tda
