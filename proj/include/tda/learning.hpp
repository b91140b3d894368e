#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "tda/kernels.hpp"
#include "tda/persistence.hpp"

namespace tda {

struct RegressionSample {
    PersistenceDiagram diagram;
    double response = 0.0;
    std::optional<long> group;
};

struct ClassificationSample {
    PersistenceDiagram diagram;
    int label = 1; // -1 or +1
};

struct SvmConfig {
    double eta = 1.0;  // box bound |alpha_i| <= eta
    double mu = 0.0;   // bias-penalty weight; 0 enforces sum_i alpha_i y_i = 0 instead
    double tol = 1e-6; // KKT violation tolerance
    long max_iter = 2000000;
    std::function<void(double)> iteration_observer; // dual objective after each step
};

struct SvmModel {
    Eigen::VectorXd alpha; // dual variables, |alpha_i| <= eta
    Eigen::VectorXd beta;  // decision weights: f(D) = sum_i beta_i K(D_i, D) + bias
    double bias = 0.0;
    std::vector<int> support; // indices with nonzero decision weight
    std::vector<int> labels;
    SvmConfig config;
    double dual_objective = 0.0;
    long iterations = 0;

    // set by the diagram-level trainers so the model can score new diagrams
    KernelSpec spec;
    std::shared_ptr<const std::vector<PersistenceDiagram>> train_diagrams;
};

/// Maximizes -1/2 a' G a + a' 1 - mu a' y over |a_i| <= eta with G = YKY,
/// by maximal-violating-pair coordinate ascent. K must be PSD within -1e-8;
/// indefinite input is refused (use ksvm_train or a spectral transform).
SvmModel svm_train(const Eigen::MatrixXd& k, const std::vector<int>& labels,
                   const SvmConfig& cfg = {});

/// Krein-space SVM: eigendecomposes G = YKY, flips negative eigenvalues
/// (S = sign spectrum), solves the flipped problem with svm_train's solver,
/// and maps the coefficients back with U S U^t so the decision function uses
/// the original indefinite kernel.
SvmModel ksvm_train(const Eigen::MatrixXd& k, const std::vector<int>& labels,
                    const SvmConfig& cfg = {});

/// sign(sum_i beta_i k_row[i] + bias); an exact zero scores +1.
int svm_predict(const SvmModel& model, const Eigen::VectorXd& k_row);
int svm_predict(const SvmModel& model, const PersistenceDiagram& d,
                WassersteinCache* cache = nullptr);

enum class TrainMethod { Svm, Ksvm };

/// Kernel-matrix construction plus training over diagram samples; stores the
/// diagrams and spec in the model for later prediction.
SvmModel train_classifier(const std::vector<ClassificationSample>& samples,
                          const KernelSpec& spec, const SvmConfig& cfg,
                          TrainMethod method, WassersteinCache* cache = nullptr);

double nw_predict(const std::vector<RegressionSample>& train, const PersistenceDiagram& d,
                  const KernelSpec& spec, WassersteinCache* cache = nullptr);

/// Smallest leave-one-out squared-error bandwidth from the grid; ties go to
/// the larger bandwidth. Grid points where some prediction is undefined are
/// skipped; if every one is, selection fails.
double loo_bandwidth(const std::vector<RegressionSample>& train, const KernelSpec& spec_family,
                     const std::vector<double>& h_grid, WassersteinCache* cache = nullptr);

/// Two-stage partially linear fit: group intercepts by least squares on
/// kernel-residualized responses/indicators, then a kernel smoother on the
/// intercept-adjusted responses. The first (smallest id) group is the
/// reference with intercept 0.
struct PlmFit {
    std::vector<long> group_ids;  // sorted distinct ids; group_ids[0] is the reference
    Eigen::VectorXd intercepts;   // aligned with group_ids; intercepts[0] == 0
    std::vector<RegressionSample> adjusted; // training samples with intercepts removed
    KernelSpec spec;

    double intercept_for(long group) const;
    double predict(const PersistenceDiagram& d, long group,
                   WassersteinCache* cache = nullptr) const;
};

PlmFit robinson_plm_fit(const std::vector<RegressionSample>& train, const KernelSpec& spec,
                        double bandwidth, WassersteinCache* cache = nullptr);

double rss(const std::vector<double>& fitted, const std::vector<double>& observed);

struct CvReport {
    int k = 0;
    std::uint32_t seed = 0;
    std::vector<double> fold_rates;
    double mean_rate = 0.0;
    double sd_rate = 0.0; // sample standard deviation over folds
    std::vector<std::string> warnings;
};

/// Predicted labels for test_idx after fitting on train_idx (indices into the
/// caller's sample list).
using FoldClassifier =
    std::function<std::vector<int>(const std::vector<int>&, const std::vector<int>&)>;

/// Seeded shuffle, contiguous folds, per-fold misclassification rates.
/// Single-class training folds are evaluated anyway and recorded as warnings.
CvReport kfold_cv(const std::vector<int>& labels, const FoldClassifier& classifier, int k,
                  std::uint32_t seed);

enum class CvMethod { Ksvm, Clip, Flip, Square, Svm };

std::string cv_method_name(CvMethod m);
CvMethod cv_method_from_name(const std::string& name);

/// Fold classifier over a precomputed Gram matrix. Clip/flip/square transform
/// the full matrix once and train a plain SVM on its principal submatrices;
/// Ksvm re-solves the sign-flip per fold and predicts with original rows.
FoldClassifier make_kernel_svm_classifier(const Eigen::MatrixXd& k,
                                          const std::vector<int>& labels, const SvmConfig& cfg,
                                          CvMethod method);

/// Deterministic Fisher-Yates permutation of 0..n-1 (identical across
/// platforms for a fixed seed).
std::vector<int> seeded_permutation(int n, std::uint32_t seed);

} // namespace tda
