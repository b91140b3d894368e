#include "tda/learning.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "tda/errors.hpp"

namespace tda {

namespace {

void check_labels(const std::vector<int>& labels) {
    if (labels.empty()) throw InputError("need at least one labeled sample");
    for (int y : labels)
        if (y != -1 && y != 1) throw InputError("labels must be -1 or +1");
}

void check_svm_config(const SvmConfig& cfg) {
    if (!(cfg.eta > 0)) throw ConfigError("svm box bound eta must be > 0");
    if (!(cfg.tol > 0)) throw ConfigError("svm tolerance must be > 0");
}

double dual_objective(const Eigen::MatrixXd& k, const Eigen::VectorXd& beta,
                      const Eigen::VectorXd& y, double mu) {
    return -0.5 * beta.dot(k * beta) + y.dot(beta) - mu * beta.sum();
}

/// Working-set pair ascent on the sum-constrained dual (mu = 0 path).
/// beta_i = y_i alpha_i; gradient g = y - K beta; sum(beta) stays 0.
/// Stops on the maximal violating pair; steps with the second-order best
/// partner for the top gradient, which converges far faster on ill-scaled
/// matrices (square-transformed kernels in particular).
void solve_pair_ascent(const Eigen::MatrixXd& k, const Eigen::VectorXd& y, const SvmConfig& cfg,
                       Eigen::VectorXd& beta, Eigen::VectorXd& g, long& iters) {
    const int n = static_cast<int>(y.size());
    const double eta = cfg.eta;
    const Eigen::VectorXd diag = k.diagonal();
    for (iters = 0;; ++iters) {
        int iu = -1, id = -1;
        for (int i = 0; i < n; ++i) {
            if (beta[i] < eta && (iu < 0 || g[i] > g[iu])) iu = i;
            if (beta[i] > -eta && (id < 0 || g[i] < g[id])) id = i;
        }
        if (iu < 0 || id < 0 || g[iu] - g[id] <= cfg.tol) return;
        if (iters >= cfg.max_iter)
            throw NumericError("svm solver exceeded its iteration budget before reaching the "
                               "KKT tolerance");

        const auto ku = k.col(iu);
        int jb = id;
        double best_gain = -1.0;
        for (int j = 0; j < n; ++j) {
            if (beta[j] <= -eta || g[j] >= g[iu]) continue;
            const double diff = g[iu] - g[j];
            const double c = std::max(diag[iu] + diag[j] - 2.0 * ku[j], 1e-12);
            const double gain = diff * diff / c;
            if (gain > best_gain) {
                best_gain = gain;
                jb = j;
            }
        }

        const double room = std::min(eta - beta[iu], beta[jb] + eta);
        const double curv = diag[iu] + diag[jb] - 2.0 * ku[jb];
        double step = room;
        if (curv > 1e-12) step = std::min(room, (g[iu] - g[jb]) / curv);
        beta[iu] = std::clamp(beta[iu] + step, -eta, eta);
        beta[jb] = std::clamp(beta[jb] - step, -eta, eta);
        g -= step * (ku - k.col(jb));
        if (cfg.iteration_observer)
            cfg.iteration_observer(dual_objective(k, beta, y, 0.0));
    }
}

/// Single-coordinate ascent for the penalized-bias dual (mu != 0): the sum
/// constraint is dropped and each coordinate moves to its clipped optimum.
void solve_coordinate_ascent(const Eigen::MatrixXd& k, const Eigen::VectorXd& y,
                             const SvmConfig& cfg, Eigen::VectorXd& beta, Eigen::VectorXd& g,
                             long& iters) {
    const int n = static_cast<int>(y.size());
    const double eta = cfg.eta;
    for (iters = 0;; ++iters) {
        int best = -1;
        double viol = 0.0;
        for (int i = 0; i < n; ++i) {
            double v = 0.0;
            if (beta[i] < eta) v = std::max(v, g[i]);
            if (beta[i] > -eta) v = std::max(v, -g[i]);
            if (v > viol) {
                viol = v;
                best = i;
            }
        }
        if (best < 0 || viol <= cfg.tol) return;
        if (iters >= cfg.max_iter)
            throw NumericError("svm solver exceeded its iteration budget before reaching the "
                               "KKT tolerance");

        const int i = best;
        double target;
        if (k(i, i) > 1e-12)
            target = beta[i] + g[i] / k(i, i);
        else
            target = g[i] > 0 ? eta : -eta;
        target = std::clamp(target, -eta, eta);
        const double step = target - beta[i];
        beta[i] = target;
        g -= step * k.col(i);
        if (cfg.iteration_observer)
            cfg.iteration_observer(dual_objective(k, beta, y, cfg.mu));
    }
}

double recover_bias(const Eigen::VectorXd& beta, const Eigen::VectorXd& g, double eta,
                    double mu) {
    // margin points: y_i - (K beta)_i = g_i + mu must equal the bias
    const double bound_eps = 1e-9 * eta;
    double sum = 0.0;
    int count = 0;
    double lo = -std::numeric_limits<double>::infinity();
    double hi = std::numeric_limits<double>::infinity();
    for (Eigen::Index i = 0; i < beta.size(); ++i) {
        const double margin = g[i] + mu;
        if (eta - std::abs(beta[i]) > bound_eps) {
            sum += margin;
            ++count;
        } else if (beta[i] > 0) {
            hi = std::min(hi, margin);
        } else {
            lo = std::max(lo, margin);
        }
    }
    if (count > 0) return sum / count;
    if (std::isfinite(lo) && std::isfinite(hi)) return 0.5 * (lo + hi);
    if (std::isfinite(lo)) return lo;
    if (std::isfinite(hi)) return hi;
    return 0.0;
}

SvmModel solve_box_dual(const Eigen::MatrixXd& k, const std::vector<int>& labels,
                        const SvmConfig& cfg) {
    const int n = static_cast<int>(labels.size());
    Eigen::VectorXd y(n);
    for (int i = 0; i < n; ++i) y[i] = labels[i];

    Eigen::VectorXd beta = Eigen::VectorXd::Zero(n);
    Eigen::VectorXd g = y.array() - cfg.mu;
    long iters = 0;
    if (cfg.mu == 0.0)
        solve_pair_ascent(k, y, cfg, beta, g, iters);
    else
        solve_coordinate_ascent(k, y, cfg, beta, g, iters);

    SvmModel model;
    model.beta = beta;
    model.alpha = y.cwiseProduct(beta);
    model.bias = recover_bias(beta, g, cfg.eta, cfg.mu);
    model.labels = labels;
    model.config = cfg;
    model.dual_objective = dual_objective(k, beta, y, cfg.mu);
    model.iterations = iters;
    for (int i = 0; i < n; ++i)
        if (std::abs(beta[i]) > 1e-12) model.support.push_back(i);
    return model;
}

void check_kernel_arg(const Eigen::MatrixXd& k, std::size_t n) {
    if (k.rows() != k.cols() || static_cast<std::size_t>(k.rows()) != n)
        throw InputError("kernel matrix shape does not match the label count");
    if (!k.allFinite()) throw NumericError("kernel matrix has non-finite entries");
}

Eigen::MatrixXd submatrix(const Eigen::MatrixXd& m, const std::vector<int>& rows,
                          const std::vector<int>& cols) {
    Eigen::MatrixXd out(rows.size(), cols.size());
    for (std::size_t i = 0; i < rows.size(); ++i)
        for (std::size_t j = 0; j < cols.size(); ++j) out(i, j) = m(rows[i], cols[j]);
    return out;
}

} // namespace

SvmModel svm_train(const Eigen::MatrixXd& k, const std::vector<int>& labels,
                   const SvmConfig& cfg) {
    check_labels(labels);
    check_svm_config(cfg);
    check_kernel_arg(k, labels.size());

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(k, Eigen::EigenvaluesOnly);
    if (es.info() != Eigen::Success) throw NumericError("kernel eigendecomposition failed");
    const double lo = es.eigenvalues().minCoeff();
    if (lo < -1e-8)
        throw DomainError("kernel matrix is indefinite (min eigenvalue " + std::to_string(lo) +
                          "); use ksvm_train or a spectral transform");
    return solve_box_dual(k, labels, cfg);
}

SvmModel ksvm_train(const Eigen::MatrixXd& k, const std::vector<int>& labels,
                    const SvmConfig& cfg) {
    check_labels(labels);
    check_svm_config(cfg);
    check_kernel_arg(k, labels.size());
    const int n = static_cast<int>(labels.size());

    Eigen::VectorXd y(n);
    for (int i = 0; i < n; ++i) y[i] = labels[i];
    const Eigen::MatrixXd g = y.asDiagonal() * k * y.asDiagonal();

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(g);
    if (es.info() != Eigen::Success) throw NumericError("kernel eigendecomposition failed");
    const Eigen::VectorXd& lam = es.eigenvalues();
    const Eigen::MatrixXd& u = es.eigenvectors();

    // sign matrix with a relative cutoff so numerically-zero eigenvalues keep
    // sign +1 (a flip there would reflect the solution for no reason)
    const double maxabs = lam.cwiseAbs().maxCoeff();
    Eigen::VectorXd s(n);
    for (int i = 0; i < n; ++i) s[i] = lam[i] < -1e-10 * maxabs ? -1.0 : 1.0;

    Eigen::MatrixXd g_flip = u * (s.cwiseProduct(lam)).asDiagonal() * u.transpose();
    g_flip = 0.5 * (g_flip + g_flip.transpose()).eval();
    const Eigen::MatrixXd k_flip = y.asDiagonal() * g_flip * y.asDiagonal();

    SvmModel model = solve_box_dual(k_flip, labels, cfg);

    // alpha stays the box-feasible dual solution of the stabilized problem;
    // the decision weights go back through U S U^t so prediction uses the
    // original indefinite kernel
    const Eigen::VectorXd alpha_tilde = model.alpha;
    const Eigen::VectorXd alpha = u * s.cwiseProduct(u.transpose() * alpha_tilde);
    model.beta = y.cwiseProduct(alpha);
    model.support.clear();
    for (int i = 0; i < n; ++i)
        if (std::abs(model.beta[i]) > 1e-12) model.support.push_back(i);
    return model;
}

int svm_predict(const SvmModel& model, const Eigen::VectorXd& k_row) {
    if (k_row.size() != model.beta.size())
        throw InputError("kernel row length does not match the model size");
    const double f = model.beta.dot(k_row) + model.bias;
    return f >= 0.0 ? 1 : -1;
}

int svm_predict(const SvmModel& model, const PersistenceDiagram& d, WassersteinCache* cache) {
    if (!model.train_diagrams)
        throw ConfigError("model carries no training diagrams; predict with a kernel row");
    const auto& train = *model.train_diagrams;
    Eigen::VectorXd row(train.size());
    for (std::size_t i = 0; i < train.size(); ++i)
        row[i] = kernel_value(train[i], d, model.spec, cache);
    return svm_predict(model, row);
}

SvmModel train_classifier(const std::vector<ClassificationSample>& samples,
                          const KernelSpec& spec, const SvmConfig& cfg, TrainMethod method,
                          WassersteinCache* cache) {
    if (samples.empty()) throw InputError("need at least one training sample");
    auto diagrams = std::make_shared<std::vector<PersistenceDiagram>>();
    std::vector<int> labels;
    for (const auto& s : samples) {
        diagrams->push_back(s.diagram);
        labels.push_back(s.label);
    }
    const KernelMatrix km = kernel_matrix(*diagrams, spec, 1, cache);
    SvmModel model = method == TrainMethod::Svm ? svm_train(km.matrix(), labels, cfg)
                                                : ksvm_train(km.matrix(), labels, cfg);
    model.spec = spec;
    model.train_diagrams = std::move(diagrams);
    return model;
}

double nw_predict(const std::vector<RegressionSample>& train, const PersistenceDiagram& d,
                  const KernelSpec& spec, WassersteinCache* cache) {
    if (train.empty()) throw InputError("kernel regression needs a nonempty training set");
    double num = 0.0, den = 0.0;
    for (const auto& s : train) {
        const double w = kernel_value(s.diagram, d, spec, cache);
        num += w * s.response;
        den += w;
    }
    if (den == 0.0)
        throw PredictionError("every kernel weight vanished for this diagram (the " +
                              kernel_kind_name(spec.kind) +
                              " kernel gives zero mass here), so the kernel average is undefined");
    return num / den;
}

double loo_bandwidth(const std::vector<RegressionSample>& train, const KernelSpec& spec_family,
                     const std::vector<double>& h_grid, WassersteinCache* cache) {
    if (train.size() < 2) throw ConfigError("leave-one-out selection needs >= 2 samples");
    if (h_grid.empty()) throw ConfigError("bandwidth grid is empty");
    const int n = static_cast<int>(train.size());

    std::vector<double> grid = h_grid;
    std::sort(grid.begin(), grid.end(), std::greater<>());

    WassersteinCache local;
    if (!cache) cache = &local;

    double best_err = std::numeric_limits<double>::infinity();
    double best_h = 0.0;
    bool any = false;
    for (double h : grid) {
        const KernelSpec spec = with_bandwidth(spec_family, h);
        Eigen::MatrixXd k(n, n);
        for (int i = 0; i < n; ++i)
            for (int j = i; j < n; ++j)
                k(i, j) = k(j, i) = kernel_value(train[i].diagram, train[j].diagram, spec, cache);

        double err = 0.0;
        bool valid = true;
        for (int i = 0; i < n && valid; ++i) {
            double num = 0.0, den = 0.0;
            for (int j = 0; j < n; ++j) {
                if (j == i) continue;
                num += k(i, j) * train[j].response;
                den += k(i, j);
            }
            if (den == 0.0) {
                valid = false;
                break;
            }
            const double r = train[i].response - num / den;
            err += r * r;
        }
        if (!valid) continue;
        any = true;
        if (err < best_err) { // strict: ties keep the larger bandwidth
            best_err = err;
            best_h = h;
        }
    }
    if (!any)
        throw SelectionError("every bandwidth in the grid produced an undefined leave-one-out "
                             "prediction");
    return best_h;
}

double PlmFit::intercept_for(long group) const {
    for (std::size_t i = 0; i < group_ids.size(); ++i)
        if (group_ids[i] == group) return intercepts[static_cast<Eigen::Index>(i)];
    throw InputError("unknown group id " + std::to_string(group));
}

double PlmFit::predict(const PersistenceDiagram& d, long group, WassersteinCache* cache) const {
    return intercept_for(group) + nw_predict(adjusted, d, spec, cache);
}

PlmFit robinson_plm_fit(const std::vector<RegressionSample>& train, const KernelSpec& spec,
                        double bandwidth, WassersteinCache* cache) {
    if (train.empty()) throw InputError("grouped fit needs training samples");
    const int n = static_cast<int>(train.size());
    std::vector<long> ids;
    for (const auto& s : train) {
        if (!s.group) throw InputError("grouped fit needs a group id on every sample");
        ids.push_back(*s.group);
    }
    std::vector<long> groups = ids;
    std::sort(groups.begin(), groups.end());
    groups.erase(std::unique(groups.begin(), groups.end()), groups.end());
    const int g_count = static_cast<int>(groups.size());

    WassersteinCache local;
    if (!cache) cache = &local;
    const KernelSpec spec_h = with_bandwidth(spec, bandwidth);

    PlmFit fit;
    fit.group_ids = groups;
    fit.spec = spec_h;

    if (g_count == 1) {
        fit.intercepts = Eigen::VectorXd::Zero(1);
        fit.adjusted = train;
        return fit;
    }

    Eigen::MatrixXd k(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = i; j < n; ++j)
            k(i, j) = k(j, i) = kernel_value(train[i].diagram, train[j].diagram, spec_h, cache);
    Eigen::VectorXd row_sum = k.rowwise().sum();
    for (int i = 0; i < n; ++i)
        if (row_sum[i] == 0.0)
            throw PredictionError("kernel smoother row " + std::to_string(i) +
                                  " has zero total weight");

    auto smooth = [&](const Eigen::VectorXd& v) -> Eigen::VectorXd {
        return (k * v).cwiseQuotient(row_sum);
    };

    Eigen::VectorXd y(n);
    for (int i = 0; i < n; ++i) y[i] = train[i].response;
    Eigen::MatrixXd z(n, g_count - 1);
    for (int i = 0; i < n; ++i)
        for (int j = 1; j < g_count; ++j) z(i, j - 1) = ids[i] == groups[j] ? 1.0 : 0.0;

    const Eigen::VectorXd y_res = y - smooth(y);
    Eigen::MatrixXd z_res(n, g_count - 1);
    for (int j = 0; j + 1 < g_count; ++j) z_res.col(j) = z.col(j) - smooth(z.col(j));

    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(z_res);
    if (qr.rank() < g_count - 1)
        throw FitError("residualized group design is singular; the smoother cannot separate "
                       "the groups");
    const Eigen::VectorXd gamma = qr.solve(y_res);

    fit.intercepts = Eigen::VectorXd::Zero(g_count);
    fit.intercepts.tail(g_count - 1) = gamma;

    fit.adjusted = train;
    for (int i = 0; i < n; ++i) fit.adjusted[i].response = y[i] - fit.intercept_for(ids[i]);
    return fit;
}

double rss(const std::vector<double>& fitted, const std::vector<double>& observed) {
    if (fitted.size() != observed.size())
        throw InputError("fitted and observed vectors differ in length");
    double total = 0.0;
    for (std::size_t i = 0; i < fitted.size(); ++i) {
        const double r = observed[i] - fitted[i];
        total += r * r;
    }
    return total;
}

std::vector<int> seeded_permutation(int n, std::uint32_t seed) {
    std::vector<int> idx(n);
    std::iota(idx.begin(), idx.end(), 0);
    std::mt19937 rng(seed);
    for (int i = n - 1; i > 0; --i) {
        const int j = static_cast<int>(rng() % static_cast<std::uint32_t>(i + 1));
        std::swap(idx[i], idx[j]);
    }
    return idx;
}

CvReport kfold_cv(const std::vector<int>& labels, const FoldClassifier& classifier, int k,
                  std::uint32_t seed) {
    check_labels(labels);
    const int n = static_cast<int>(labels.size());
    if (k < 2) throw ConfigError("cross validation needs k >= 2");
    if (n < k) throw ConfigError("cross validation needs at least k samples");

    const std::vector<int> perm = seeded_permutation(n, seed);
    CvReport report;
    report.k = k;
    report.seed = seed;

    for (int f = 0; f < k; ++f) {
        const int begin = static_cast<int>(static_cast<long>(f) * n / k);
        const int end = static_cast<int>(static_cast<long>(f + 1) * n / k);
        std::vector<int> test(perm.begin() + begin, perm.begin() + end);
        std::vector<int> train;
        train.reserve(n - (end - begin));
        train.insert(train.end(), perm.begin(), perm.begin() + begin);
        train.insert(train.end(), perm.begin() + end, perm.end());
        std::sort(test.begin(), test.end());
        std::sort(train.begin(), train.end());

        bool pos = false, neg = false;
        for (int i : train) (labels[i] > 0 ? pos : neg) = true;
        if (!pos || !neg)
            report.warnings.push_back("fold " + std::to_string(f) +
                                      ": training split contains a single class");

        const std::vector<int> predicted = classifier(train, test);
        if (predicted.size() != test.size())
            throw PredictionError("fold classifier returned the wrong number of labels");
        int wrong = 0;
        for (std::size_t i = 0; i < test.size(); ++i)
            if (predicted[i] != labels[test[i]]) ++wrong;
        report.fold_rates.push_back(test.empty() ? 0.0
                                                 : static_cast<double>(wrong) / test.size());
    }

    const double mean = std::accumulate(report.fold_rates.begin(), report.fold_rates.end(), 0.0) /
                        report.fold_rates.size();
    double var = 0.0;
    for (double r : report.fold_rates) var += (r - mean) * (r - mean);
    report.mean_rate = mean;
    report.sd_rate = report.fold_rates.size() > 1
                         ? std::sqrt(var / (report.fold_rates.size() - 1))
                         : 0.0;
    return report;
}

std::string cv_method_name(CvMethod m) {
    switch (m) {
        case CvMethod::Ksvm: return "ksvm";
        case CvMethod::Clip: return "clip";
        case CvMethod::Flip: return "flip";
        case CvMethod::Square: return "square";
        case CvMethod::Svm: return "svm";
    }
    throw ConfigError("unreachable cv method");
}

CvMethod cv_method_from_name(const std::string& name) {
    if (name == "ksvm") return CvMethod::Ksvm;
    if (name == "clip") return CvMethod::Clip;
    if (name == "flip") return CvMethod::Flip;
    if (name == "square") return CvMethod::Square;
    if (name == "svm") return CvMethod::Svm;
    throw ConfigError("unknown cv method '" + name + "'");
}

FoldClassifier make_kernel_svm_classifier(const Eigen::MatrixXd& k,
                                          const std::vector<int>& labels, const SvmConfig& cfg,
                                          CvMethod method) {
    check_labels(labels);
    check_kernel_arg(k, labels.size());

    auto full = std::make_shared<Eigen::MatrixXd>(k);
    if (method == CvMethod::Clip || method == CvMethod::Flip || method == CvMethod::Square) {
        // transform the whole collection's matrix once; principal submatrices
        // of a PSD matrix stay PSD, and held-out rows are well defined
        const SpectralMode mode = method == CvMethod::Clip   ? SpectralMode::Clip
                                  : method == CvMethod::Flip ? SpectralMode::Flip
                                                             : SpectralMode::Square;
        *full = spectral_transform(KernelMatrix(k, KernelSpec{}), mode).matrix();
    }
    const bool krein = method == CvMethod::Ksvm;
    auto all_labels = std::make_shared<std::vector<int>>(labels);

    return [full, all_labels, cfg, krein](const std::vector<int>& train,
                                          const std::vector<int>& test) {
        std::vector<int> y_train;
        y_train.reserve(train.size());
        for (int i : train) y_train.push_back((*all_labels)[i]);
        const Eigen::MatrixXd sub = submatrix(*full, train, train);
        const SvmModel model =
            krein ? ksvm_train(sub, y_train, cfg) : svm_train(sub, y_train, cfg);

        std::vector<int> predicted;
        predicted.reserve(test.size());
        Eigen::VectorXd row(train.size());
        for (int t : test) {
            for (std::size_t j = 0; j < train.size(); ++j) row[j] = (*full)(t, train[j]);
            predicted.push_back(svm_predict(model, row));
        }
        return predicted;
    };
}

} // namespace tda
