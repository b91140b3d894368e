#include "tda/pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <sstream>

#include "json.hpp"

#include "tda/diagram_metrics.hpp"
#include "tda/errors.hpp"
#include "tda/filtration.hpp"
#include "tda/io.hpp"
#include "tda/summaries.hpp"

namespace tda {

using nlohmann::json;

std::string essential_name(FiltrationSettings::Essential e) {
    switch (e) {
        case FiltrationSettings::Essential::Default: return "default";
        case FiltrationSettings::Essential::Cap: return "cap";
        case FiltrationSettings::Essential::Drop: return "drop";
    }
    throw ConfigError("unreachable essential policy");
}

FiltrationSettings::Essential essential_from_name(const std::string& name) {
    if (name == "default") return FiltrationSettings::Essential::Default;
    if (name == "cap") return FiltrationSettings::Essential::Cap;
    if (name == "drop") return FiltrationSettings::Essential::Drop;
    throw ConfigError("unknown essential policy '" + name +
                      "' (expected default, cap or drop)");
}

std::vector<PersistenceDiagram> diagrams_from_cloud(const PointCloud& cloud,
                                                    const FiltrationSettings& settings) {
    if (settings.hom_dim < 0) throw ConfigError("homology dimension must be >= 0");
    if (settings.max_dim < settings.hom_dim + 1)
        throw ConfigError("filtration max_dim must be at least hom_dim + 1");
    const DistanceMatrix dm = build_distance_matrix(cloud, settings.metric);
    const double cutoff = settings.max_scale.value_or(dm.diameter());
    const Filtration f = build_rips_filtration(dm, settings.max_dim, cutoff);
    const DiagramSet set = compute_persistence(f, settings.hom_dim);

    std::vector<PersistenceDiagram> out;
    out.reserve(set.diagrams.size());
    for (const auto& d : set.diagrams) {
        EssentialPolicy policy = EssentialPolicy::drop();
        switch (settings.essential) {
            case FiltrationSettings::Essential::Default:
                policy = d.dim == 0 ? EssentialPolicy::cap_at(cutoff) : EssentialPolicy::drop();
                break;
            case FiltrationSettings::Essential::Cap:
                policy = EssentialPolicy::cap_at(cutoff);
                break;
            case FiltrationSettings::Essential::Drop:
                policy = EssentialPolicy::drop();
                break;
        }
        out.push_back(cap_or_drop_essential(d, policy));
    }
    return out;
}

PersistenceDiagram load_diagram_any(const std::filesystem::path& path,
                                    const FiltrationSettings& settings) {
    if (is_diagram_file(path)) return select_dim(read_diagram_csv(path), settings.hom_dim);
    return select_dim(diagrams_from_cloud(read_cloud_csv(path), settings), settings.hom_dim);
}

namespace {

template <typename Fn>
auto run_stage(const std::string& name, Fn&& fn) {
    try {
        return fn();
    } catch (const PipelineError&) {
        throw;
    } catch (const std::exception& e) {
        throw PipelineError("stage " + name + " failed: " + e.what());
    }
}

double require_number(const json& j, const std::string& key, const std::string& where) {
    if (!j.contains(key) || !j[key].is_number())
        throw InputError("manifest: " + where + " needs a numeric '" + key + "'");
    return j[key].get<double>();
}

std::string require_string(const json& j, const std::string& key, const std::string& where) {
    if (!j.contains(key) || !j[key].is_string())
        throw InputError("manifest: " + where + " needs a string '" + key + "'");
    return j[key].get<std::string>();
}

KernelSpec parse_kernel(const json& j) {
    KernelSpec s;
    s.kind = kernel_kind_from_name(require_string(j, "kind", "kernel"));
    if (j.contains("h")) s.h = require_number(j, "h", "kernel");
    if (j.contains("ground")) s.ground = ground_from_name(require_string(j, "ground", "kernel"));
    if (j.contains("p")) {
        if (j["p"].is_string() && j["p"].get<std::string>() == "inf")
            s.p = kInfinityP;
        else
            s.p = require_number(j, "p", "kernel");
    }
    if (j.contains("sigma")) s.sigma = require_number(j, "sigma", "kernel");
    if (j.contains("tau")) s.tau = require_number(j, "tau", "kernel");
    if (j.contains("c")) s.c = require_number(j, "c", "kernel");
    if (j.contains("q")) s.q = require_number(j, "q", "kernel");
    if (j.contains("square_dg")) {
        if (!j["square_dg"].is_boolean())
            throw InputError("manifest: kernel 'square_dg' must be a boolean");
        s.pwg_square_dg = j["square_dg"].get<bool>();
    }
    if (j.contains("k_max")) s.k_max = static_cast<int>(require_number(j, "k_max", "kernel"));
    if (j.contains("t_grid")) {
        if (!j["t_grid"].is_array()) throw InputError("manifest: kernel 't_grid' must be an array");
        s.t_grid.clear();
        for (const auto& v : j["t_grid"]) {
            if (!v.is_number()) throw InputError("manifest: kernel 't_grid' must hold numbers");
            s.t_grid.push_back(v.get<double>());
        }
    }
    validate_kernel_spec(s);
    return s;
}

FiltrationSettings parse_filtration(const json& j) {
    FiltrationSettings f;
    if (j.contains("metric")) f.metric = metric_from_name(require_string(j, "metric", "filtration"));
    if (j.contains("max_dim")) f.max_dim = static_cast<int>(require_number(j, "max_dim", "filtration"));
    if (j.contains("max_scale") && !j["max_scale"].is_null())
        f.max_scale = require_number(j, "max_scale", "filtration");
    if (j.contains("hom_dim")) f.hom_dim = static_cast<int>(require_number(j, "hom_dim", "filtration"));
    if (j.contains("essential"))
        f.essential = essential_from_name(require_string(j, "essential", "filtration"));
    if (f.hom_dim < 0 || f.max_dim < f.hom_dim + 1)
        throw InputError("manifest: filtration needs hom_dim >= 0 and max_dim >= hom_dim + 1");
    return f;
}

json kernel_to_json(const KernelSpec& s) {
    json j{{"kind", kernel_kind_name(s.kind)}};
    switch (s.kind) {
        case KernelKind::GeodesicGaussian:
        case KernelKind::GeodesicLaplacian:
            j["h"] = s.h;
            j["ground"] = ground_name(s.ground);
            if (s.p == kInfinityP)
                j["p"] = "inf";
            else
                j["p"] = s.p;
            break;
        case KernelKind::Pss:
            j["sigma"] = s.sigma;
            break;
        case KernelKind::Pwg:
            j["sigma"] = s.sigma;
            j["tau"] = s.tau;
            j["c"] = s.c;
            j["q"] = s.q;
            j["square_dg"] = s.pwg_square_dg;
            break;
        case KernelKind::LandscapeL2:
            j["k_max"] = s.k_max;
            j["t_grid"] = s.t_grid;
            break;
    }
    return j;
}

json filtration_to_json(const FiltrationSettings& f) {
    json j{{"metric", metric_name(f.metric)},
           {"max_dim", f.max_dim},
           {"hom_dim", f.hom_dim},
           {"essential", essential_name(f.essential)}};
    if (f.max_scale)
        j["max_scale"] = *f.max_scale;
    else
        j["max_scale"] = nullptr;
    return j;
}

json config_to_json(const ExperimentConfig& cfg, const CommandOptions& opts) {
    json diagrams = json::array();
    for (const auto& p : cfg.diagram_paths) diagrams.push_back(p.string());
    json j{{"task", cfg.task},
           {"diagrams", std::move(diagrams)},
           {"kernel", kernel_to_json(cfg.kernel)},
           {"solver", {{"eta", cfg.solver.eta}, {"mu", cfg.solver.mu}, {"tol", cfg.solver.tol}}},
           {"filtration", filtration_to_json(cfg.filtration)},
           {"seed", opts.seed},
           {"threads", opts.threads}};
    if (cfg.cv_k > 0)
        j["cv"] = {{"k", cfg.cv_k}, {"seed", cfg.cv_seed}, {"method", cv_method_name(cfg.cv_method)}};
    if (!cfg.h_grid.empty()) j["h_grid"] = cfg.h_grid;
    return j;
}

void write_report(const std::filesystem::path& path, const json& j) {
    write_text_file(path, j.dump(2) + "\n");
}

std::filesystem::path resolve(const ExperimentConfig& cfg, const std::filesystem::path& p) {
    if (p.is_absolute()) return p;
    return cfg.base_dir / p;
}

std::vector<PersistenceDiagram> load_all_diagrams(const ExperimentConfig& cfg) {
    std::vector<PersistenceDiagram> out;
    out.reserve(cfg.diagram_paths.size());
    for (const auto& p : cfg.diagram_paths) out.push_back(load_diagram_any(resolve(cfg, p), cfg.filtration));
    return out;
}

void require_regression(const ExperimentConfig& cfg) {
    if (cfg.task != "regression")
        throw InputError("manifest: this command needs task = \"regression\"");
    if (cfg.responses.size() != cfg.diagram_paths.size())
        throw InputError("manifest: responses and diagrams differ in length");
    if (!cfg.groups.empty() && cfg.groups.size() != cfg.diagram_paths.size())
        throw InputError("manifest: groups and diagrams differ in length");
}

void require_classification(const ExperimentConfig& cfg) {
    if (cfg.task != "classification")
        throw InputError("manifest: this command needs task = \"classification\"");
    if (cfg.labels.size() != cfg.diagram_paths.size())
        throw InputError("manifest: labels and diagrams differ in length");
    for (int y : cfg.labels)
        if (y != -1 && y != 1) throw InputError("manifest: labels must be -1 or +1");
}

struct RegressionOutcome {
    double bandwidth = 0.0;
    bool bandwidth_selected = false;
    std::vector<double> fitted;
    double rss_value = 0.0;
    double tss_value = 0.0;
    json extra;
};

RegressionOutcome run_regression(const ExperimentConfig& cfg,
                                 const std::vector<PersistenceDiagram>& diagrams) {
    const std::size_t n = diagrams.size();
    std::vector<RegressionSample> samples(n);
    for (std::size_t i = 0; i < n; ++i) {
        samples[i].diagram = diagrams[i];
        samples[i].response = cfg.responses[i];
        if (!cfg.groups.empty()) samples[i].group = cfg.groups[i];
    }

    WassersteinCache cache;
    RegressionOutcome out;
    out.bandwidth = cfg.kernel.kind == KernelKind::GeodesicGaussian ||
                            cfg.kernel.kind == KernelKind::GeodesicLaplacian
                        ? cfg.kernel.h
                        : cfg.kernel.sigma;
    if (!cfg.h_grid.empty()) {
        out.bandwidth = loo_bandwidth(samples, cfg.kernel, cfg.h_grid, &cache);
        out.bandwidth_selected = true;
    }
    const KernelSpec spec = with_bandwidth(cfg.kernel, out.bandwidth);

    std::vector<double> observed(n);
    for (std::size_t i = 0; i < n; ++i) observed[i] = cfg.responses[i];
    const double mean_y = std::accumulate(observed.begin(), observed.end(), 0.0) / n;
    double tss = 0.0;
    for (double y : observed) tss += (y - mean_y) * (y - mean_y);
    out.tss_value = tss;

    if (cfg.groups.empty()) {
        out.fitted.resize(n);
        for (std::size_t i = 0; i < n; ++i)
            out.fitted[i] = nw_predict(samples, diagrams[i], spec, &cache);
    } else {
        const PlmFit fit = robinson_plm_fit(samples, spec, out.bandwidth, &cache);
        out.fitted.resize(n);
        for (std::size_t i = 0; i < n; ++i)
            out.fitted[i] = fit.predict(diagrams[i], cfg.groups[i], &cache);

        json intercepts = json::object();
        for (std::size_t g = 0; g < fit.group_ids.size(); ++g)
            intercepts[std::to_string(fit.group_ids[g])] =
                fit.intercepts[static_cast<Eigen::Index>(g)];
        out.extra["group_intercepts"] = std::move(intercepts);

        // group-means baseline for comparison
        std::map<long, std::pair<double, int>> acc;
        for (std::size_t i = 0; i < n; ++i) {
            acc[cfg.groups[i]].first += observed[i];
            acc[cfg.groups[i]].second += 1;
        }
        std::vector<double> baseline(n);
        for (std::size_t i = 0; i < n; ++i) {
            const auto& [sum, count] = acc[cfg.groups[i]];
            baseline[i] = sum / count;
        }
        out.extra["group_means_rss"] = rss(baseline, observed);
    }
    out.rss_value = rss(out.fitted, observed);
    return out;
}

void write_prediction_table(const std::filesystem::path& path,
                            const std::vector<double>& observed,
                            const std::vector<double>& fitted) {
    std::ostringstream os;
    os << "index,observed,fitted\n";
    for (std::size_t i = 0; i < observed.size(); ++i)
        os << i << ',' << format_double(observed[i]) << ',' << format_double(fitted[i]) << '\n';
    write_text_file(path, os.str());
}

json cv_report_to_json(const CvReport& r, CvMethod method) {
    return json{{"method", cv_method_name(method)},
                {"k", r.k},
                {"seed", r.seed},
                {"fold_rates", r.fold_rates},
                {"mean_rate", r.mean_rate},
                {"sd_rate", r.sd_rate},
                {"warnings", r.warnings}};
}

} // namespace

ExperimentConfig parse_manifest(const std::filesystem::path& manifest_path) {
    json j;
    try {
        j = json::parse(read_text_file(manifest_path));
    } catch (const json::parse_error& e) {
        throw InputError(manifest_path.string() + ": manifest is not valid JSON: " + e.what());
    }
    if (!j.is_object()) throw InputError(manifest_path.string() + ": manifest must be an object");

    ExperimentConfig cfg;
    cfg.base_dir = manifest_path.has_parent_path() ? manifest_path.parent_path()
                                                   : std::filesystem::path(".");
    if (j.contains("task")) cfg.task = require_string(j, "task", "top level");

    if (!j.contains("diagrams") || !j["diagrams"].is_array() || j["diagrams"].empty())
        throw InputError("manifest: needs a nonempty 'diagrams' array");
    for (const auto& p : j["diagrams"]) {
        if (!p.is_string()) throw InputError("manifest: 'diagrams' must hold path strings");
        cfg.diagram_paths.emplace_back(p.get<std::string>());
    }

    if (j.contains("responses")) {
        if (!j["responses"].is_array()) throw InputError("manifest: 'responses' must be an array");
        for (const auto& v : j["responses"]) {
            if (!v.is_number()) throw InputError("manifest: 'responses' must hold numbers");
            cfg.responses.push_back(v.get<double>());
            if (!std::isfinite(cfg.responses.back()))
                throw InputError("manifest: responses must be finite");
        }
    }
    if (j.contains("labels")) {
        if (!j["labels"].is_array()) throw InputError("manifest: 'labels' must be an array");
        for (const auto& v : j["labels"]) {
            if (!v.is_number_integer()) throw InputError("manifest: 'labels' must hold integers");
            cfg.labels.push_back(v.get<int>());
        }
    }
    if (j.contains("groups")) {
        if (!j["groups"].is_array()) throw InputError("manifest: 'groups' must be an array");
        for (const auto& v : j["groups"]) {
            if (!v.is_number_integer()) throw InputError("manifest: 'groups' must hold integers");
            cfg.groups.push_back(v.get<long>());
        }
    }

    if (!j.contains("kernel")) throw InputError("manifest: needs a 'kernel' object");
    cfg.kernel = parse_kernel(j["kernel"]);

    if (j.contains("solver")) {
        const auto& s = j["solver"];
        if (s.contains("eta")) cfg.solver.eta = require_number(s, "eta", "solver");
        if (s.contains("mu")) cfg.solver.mu = require_number(s, "mu", "solver");
        if (s.contains("tol")) cfg.solver.tol = require_number(s, "tol", "solver");
        if (!(cfg.solver.eta > 0) || !(cfg.solver.tol > 0))
            throw InputError("manifest: solver needs eta > 0 and tol > 0");
    }
    if (j.contains("cv")) {
        const auto& c = j["cv"];
        cfg.cv_k = static_cast<int>(require_number(c, "k", "cv"));
        if (cfg.cv_k < 2) throw InputError("manifest: cv.k must be >= 2");
        if (c.contains("seed"))
            cfg.cv_seed = static_cast<std::uint32_t>(require_number(c, "seed", "cv"));
        if (c.contains("method"))
            cfg.cv_method = cv_method_from_name(require_string(c, "method", "cv"));
    }
    if (j.contains("h_grid")) {
        if (!j["h_grid"].is_array()) throw InputError("manifest: 'h_grid' must be an array");
        for (const auto& v : j["h_grid"]) {
            if (!v.is_number() || !(v.get<double>() > 0))
                throw InputError("manifest: 'h_grid' must hold positive numbers");
            cfg.h_grid.push_back(v.get<double>());
        }
    }
    if (j.contains("filtration")) cfg.filtration = parse_filtration(j["filtration"]);
    return cfg;
}

int cmd_diagram(const std::filesystem::path& cloud_path, const FiltrationSettings& settings,
                const std::filesystem::path& out_path) {
    const PointCloud cloud = read_cloud_csv(cloud_path);
    const auto diagrams = diagrams_from_cloud(cloud, settings);
    write_diagram_csv(out_path, {select_dim(diagrams, settings.hom_dim)});
    return 0;
}

int cmd_distance(const std::filesystem::path& left, const std::filesystem::path& right,
                 const DistanceOptions& dopts, const FiltrationSettings& settings,
                 std::string& out_text) {
    FiltrationSettings s = settings;
    s.hom_dim = dopts.dim;
    const PersistenceDiagram a = load_diagram_any(left, s);
    const PersistenceDiagram b = load_diagram_any(right, s);
    const DistanceResult res = wasserstein(a, b, {dopts.ground, dopts.p});

    std::ostringstream os;
    os << format_double(res.value) << '\n';
    if (dopts.print_matching) {
        auto pairs = res.matching.pairs;
        std::sort(pairs.begin(), pairs.end(), [](const MatchPair& x, const MatchPair& y) {
            if (x.left != y.left) return x.left < y.left;
            return x.right < y.right;
        });
        for (const auto& pr : pairs)
            os << pr.left << ',' << pr.right << ',' << format_double(pr.ground_cost) << '\n';
    }
    out_text = os.str();
    return 0;
}

int cmd_kernel_matrix(const std::filesystem::path& manifest_path,
                      const std::optional<SpectralMode>& transform,
                      const CommandOptions& opts) {
    const ExperimentConfig cfg = parse_manifest(manifest_path);
    const auto diagrams = load_all_diagrams(cfg);
    KernelMatrix km = kernel_matrix(diagrams, cfg.kernel, opts.threads);
    std::string params = cfg.kernel.params_string();
    if (transform) {
        km = spectral_transform(km, *transform);
        params += " transform=" + spectral_mode_name(*transform);
    }
    write_kernel_matrix_csv(opts.output_dir / "kernel_matrix.csv", km.matrix(),
                            kernel_kind_name(cfg.kernel.kind), params);
    return 0;
}

int cmd_fit_nw(const std::filesystem::path& manifest_path, const CommandOptions& opts) {
    const ExperimentConfig cfg = parse_manifest(manifest_path);
    require_regression(cfg);
    const auto diagrams = load_all_diagrams(cfg);
    const RegressionOutcome out = run_regression(cfg, diagrams);

    json report{{"config", config_to_json(cfg, opts)},
                {"task", "regression"},
                {"n_samples", diagrams.size()},
                {"bandwidth", out.bandwidth},
                {"bandwidth_selected_by_loo", out.bandwidth_selected},
                {"rss", out.rss_value},
                {"tss", out.tss_value}};
    for (auto& [k, v] : out.extra.items()) report[k] = v;
    write_report(opts.output_dir / "nw_report.json", report);
    write_prediction_table(opts.output_dir / "nw_predictions.csv", cfg.responses, out.fitted);
    return 0;
}

int cmd_train_ksvm(const std::filesystem::path& manifest_path, const CommandOptions& opts) {
    const ExperimentConfig cfg = parse_manifest(manifest_path);
    require_classification(cfg);
    const auto diagrams = load_all_diagrams(cfg);

    const KernelMatrix km = kernel_matrix(diagrams, cfg.kernel, opts.threads);
    const SvmModel model = ksvm_train(km.matrix(), cfg.labels, cfg.solver);

    const int n = static_cast<int>(diagrams.size());
    std::vector<int> predicted(n);
    int wrong = 0;
    std::ostringstream table;
    table << "index,label,predicted\n";
    for (int i = 0; i < n; ++i) {
        predicted[i] = svm_predict(model, km.matrix().col(i));
        if (predicted[i] != cfg.labels[i]) ++wrong;
        table << i << ',' << cfg.labels[i] << ',' << predicted[i] << '\n';
    }

    json alpha = json::array(), beta = json::array();
    for (Eigen::Index i = 0; i < model.alpha.size(); ++i) {
        alpha.push_back(model.alpha[i]);
        beta.push_back(model.beta[i]);
    }
    json report{{"config", config_to_json(cfg, opts)},
                {"task", "classification"},
                {"n_samples", n},
                {"bias", model.bias},
                {"dual_objective", model.dual_objective},
                {"iterations", model.iterations},
                {"n_support", model.support.size()},
                {"training_error_rate", static_cast<double>(wrong) / n},
                {"alpha", std::move(alpha)},
                {"beta", std::move(beta)}};
    write_report(opts.output_dir / "ksvm_report.json", report);
    write_text_file(opts.output_dir / "ksvm_predictions.csv", table.str());
    return 0;
}

int cmd_cv(const std::filesystem::path& manifest_path,
           const std::optional<CvMethod>& method_override, const CommandOptions& opts) {
    ExperimentConfig cfg = parse_manifest(manifest_path);
    require_classification(cfg);
    if (cfg.cv_k < 2) throw InputError("manifest: cross validation needs a cv object with k >= 2");
    if (method_override) cfg.cv_method = *method_override;

    const auto diagrams = load_all_diagrams(cfg);
    const KernelMatrix km = kernel_matrix(diagrams, cfg.kernel, opts.threads);
    const FoldClassifier classifier =
        make_kernel_svm_classifier(km.matrix(), cfg.labels, cfg.solver, cfg.cv_method);
    const CvReport report = kfold_cv(cfg.labels, classifier, cfg.cv_k, cfg.cv_seed);

    json out{{"config", config_to_json(cfg, opts)},
             {"task", "classification"},
             {"n_samples", diagrams.size()},
             {"cv", cv_report_to_json(report, cfg.cv_method)}};
    write_report(opts.output_dir / "cv_report.json", out);
    return 0;
}

int cmd_generate(const GenerateOptions& gopts, const CommandOptions& opts) {
    if (gopts.count < 1) throw ConfigError("generate needs count >= 1");
    if (gopts.task != "classification" && gopts.task != "regression")
        throw ConfigError("generate task must be classification or regression");
    std::filesystem::create_directories(opts.output_dir);

    std::mt19937 rng(gopts.seed);
    json manifest;
    json diagram_paths = json::array();

    auto cloud_name = [](int i) {
        char buf[32];
        std::snprintf(buf, sizeof buf, "cloud_%03d.csv", i);
        return std::string(buf);
    };

    if (gopts.task == "classification") {
        SyntheticSpec circle;
        circle.shape = CloudShape::Circle;
        circle.n_points = gopts.n_points;
        circle.noise_sd = gopts.noise_sd;
        circle.radius_min = circle.radius_max = 1.0;
        SyntheticSpec blobs = circle;
        blobs.shape = CloudShape::Blobs;

        json labels = json::array();
        for (int i = 0; i < 2 * gopts.count; ++i) {
            const bool is_circle = i < gopts.count;
            const PointCloud cloud = sample_cloud(is_circle ? circle : blobs, rng);
            const std::string name = cloud_name(i);
            write_cloud_csv(opts.output_dir / name, cloud);
            diagram_paths.push_back(name);
            labels.push_back(is_circle ? 1 : -1);
        }
        manifest["task"] = "classification";
        manifest["labels"] = std::move(labels);
        manifest["cv"] = {{"k", 10}, {"seed", gopts.seed}, {"method", "ksvm"}};
    } else {
        SyntheticSpec circle;
        circle.shape = CloudShape::Circle;
        circle.n_points = gopts.n_points;
        circle.noise_sd = gopts.noise_sd;
        circle.radius_min = gopts.radius_min;
        circle.radius_max = gopts.radius_max;

        const FiltrationSettings settings; // defaults: euclidean, H1, diameter cutoff
        std::normal_distribution<double> noise(0.0, gopts.response_noise_sd);
        json responses = json::array(), groups = json::array();
        for (int i = 0; i < gopts.count; ++i) {
            const PointCloud cloud = sample_cloud(circle, rng);
            const std::string name = cloud_name(i);
            write_cloud_csv(opts.output_dir / name, cloud);
            diagram_paths.push_back(name);

            const auto d1 = select_dim(diagrams_from_cloud(cloud, settings), 1);
            double y = total_persistence(d1, 1.0) + noise(rng);
            if (gopts.group_count > 1) {
                const long g = i % gopts.group_count;
                y += 1.5 * static_cast<double>(g);
                groups.push_back(g);
            }
            responses.push_back(y);
        }
        manifest["task"] = "regression";
        manifest["responses"] = std::move(responses);
        if (gopts.group_count > 1) manifest["groups"] = std::move(groups);
        manifest["h_grid"] = {0.005, 0.01, 0.025, 0.05, 0.1, 0.25, 0.5, 1.0, 2.0, 4.0};
    }

    manifest["diagrams"] = std::move(diagram_paths);
    manifest["kernel"] = {{"kind", "geodesic_gaussian"}, {"h", 0.5}, {"ground", "l2"}, {"p", 2.0}};
    manifest["solver"] = {{"eta", 1.0}, {"mu", 0.0}, {"tol", 1e-6}};
    manifest["filtration"] = {{"metric", "euclidean"}, {"max_dim", 2},  {"max_scale", nullptr},
                              {"hom_dim", 1},          {"essential", "default"}};
    write_report(opts.output_dir / "manifest.json", manifest);
    return 0;
}

int cmd_experiment(const std::filesystem::path& manifest_path, const CommandOptions& opts) {
    const ExperimentConfig cfg = parse_manifest(manifest_path);

    run_stage("validate", [&] {
        if (cfg.task != "regression" && cfg.task != "classification")
            throw InputError("manifest: task must be regression or classification");
        if (cfg.task == "regression")
            require_regression(cfg);
        else
            require_classification(cfg);
        for (const auto& p : cfg.diagram_paths) {
            const auto full = resolve(cfg, p);
            if (!std::filesystem::exists(full))
                throw InputError("missing diagram file " + full.string());
        }
        return 0;
    });

    const auto diagrams =
        run_stage("diagrams", [&] { return load_all_diagrams(cfg); });

    json report{{"config", config_to_json(cfg, opts)}, {"task", cfg.task},
                {"n_samples", diagrams.size()}};

    if (cfg.task == "regression") {
        const RegressionOutcome out =
            run_stage("regression", [&] { return run_regression(cfg, diagrams); });
        report["bandwidth"] = out.bandwidth;
        report["bandwidth_selected_by_loo"] = out.bandwidth_selected;
        report["rss"] = out.rss_value;
        report["tss"] = out.tss_value;
        for (auto& [k, v] : out.extra.items()) report[k] = v;
        run_stage("report", [&] {
            write_prediction_table(opts.output_dir / "experiment_predictions.csv", cfg.responses,
                                   out.fitted);
            return 0;
        });
    } else {
        const KernelMatrix km = run_stage(
            "kernel", [&] { return kernel_matrix(diagrams, cfg.kernel, opts.threads); });
        if (cfg.cv_k >= 2) {
            const CvReport cv = run_stage("cross-validation", [&] {
                const FoldClassifier classifier =
                    make_kernel_svm_classifier(km.matrix(), cfg.labels, cfg.solver, cfg.cv_method);
                return kfold_cv(cfg.labels, classifier, cfg.cv_k, cfg.cv_seed);
            });
            report["cv"] = cv_report_to_json(cv, cfg.cv_method);
        }
        const SvmModel model = run_stage(
            "train", [&] { return ksvm_train(km.matrix(), cfg.labels, cfg.solver); });
        int wrong = 0;
        for (std::size_t i = 0; i < diagrams.size(); ++i)
            if (svm_predict(model, km.matrix().col(static_cast<Eigen::Index>(i))) !=
                cfg.labels[i])
                ++wrong;
        report["training_error_rate"] = static_cast<double>(wrong) / diagrams.size();
        report["n_support"] = model.support.size();
        report["dual_objective"] = model.dual_objective;
    }

    run_stage("report", [&] {
        write_report(opts.output_dir / "experiment_report.json", report);
        return 0;
    });
    return 0;
}

} // namespace tda
