#include <cstdio>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"

#include "tda/errors.hpp"
#include "tda/pipeline.hpp"

namespace {

struct FiltrationFlags {
    std::string metric = "euclidean";
    int max_dim = 2;
    double max_scale = -1.0; // negative: use the data diameter
    int hom_dim = 1;
    std::string essential = "default";

    tda::FiltrationSettings settings() const {
        tda::FiltrationSettings s;
        s.metric = tda::metric_from_name(metric);
        s.max_dim = max_dim;
        if (max_scale >= 0) s.max_scale = max_scale;
        s.hom_dim = hom_dim;
        s.essential = tda::essential_from_name(essential);
        return s;
    }
};

void add_filtration_flags(CLI::App* cmd, FiltrationFlags& f) {
    cmd->add_option("--metric", f.metric, "point metric: euclidean, manhattan or chebyshev");
    cmd->add_option("--max-dim", f.max_dim, "largest simplex dimension (default 2)");
    cmd->add_option("--max-scale", f.max_scale, "filtration cutoff (default: data diameter)");
    cmd->add_option("--hom-dim", f.hom_dim, "homology dimension to report (default 1)");
    cmd->add_option("--essential", f.essential,
                    "essential-class policy: default, cap or drop");
}

double parse_order(const std::string& p) {
    if (p == "inf") return tda::kInfinityP;
    try {
        std::size_t used = 0;
        const double v = std::stod(p, &used);
        if (used == p.size()) return v;
    } catch (const std::exception&) {
    }
    throw tda::InputError("--p expects a number >= 1 or 'inf', got '" + p + "'");
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"topological data analysis toolkit: persistence diagrams, transport "
                 "distances, diagram kernels, and kernel learning"};
    app.require_subcommand(1);

    tda::CommandOptions opts;
    std::string output_dir = ".";
    app.add_option("--seed", opts.seed, "seed for seeded commands (default 0)");
    app.add_option("--threads", opts.threads, "worker threads for matrix builds (default 1)")
        ->check(CLI::PositiveNumber);
    app.add_option("--output-dir", output_dir, "directory for generated files (default .)");

    // diagram
    auto* diagram = app.add_subcommand("diagram", "persistence diagram of a point-cloud CSV");
    std::string diagram_in, diagram_out = "diagram.csv";
    FiltrationFlags diagram_flags;
    diagram->add_option("cloud", diagram_in, "point-cloud CSV")->required();
    diagram->add_option("--out", diagram_out, "output diagram file (default diagram.csv)");
    add_filtration_flags(diagram, diagram_flags);

    // distance
    auto* distance = app.add_subcommand("distance",
                                        "transport distance between two diagram/cloud files");
    std::string dist_a, dist_b, dist_ground = "linf", dist_p = "inf";
    bool dist_matching = false;
    FiltrationFlags dist_flags;
    distance->add_option("left", dist_a, "first diagram or cloud file")->required();
    distance->add_option("right", dist_b, "second diagram or cloud file")->required();
    distance->add_option("--ground", dist_ground, "ground metric: l2 or linf (default linf)");
    distance->add_option("--p", dist_p, "transport order >= 1 or 'inf' (default inf)");
    distance->add_option("--dim", dist_flags.hom_dim, "homology dimension (default 1)");
    distance->add_flag("--matching", dist_matching, "also print the optimal matching");
    add_filtration_flags(distance, dist_flags);

    // kernel-matrix
    auto* kmat = app.add_subcommand("kernel-matrix", "pairwise kernel matrix from a manifest");
    std::string kmat_manifest, kmat_transform;
    kmat->add_option("manifest", kmat_manifest, "manifest JSON")->required();
    kmat->add_option("--transform", kmat_transform,
                     "spectral surgery before writing: clip, flip or square");

    // fit-nw
    auto* fitnw = app.add_subcommand("fit-nw", "kernel regression fit from a manifest");
    std::string fitnw_manifest;
    fitnw->add_option("manifest", fitnw_manifest, "manifest JSON")->required();

    // train-ksvm
    auto* ksvm = app.add_subcommand("train-ksvm", "Krein-space SVM training from a manifest");
    std::string ksvm_manifest;
    ksvm->add_option("manifest", ksvm_manifest, "manifest JSON")->required();

    // cv
    auto* cv = app.add_subcommand("cv", "k-fold cross-validation from a manifest");
    std::string cv_manifest, cv_method;
    cv->add_option("manifest", cv_manifest, "manifest JSON")->required();
    cv->add_option("--method", cv_method, "ksvm, clip, flip, square or svm");

    // generate
    auto* gen = app.add_subcommand("generate", "synthetic clouds plus a ready-to-run manifest");
    tda::GenerateOptions gopts;
    gen->add_option("--task", gopts.task, "classification or regression");
    gen->add_option("--count", gopts.count, "clouds per class (classification) or total");
    gen->add_option("--n", gopts.n_points, "points per cloud");
    gen->add_option("--noise-sd", gopts.noise_sd, "coordinate noise sd");
    gen->add_option("--radius-min", gopts.radius_min, "regression: smallest circle radius");
    gen->add_option("--radius-max", gopts.radius_max, "regression: largest circle radius");
    gen->add_option("--response-noise-sd", gopts.response_noise_sd,
                    "regression: response noise sd");
    gen->add_option("--groups", gopts.group_count, "regression: number of intercept groups");

    // experiment
    auto* exp = app.add_subcommand("experiment", "full manifest-driven pipeline run");
    std::string exp_manifest;
    exp->add_option("manifest", exp_manifest, "manifest JSON")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        opts.output_dir = output_dir;
        gopts.seed = opts.seed;

        if (*diagram) return tda::cmd_diagram(diagram_in, diagram_flags.settings(), diagram_out);
        if (*distance) {
            tda::DistanceOptions dopts;
            dopts.ground = tda::ground_from_name(dist_ground);
            dopts.p = parse_order(dist_p);
            dopts.dim = dist_flags.hom_dim;
            dopts.print_matching = dist_matching;
            std::string text;
            const int rc = tda::cmd_distance(dist_a, dist_b, dopts, dist_flags.settings(), text);
            std::fputs(text.c_str(), stdout);
            return rc;
        }
        if (*kmat) {
            std::optional<tda::SpectralMode> mode;
            if (!kmat_transform.empty()) mode = tda::spectral_mode_from_name(kmat_transform);
            return tda::cmd_kernel_matrix(kmat_manifest, mode, opts);
        }
        if (*fitnw) return tda::cmd_fit_nw(fitnw_manifest, opts);
        if (*ksvm) return tda::cmd_train_ksvm(ksvm_manifest, opts);
        if (*cv) {
            std::optional<tda::CvMethod> method;
            if (!cv_method.empty()) method = tda::cv_method_from_name(cv_method);
            return tda::cmd_cv(cv_manifest, method, opts);
        }
        if (*gen) return tda::cmd_generate(gopts, opts);
        if (*exp) return tda::cmd_experiment(exp_manifest, opts);
        std::fprintf(stderr, "no command selected\n");
        return 2;
    } catch (const tda::InputError& e) {
        std::fprintf(stderr, "input error: %s\n", e.what());
        return 2;
    } catch (const tda::ConfigError& e) {
        std::fprintf(stderr, "input error: %s\n", e.what());
        return 2;
    } catch (const tda::Error& e) {
        std::fprintf(stderr, "pipeline error: %s\n", e.what());
        return 3;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "pipeline error: %s\n", e.what());
        return 3;
    }
}
