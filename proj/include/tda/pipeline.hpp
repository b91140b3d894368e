#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "tda/distance_matrix.hpp"
#include "tda/kernels.hpp"
#include "tda/learning.hpp"
#include "tda/persistence.hpp"
#include "tda/point_cloud.hpp"
#include "tda/synthetic.hpp"

namespace tda {

struct FiltrationSettings {
    Metric metric = Metric::Euclidean;
    int max_dim = 2;
    std::optional<double> max_scale; // default: data diameter
    int hom_dim = 1;
    // essential classes per dimension: the default caps H0 at max_scale and
    // drops dimensions >= 1
    enum class Essential { Default, Cap, Drop } essential = Essential::Default;
};

std::string essential_name(FiltrationSettings::Essential e);
FiltrationSettings::Essential essential_from_name(const std::string& name);

/// Full pipeline for one cloud: distances, Rips filtration, persistence,
/// essential policy; returns the diagrams of dimensions 0..hom_dim.
std::vector<PersistenceDiagram> diagrams_from_cloud(const PointCloud& cloud,
                                                    const FiltrationSettings& settings);

/// Diagram of settings.hom_dim from a diagram file or a point-cloud file
/// (detected by header).
PersistenceDiagram load_diagram_any(const std::filesystem::path& path,
                                    const FiltrationSettings& settings);

struct ExperimentConfig {
    std::string task; // "regression" or "classification"
    std::vector<std::filesystem::path> diagram_paths;
    std::vector<double> responses;         // regression
    std::vector<int> labels;               // classification
    std::vector<long> groups;              // optional, regression
    KernelSpec kernel;
    SvmConfig solver;
    int cv_k = 0; // 0: no cross validation requested
    std::uint32_t cv_seed = 0;
    CvMethod cv_method = CvMethod::Ksvm;
    std::vector<double> h_grid; // optional bandwidth grid for regression
    FiltrationSettings filtration;

    std::filesystem::path base_dir; // manifest location; relative paths resolve here
};

/// Parses the manifest JSON. Syntax and schema problems throw InputError;
/// referenced files are not checked here (that is a pipeline stage).
ExperimentConfig parse_manifest(const std::filesystem::path& manifest_path);

struct CommandOptions {
    std::uint32_t seed = 0;
    int threads = 1;
    std::filesystem::path output_dir = ".";
};

int cmd_diagram(const std::filesystem::path& cloud_path, const FiltrationSettings& settings,
                const std::filesystem::path& out_path);

struct DistanceOptions {
    Ground ground = Ground::Linf;
    double p = kInfinityP; // defaults give the bottleneck distance
    int dim = 1;
    bool print_matching = false;
};

int cmd_distance(const std::filesystem::path& left, const std::filesystem::path& right,
                 const DistanceOptions& dopts, const FiltrationSettings& settings,
                 std::string& out_text);

int cmd_kernel_matrix(const std::filesystem::path& manifest_path,
                      const std::optional<SpectralMode>& transform,
                      const CommandOptions& opts);

int cmd_fit_nw(const std::filesystem::path& manifest_path, const CommandOptions& opts);
int cmd_train_ksvm(const std::filesystem::path& manifest_path, const CommandOptions& opts);
int cmd_cv(const std::filesystem::path& manifest_path,
           const std::optional<CvMethod>& method_override, const CommandOptions& opts);

struct GenerateOptions {
    std::string task = "classification"; // or "regression"
    int count = 80;                      // clouds per class / total for regression
    int n_points = 40;
    double noise_sd = 0.05;
    double radius_min = 0.8; // regression: radii drawn from this range
    double radius_max = 1.6;
    double response_noise_sd = 0.1;
    int group_count = 1;  // regression: >= 2 adds group intercepts
    std::uint32_t seed = 0;
};

int cmd_generate(const GenerateOptions& gopts, const CommandOptions& opts);
int cmd_experiment(const std::filesystem::path& manifest_path, const CommandOptions& opts);

} // namespace tda
