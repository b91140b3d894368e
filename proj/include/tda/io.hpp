#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "tda/persistence.hpp"
#include "tda/point_cloud.hpp"

namespace tda {

/// 17-significant-digit decimal form; round-trips any double.
std::string format_double(double v);

PointCloud read_cloud_csv(const std::filesystem::path& path);
void write_cloud_csv(const std::filesystem::path& path, const PointCloud& cloud);

/// True when the file starts with the persistence-diagram header line.
bool is_diagram_file(const std::filesystem::path& path);

/// Diagram file: `# persistence-diagram v1` header, rows dim,birth,death
/// (death may be inf). Returned diagrams are grouped and sorted by dimension.
std::vector<PersistenceDiagram> read_diagram_csv(const std::filesystem::path& path);
void write_diagram_csv(const std::filesystem::path& path,
                       const std::vector<PersistenceDiagram>& diagrams);

/// Diagram of `dim` from a parsed file; empty diagram when absent.
PersistenceDiagram select_dim(const std::vector<PersistenceDiagram>& diagrams, int dim);

/// Square symmetric distances from a full or lower-triangular CSV
/// (auto-detected by row lengths).
Eigen::MatrixXd read_distance_csv(const std::filesystem::path& path);

void write_kernel_matrix_csv(const std::filesystem::path& path, const Eigen::MatrixXd& k,
                             const std::string& kind, const std::string& params);
Eigen::MatrixXd read_kernel_matrix_csv(const std::filesystem::path& path,
                                       std::string* kind = nullptr,
                                       std::string* params = nullptr);

void write_text_file(const std::filesystem::path& path, const std::string& content);
std::string read_text_file(const std::filesystem::path& path);

} // namespace tda
