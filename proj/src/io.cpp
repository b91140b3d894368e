#include "tda/io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <map>
#include <sstream>

#include "tda/errors.hpp"

namespace tda {

namespace {

constexpr const char* kDiagramHeader = "# persistence-diagram v1";
constexpr const char* kKernelHeaderPrefix = "# kernel-matrix v1";

std::string location(const std::filesystem::path& path, std::size_t line) {
    return path.string() + ":" + std::to_string(line);
}

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

std::vector<std::string> split_csv(const std::string& line) {
    std::vector<std::string> out;
    std::string field;
    std::istringstream is(line);
    while (std::getline(is, field, ',')) out.push_back(trim(field));
    if (!line.empty() && line.back() == ',') out.push_back("");
    return out;
}

double parse_double(const std::string& s, const std::filesystem::path& path, std::size_t line) {
    const std::string t = trim(s);
    if (!t.empty()) {
        char* end = nullptr;
        const double v = std::strtod(t.c_str(), &end);
        if (end == t.c_str() + t.size()) return v;
    }
    throw InputError(location(path, line) + ": expected a number, got '" + s + "'");
}

std::ifstream open_input(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw InputError("cannot open " + path.string());
    return in;
}

std::ofstream open_output(const std::filesystem::path& path) {
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    std::ofstream out(path);
    if (!out) throw InputError("cannot write " + path.string());
    return out;
}

} // namespace

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

PointCloud read_cloud_csv(const std::filesystem::path& path) {
    std::ifstream in = open_input(path);
    std::vector<std::vector<double>> rows;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const std::string t = trim(line);
        if (t.empty()) continue;
        if (t[0] == '#')
            throw InputError(location(path, lineno) +
                             ": point-cloud files have no header lines");
        const auto fields = split_csv(t);
        std::vector<double> row;
        row.reserve(fields.size());
        for (const auto& f : fields) row.push_back(parse_double(f, path, lineno));
        if (!rows.empty() && row.size() != rows.front().size())
            throw InputError(location(path, lineno) + ": expected " +
                             std::to_string(rows.front().size()) + " columns, got " +
                             std::to_string(row.size()));
        rows.push_back(std::move(row));
    }
    if (rows.empty()) throw InputError(path.string() + ": no points in file");
    Eigen::MatrixXd pts(rows.size(), rows.front().size());
    for (std::size_t i = 0; i < rows.size(); ++i)
        for (std::size_t j = 0; j < rows.front().size(); ++j) pts(i, j) = rows[i][j];
    return PointCloud(std::move(pts));
}

void write_cloud_csv(const std::filesystem::path& path, const PointCloud& cloud) {
    std::ofstream out = open_output(path);
    const auto& pts = cloud.points();
    for (Eigen::Index i = 0; i < pts.rows(); ++i) {
        for (Eigen::Index j = 0; j < pts.cols(); ++j) {
            if (j) out << ',';
            out << format_double(pts(i, j));
        }
        out << '\n';
    }
}

bool is_diagram_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) return false;
    std::string line;
    if (!std::getline(in, line)) return false;
    return trim(line) == kDiagramHeader;
}

std::vector<PersistenceDiagram> read_diagram_csv(const std::filesystem::path& path) {
    std::ifstream in = open_input(path);
    std::string line;
    std::size_t lineno = 0;
    if (!std::getline(in, line) || trim(line) != kDiagramHeader)
        throw InputError(location(path, 1) + ": missing '" + std::string(kDiagramHeader) +
                         "' header");
    lineno = 1;

    std::map<int, PersistenceDiagram> by_dim;
    while (std::getline(in, line)) {
        ++lineno;
        const std::string t = trim(line);
        if (t.empty() || t[0] == '#') continue;
        const auto fields = split_csv(t);
        if (fields.size() != 3)
            throw InputError(location(path, lineno) + ": expected dim,birth,death");
        const double dim_raw = parse_double(fields[0], path, lineno);
        const int dim = static_cast<int>(dim_raw);
        if (dim < 0 || dim != dim_raw)
            throw InputError(location(path, lineno) + ": dimension must be a nonnegative integer");
        DiagramPoint pt{parse_double(fields[1], path, lineno),
                        parse_double(fields[2], path, lineno)};
        if (std::isnan(pt.birth) || std::isnan(pt.death) || std::isinf(pt.birth) ||
            pt.death < pt.birth)
            throw InputError(location(path, lineno) + ": need finite birth <= death");
        auto& d = by_dim[dim];
        d.dim = dim;
        d.points.push_back(pt);
    }
    std::vector<PersistenceDiagram> out;
    out.reserve(by_dim.size());
    for (auto& [dim, d] : by_dim) {
        std::sort(d.points.begin(), d.points.end(), diagram_point_less);
        out.push_back(std::move(d));
    }
    return out;
}

void write_diagram_csv(const std::filesystem::path& path,
                       const std::vector<PersistenceDiagram>& diagrams) {
    std::ofstream out = open_output(path);
    out << kDiagramHeader << '\n';
    std::vector<const PersistenceDiagram*> ordered;
    for (const auto& d : diagrams) ordered.push_back(&d);
    std::sort(ordered.begin(), ordered.end(),
              [](const auto* a, const auto* b) { return a->dim < b->dim; });
    for (const auto* d : ordered) {
        auto pts = d->points;
        std::sort(pts.begin(), pts.end(), diagram_point_less);
        for (const auto& pt : pts)
            out << d->dim << ',' << format_double(pt.birth) << ','
                << (pt.essential() ? std::string("inf") : format_double(pt.death)) << '\n';
    }
}

PersistenceDiagram select_dim(const std::vector<PersistenceDiagram>& diagrams, int dim) {
    for (const auto& d : diagrams)
        if (d.dim == dim) return d;
    PersistenceDiagram empty;
    empty.dim = dim;
    return empty;
}

Eigen::MatrixXd read_distance_csv(const std::filesystem::path& path) {
    std::ifstream in = open_input(path);
    std::vector<std::vector<double>> rows;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const std::string t = trim(line);
        if (t.empty() || t[0] == '#') continue;
        const auto fields = split_csv(t);
        std::vector<double> row;
        for (const auto& f : fields)
            if (!f.empty()) row.push_back(parse_double(f, path, lineno));
        if (row.empty())
            throw InputError(location(path, lineno) + ": empty distance row");
        rows.push_back(std::move(row));
    }
    if (rows.empty()) throw InputError(path.string() + ": no distance rows");
    const std::size_t n = rows.size();

    bool full = true, lower = true;
    for (std::size_t i = 0; i < n; ++i) {
        if (rows[i].size() != n) full = false;
        if (rows[i].size() != i + 1) lower = false;
    }
    Eigen::MatrixXd d(n, n);
    if (full) {
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) d(i, j) = rows[i][j];
    } else if (lower) {
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j <= i; ++j) d(i, j) = d(j, i) = rows[i][j];
    } else {
        throw InputError(path.string() +
                         ": rows form neither a full square nor a lower-triangular matrix");
    }
    return d;
}

void write_kernel_matrix_csv(const std::filesystem::path& path, const Eigen::MatrixXd& k,
                             const std::string& kind, const std::string& params) {
    std::ofstream out = open_output(path);
    out << kKernelHeaderPrefix << " kind=" << kind << " params=" << params << '\n';
    for (Eigen::Index i = 0; i < k.rows(); ++i) {
        for (Eigen::Index j = 0; j < k.cols(); ++j) {
            if (j) out << ',';
            out << format_double(k(i, j));
        }
        out << '\n';
    }
}

Eigen::MatrixXd read_kernel_matrix_csv(const std::filesystem::path& path, std::string* kind,
                                       std::string* params) {
    std::ifstream in = open_input(path);
    std::string line;
    if (!std::getline(in, line) || trim(line).rfind(kKernelHeaderPrefix, 0) != 0)
        throw InputError(location(path, 1) + ": missing '" + std::string(kKernelHeaderPrefix) +
                         "' header");
    const std::string header = trim(line);
    const auto kind_pos = header.find("kind=");
    const auto params_pos = header.find(" params=");
    if (kind_pos == std::string::npos || params_pos == std::string::npos)
        throw InputError(location(path, 1) + ": header needs kind= and params= fields");
    if (kind) *kind = header.substr(kind_pos + 5, params_pos - kind_pos - 5);
    if (params) *params = header.substr(params_pos + 8);

    std::vector<std::vector<double>> rows;
    std::size_t lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        const std::string t = trim(line);
        if (t.empty()) continue;
        const auto fields = split_csv(t);
        std::vector<double> row;
        for (const auto& f : fields) row.push_back(parse_double(f, path, lineno));
        rows.push_back(std::move(row));
    }
    const std::size_t n = rows.size();
    if (n == 0) throw InputError(path.string() + ": kernel matrix has no rows");
    Eigen::MatrixXd k(n, n);
    for (std::size_t i = 0; i < n; ++i) {
        if (rows[i].size() != n)
            throw InputError(path.string() + ": kernel matrix must be square");
        for (std::size_t j = 0; j < n; ++j) k(i, j) = rows[i][j];
    }
    return k;
}

void write_text_file(const std::filesystem::path& path, const std::string& content) {
    std::ofstream out = open_output(path);
    out << content;
}

std::string read_text_file(const std::filesystem::path& path) {
    std::ifstream in = open_input(path);
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

} // namespace tda
