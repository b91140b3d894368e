#include "tda/filtration.hpp"

#include <algorithm>

namespace tda {

bool operator==(const Simplex& a, const Simplex& b) {
    return a.scale == b.scale && a.vertices == b.vertices;
}

namespace {

bool filtration_order(const Simplex& a, const Simplex& b) {
    if (a.scale != b.scale) return a.scale < b.scale;
    if (a.vertices.size() != b.vertices.size()) return a.vertices.size() < b.vertices.size();
    return a.vertices < b.vertices;
}

} // namespace

Filtration build_rips_filtration(const DistanceMatrix& dm, int max_dim,
                                 std::optional<double> max_scale) {
    if (max_dim < 0)
        throw ConfigError("max_dim must be nonnegative");
    const double cutoff = max_scale.value_or(dm.diameter());
    if (cutoff <= 0.0 && dm.size() > 1)
        throw ConfigError("max_scale must be positive");

    const int n = static_cast<int>(dm.size());
    std::vector<Simplex> simplices;
    simplices.reserve(static_cast<std::size_t>(n) * 2);

    for (int v = 0; v < n; ++v)
        simplices.push_back(Simplex{{v}, 0.0});

    // Grow dimension by dimension: extend each k-simplex with a vertex larger
    // than all of its own, so every simplex is produced exactly once.
    std::size_t level_begin = 0;
    std::size_t level_end = simplices.size();
    for (int dim = 1; dim <= max_dim; ++dim) {
        for (std::size_t s = level_begin; s < level_end; ++s) {
            const int last = simplices[s].vertices.back();
            for (int v = last + 1; v < n; ++v) {
                double scale = simplices[s].scale;
                bool ok = true;
                for (int u : simplices[s].vertices) {
                    const double duv = dm(u, v);
                    if (duv > cutoff) {
                        ok = false;
                        break;
                    }
                    scale = std::max(scale, duv);
                }
                if (!ok) continue;
                Simplex ext;
                ext.vertices = simplices[s].vertices;
                ext.vertices.push_back(v);
                ext.scale = scale;
                simplices.push_back(std::move(ext));
            }
        }
        level_begin = level_end;
        level_end = simplices.size();
        if (level_begin == level_end) break; // no simplices of this dimension
    }

    std::sort(simplices.begin(), simplices.end(), filtration_order);

    Filtration f;
    f.simplices = std::move(simplices);
    f.max_dim = max_dim;
    f.max_scale = cutoff;
    return f;
}

} // namespace tda
