#include "tda/summaries.hpp"

#include <algorithm>
#include <cmath>

#include "tda/errors.hpp"

namespace tda {

double triangle_function(const DiagramPoint& x, double t) {
    if (x.essential()) throw DomainError("triangle function needs a bounded point");
    return std::max(0.0, std::min(t - x.birth, x.death - t));
}

double landscape(const PersistenceDiagram& d, int k, double t) {
    if (k < 1) throw ConfigError("landscape level k must be >= 1");
    if (static_cast<std::size_t>(k) > d.size()) return 0.0;
    std::vector<double> vals;
    vals.reserve(d.size());
    for (const auto& x : d.points) vals.push_back(triangle_function(x, t));
    std::nth_element(vals.begin(), vals.begin() + (k - 1), vals.end(), std::greater<>());
    return vals[k - 1];
}

double silhouette(const PersistenceDiagram& d, double q, double t) {
    if (q <= 0.0) throw ConfigError("silhouette weight exponent q must be > 0");
    double num = 0.0, den = 0.0;
    for (const auto& x : d.points) {
        const double w = std::pow(x.pers(), q);
        num += w * triangle_function(x, t);
        den += w;
    }
    if (den == 0.0) return 0.0;
    return num / den;
}

std::vector<double> uniform_grid(double lo, double hi, int count) {
    if (count < 2 || !(lo < hi)) throw ConfigError("grid needs lo < hi and at least 2 points");
    std::vector<double> g(count);
    for (int i = 0; i < count; ++i)
        g[i] = lo + (hi - lo) * static_cast<double>(i) / (count - 1);
    return g;
}

double landscape_l2_inner(const PersistenceDiagram& a, const PersistenceDiagram& b,
                          int k_max, const std::vector<double>& t_grid) {
    if (k_max < 1) throw ConfigError("landscape kernel needs k_max >= 1");
    if (t_grid.size() < 2) throw ConfigError("landscape kernel needs a t_grid with >= 2 points");
    if (!std::is_sorted(t_grid.begin(), t_grid.end()))
        throw ConfigError("landscape kernel t_grid must be sorted ascending");
    double total = 0.0;
    const std::size_t g = t_grid.size();
    for (int k = 1; k <= k_max; ++k) {
        std::vector<double> fa(g), fb(g);
        for (std::size_t i = 0; i < g; ++i) {
            fa[i] = landscape(a, k, t_grid[i]);
            fb[i] = landscape(b, k, t_grid[i]);
        }
        for (std::size_t i = 0; i + 1 < g; ++i) {
            const double dt = t_grid[i + 1] - t_grid[i];
            total += 0.5 * dt * (fa[i] * fb[i] + fa[i + 1] * fb[i + 1]);
        }
    }
    return total;
}

} // namespace tda
