#include "tda/diagram_metrics.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <functional>
#include <numbers>

#include "tda/assignment.hpp"
#include "tda/errors.hpp"

namespace tda {

std::string ground_name(Ground g) {
    return g == Ground::L2 ? "l2" : "linf";
}

Ground ground_from_name(const std::string& name) {
    if (name == "l2") return Ground::L2;
    if (name == "linf") return Ground::Linf;
    throw ConfigError("unknown ground distance '" + name + "' (expected l2 or linf)");
}

double ground_distance(const DiagramPoint& a, const DiagramPoint& b, Ground g) {
    const double db = a.birth - b.birth;
    const double dd = a.death - b.death;
    if (g == Ground::Linf) return std::max(std::abs(db), std::abs(dd));
    return std::hypot(db, dd);
}

std::pair<DiagramPoint, double> diagonal_projection(const DiagramPoint& x, Ground g) {
    if (x.essential()) throw DomainError("cannot project an essential point onto the diagonal");
    const double mid = (x.birth + x.death) / 2.0;
    const double half = x.pers() / 2.0;
    const double cost = g == Ground::Linf ? half : half * std::numbers::sqrt2;
    return {DiagramPoint{mid, mid}, cost};
}

namespace {

void require_bounded(const PersistenceDiagram& d, const char* what) {
    if (d.has_essential())
        throw DomainError(std::string(what) +
                          " needs bounded diagrams; cap or drop essential points first");
}

double powered(double c, double p) {
    if (p == 1.0) return c;
    if (p == 2.0) return c * c;
    return std::pow(c, p);
}

double root(double total, double p) {
    if (p == 1.0) return total;
    if (p == 2.0) return std::sqrt(total);
    return std::pow(total, 1.0 / p);
}

void flip_sides(Matching& m) {
    for (auto& pr : m.pairs) std::swap(pr.left, pr.right);
}

double projection_cost(const DiagramPoint& x, Ground g) {
    return diagonal_projection(x, g).second;
}

/// Minimax (p = inf) transport: binary search on the sorted candidate costs,
/// with an augmenting-path feasibility matching at each threshold. Points may
/// retire to their own diagonal partner; unused partners pair off for free.
DistanceResult minimax_transport(const PersistenceDiagram& a, const PersistenceDiagram& b,
                                 Ground g) {
    const int n = static_cast<int>(a.size());
    const int m = static_cast<int>(b.size());
    if (n == 0 && m == 0) return {};

    Eigen::MatrixXd gd(std::max(n, 1), std::max(m, 1));
    std::vector<double> proj_a(n), proj_b(m);
    std::vector<double> cand{0.0};
    for (int i = 0; i < n; ++i) {
        proj_a[i] = projection_cost(a.points[i], g);
        cand.push_back(proj_a[i]);
    }
    for (int j = 0; j < m; ++j) {
        proj_b[j] = projection_cost(b.points[j], g);
        cand.push_back(proj_b[j]);
    }
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < m; ++j) {
            gd(i, j) = ground_distance(a.points[i], b.points[j], g);
            cand.push_back(gd(i, j));
        }
    std::sort(cand.begin(), cand.end());
    cand.erase(std::unique(cand.begin(), cand.end()), cand.end());

    // Left: a's points, then b's diagonal partners. Right: b's points, then
    // a's diagonal partners.
    const int n_left = n + m;
    const int n_right = m + n;
    std::vector<std::vector<int>> adj(n_left);
    std::vector<int> match_left;
    auto feasible = [&](double t) {
        for (auto& row : adj) row.clear();
        for (int i = 0; i < n; ++i) {
            for (int j = 0; j < m; ++j)
                if (gd(i, j) <= t) adj[i].push_back(j);
            if (proj_a[i] <= t) adj[i].push_back(m + i);
        }
        for (int j = 0; j < m; ++j) {
            if (proj_b[j] <= t) adj[n + j].push_back(j);
            for (int i = 0; i < n; ++i) adj[n + j].push_back(m + i);
        }
        return max_bipartite_matching(adj, n_right, match_left) == n_left;
    };

    std::size_t lo = 0, hi = cand.size() - 1; // the largest candidate is always feasible
    while (lo < hi) {
        const std::size_t mid = lo + (hi - lo) / 2;
        if (feasible(cand[mid]))
            hi = mid;
        else
            lo = mid + 1;
    }
    const double value = cand[lo];
    feasible(value);

    DistanceResult res;
    res.value = value;
    for (int u = 0; u < n_left; ++u) {
        const int v = match_left[u];
        if (u < n) {
            if (v < m)
                res.matching.pairs.push_back({u, v, gd(u, v)});
            else
                res.matching.pairs.push_back({u, -1, proj_a[u]});
        } else if (v < m) {
            res.matching.pairs.push_back({-1, v, proj_b[v]});
        } // partner-partner matches carry no cost
    }
    double worst = 0.0;
    for (const auto& pr : res.matching.pairs) worst = std::max(worst, pr.ground_cost);
    res.matching.cost = worst;
    return res;
}

DistanceResult sum_transport(const PersistenceDiagram& a, const PersistenceDiagram& b,
                             Ground g, double p) {
    const int n = static_cast<int>(a.size());
    const int m = static_cast<int>(b.size());
    if (n == 0 && m == 0) return {};

    const int dim = n + m;
    Eigen::MatrixXd cost(dim, dim);
    for (int i = 0; i < n; ++i) {
        const double diag = powered(projection_cost(a.points[i], g), p);
        for (int j = 0; j < m; ++j)
            cost(i, j) = powered(ground_distance(a.points[i], b.points[j], g), p);
        for (int j = m; j < dim; ++j) cost(i, j) = diag;
    }
    for (int i = n; i < dim; ++i) {
        for (int j = 0; j < m; ++j) cost(i, j) = powered(projection_cost(b.points[j], g), p);
        for (int j = m; j < dim; ++j) cost(i, j) = 0.0;
    }

    std::vector<int> row_to_col;
    const double total = solve_assignment(cost, row_to_col);

    DistanceResult res;
    res.value = root(total, p);
    res.matching.cost = total;
    for (int i = 0; i < dim; ++i) {
        const int j = row_to_col[i];
        if (i < n) {
            if (j < m)
                res.matching.pairs.push_back(
                    {i, j, ground_distance(a.points[i], b.points[j], g)});
            else
                res.matching.pairs.push_back({i, -1, projection_cost(a.points[i], g)});
        } else if (j < m) {
            res.matching.pairs.push_back({-1, j, projection_cost(b.points[j], g)});
        }
    }
    return res;
}

} // namespace

DistanceResult wasserstein(const PersistenceDiagram& a, const PersistenceDiagram& b,
                           const WassersteinParams& params) {
    if (std::isnan(params.p) || params.p < 1.0)
        throw ConfigError("wasserstein order p must be >= 1 (or inf)");
    require_bounded(a, "wasserstein");
    require_bounded(b, "wasserstein");

    // Canonical argument order makes the solve identical for (a, b) and
    // (b, a), so the distance is exactly symmetric.
    const bool swapped = diagram_content_less(b, a);
    const PersistenceDiagram& lhs = swapped ? b : a;
    const PersistenceDiagram& rhs = swapped ? a : b;

    DistanceResult res = params.p == kInfinityP ? minimax_transport(lhs, rhs, params.ground)
                                                : sum_transport(lhs, rhs, params.ground, params.p);
    if (swapped) flip_sides(res.matching);
    return res;
}

DistanceResult bottleneck(const PersistenceDiagram& a, const PersistenceDiagram& b) {
    return wasserstein(a, b, {Ground::Linf, kInfinityP});
}

double brute_force_wasserstein(const PersistenceDiagram& a, const PersistenceDiagram& b,
                               const WassersteinParams& params) {
    if (std::isnan(params.p) || params.p < 1.0)
        throw ConfigError("wasserstein order p must be >= 1 (or inf)");
    require_bounded(a, "brute_force_wasserstein");
    require_bounded(b, "brute_force_wasserstein");
    const std::size_t n = a.size(), m = b.size();
    if (n + m > 8)
        throw SizeLimitError("brute_force_wasserstein enumerates all bijections; "
                             "refusing |a| + |b| > 8");
    if (n + m == 0) return 0.0;

    const Ground g = params.ground;
    const double p = params.p;
    const bool minimax = p == kInfinityP;
    auto fold = [&](double acc, double c) {
        return minimax ? std::max(acc, c) : acc + powered(c, p);
    };

    double best = std::numeric_limits<double>::infinity();
    std::vector<char> used(m, 0);
    std::function<void(std::size_t, double)> rec = [&](std::size_t i, double acc) {
        if (acc >= best) return;
        if (i == n) {
            double total = acc;
            for (std::size_t j = 0; j < m; ++j)
                if (!used[j]) total = fold(total, projection_cost(b.points[j], g));
            best = std::min(best, total);
            return;
        }
        for (std::size_t j = 0; j < m; ++j) {
            if (used[j]) continue;
            used[j] = 1;
            rec(i + 1, fold(acc, ground_distance(a.points[i], b.points[j], g)));
            used[j] = 0;
        }
        rec(i + 1, fold(acc, projection_cost(a.points[i], g)));
    };
    rec(0, 0.0);
    return minimax ? best : root(best, p);
}

bool diagram_content_less(const PersistenceDiagram& a, const PersistenceDiagram& b) {
    if (a.size() != b.size()) return a.size() < b.size();
    const auto sa = a.sorted(), sb = b.sorted();
    return std::lexicographical_compare(
        sa.points.begin(), sa.points.end(), sb.points.begin(), sb.points.end(),
        [](const DiagramPoint& x, const DiagramPoint& y) { return diagram_point_less(x, y); });
}

std::uint64_t diagram_content_hash(const PersistenceDiagram& d) {
    const auto s = d.sorted();
    std::uint64_t h = 14695981039346656037ull;
    auto mix = [&h](std::uint64_t v) {
        for (int k = 0; k < 8; ++k) {
            h ^= (v >> (8 * k)) & 0xffu;
            h *= 1099511628211ull;
        }
    };
    mix(static_cast<std::uint64_t>(s.points.size()));
    for (const auto& pt : s.points) {
        mix(std::bit_cast<std::uint64_t>(pt.birth));
        mix(std::bit_cast<std::uint64_t>(pt.death));
    }
    return h;
}

} // namespace tda
