#include "tda/assignment.hpp"

#include <limits>

namespace tda {

double solve_assignment(const Eigen::MatrixXd& cost, std::vector<int>& row_to_col) {
    const int n = static_cast<int>(cost.rows());
    row_to_col.assign(n, -1);
    if (n == 0) return 0.0;

    constexpr double inf = std::numeric_limits<double>::infinity();
    // 1-based potentials; p[j] = row assigned to column j.
    std::vector<double> u(n + 1, 0.0), v(n + 1, 0.0);
    std::vector<int> p(n + 1, 0), way(n + 1, 0);

    for (int i = 1; i <= n; ++i) {
        p[0] = i;
        int j0 = 0;
        std::vector<double> minv(n + 1, inf);
        std::vector<char> used(n + 1, 0);
        do {
            used[j0] = 1;
            const int i0 = p[j0];
            int j1 = 0;
            double delta = inf;
            for (int j = 1; j <= n; ++j) {
                if (used[j]) continue;
                const double cur = cost(i0 - 1, j - 1) - u[i0] - v[j];
                if (cur < minv[j]) {
                    minv[j] = cur;
                    way[j] = j0;
                }
                if (minv[j] < delta) {
                    delta = minv[j];
                    j1 = j;
                }
            }
            for (int j = 0; j <= n; ++j) {
                if (used[j]) {
                    u[p[j]] += delta;
                    v[j] -= delta;
                } else {
                    minv[j] -= delta;
                }
            }
            j0 = j1;
        } while (p[j0] != 0);
        do {
            const int j1 = way[j0];
            p[j0] = p[j1];
            j0 = j1;
        } while (j0 != 0);
    }

    double total = 0.0;
    for (int j = 1; j <= n; ++j) {
        row_to_col[p[j] - 1] = j - 1;
        total += cost(p[j] - 1, j - 1);
    }
    return total;
}

namespace {

bool try_augment(int u, const std::vector<std::vector<int>>& adj, std::vector<int>& match_left,
                 std::vector<int>& match_right, std::vector<char>& visited) {
    for (int w : adj[u]) {
        if (visited[w]) continue;
        visited[w] = 1;
        if (match_right[w] == -1 || try_augment(match_right[w], adj, match_left, match_right, visited)) {
            match_left[u] = w;
            match_right[w] = u;
            return true;
        }
    }
    return false;
}

} // namespace

int max_bipartite_matching(const std::vector<std::vector<int>>& adj, int n_right,
                           std::vector<int>& match_left) {
    const int n_left = static_cast<int>(adj.size());
    match_left.assign(n_left, -1);
    std::vector<int> match_right(n_right, -1);
    int size = 0;
    std::vector<char> visited(n_right);
    for (int u = 0; u < n_left; ++u) {
        std::fill(visited.begin(), visited.end(), 0);
        if (try_augment(u, adj, match_left, match_right, visited)) ++size;
    }
    return size;
}

} // namespace tda
