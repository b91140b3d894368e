#pragma once

#include <vector>

#include <Eigen/Dense>

namespace tda {

/// Exact minimum-cost assignment on a square cost matrix (Jonker-Volgenant
/// shortest augmenting path). Fills row_to_col with the optimal permutation
/// and returns the total cost recomputed from the matrix entries.
double solve_assignment(const Eigen::MatrixXd& cost, std::vector<int>& row_to_col);

/// Maximum bipartite matching by augmenting paths. `adj[u]` lists the right
/// vertices reachable from left vertex u. Fills match_left (left -> right,
/// -1 if unmatched) and returns the matching size.
int max_bipartite_matching(const std::vector<std::vector<int>>& adj, int n_right,
                           std::vector<int>& match_left);

} // namespace tda
