#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "tda/persistence.hpp"

namespace tda {

/// Ground distance between diagram points inside the transport objective.
enum class Ground { L2, Linf };

std::string ground_name(Ground g);
Ground ground_from_name(const std::string& name);

constexpr double kInfinityP = std::numeric_limits<double>::infinity();

struct WassersteinParams {
    Ground ground = Ground::L2;
    double p = 2.0; // >= 1; kInfinityP selects the minimax (bottleneck-style) objective
};

/// One matched pair of an augmented bijection; index -1 stands for the diagonal.
struct MatchPair {
    int left = -1;
    int right = -1;
    double ground_cost = 0.0;
};

/// Augmented bijection realizing a transport cost. `cost` is the sum of
/// ground costs raised to the p-th power (the optimal assignment total), or
/// the maximum ground cost when p is infinite.
struct Matching {
    std::vector<MatchPair> pairs;
    double cost = 0.0;
};

struct DistanceResult {
    double value = 0.0;
    Matching matching;
};

double ground_distance(const DiagramPoint& a, const DiagramPoint& b, Ground g);

/// Nearest diagonal point ((b+d)/2, (b+d)/2) and the cost of moving there:
/// pers/2 under Linf ground, pers/sqrt(2) under L2.
std::pair<DiagramPoint, double> diagonal_projection(const DiagramPoint& x, Ground g);

/// Exact Wasserstein distance W_{ground,p} between bounded diagrams, solved as
/// an augmented assignment problem, together with a realizing matching.
DistanceResult wasserstein(const PersistenceDiagram& a, const PersistenceDiagram& b,
                           const WassersteinParams& params);

/// Bottleneck distance W_{Linf,inf}: binary search over the discrete set of
/// candidate costs with a bipartite feasibility matching at each threshold.
DistanceResult bottleneck(const PersistenceDiagram& a, const PersistenceDiagram& b);

/// Exhaustive minimum over all augmented bijections; requires |a|+|b| <= 8.
/// Test oracle for `wasserstein` and `bottleneck` (p = inf gives the minimax).
double brute_force_wasserstein(const PersistenceDiagram& a, const PersistenceDiagram& b,
                               const WassersteinParams& params);

/// Total order on diagram content (size, then sorted points); used to
/// canonicalize argument order so distances are exactly symmetric.
bool diagram_content_less(const PersistenceDiagram& a, const PersistenceDiagram& b);

/// 64-bit content hash of the sorted point list (cache key).
std::uint64_t diagram_content_hash(const PersistenceDiagram& d);

} // namespace tda
