#pragma once

#include <vector>

#include "tda/persistence.hpp"

namespace tda {

/// Tent function of a diagram point read in rotated coordinates: peak height
/// pers/2 at the midpoint (birth+death)/2, sloping to 0 at birth and death.
double triangle_function(const DiagramPoint& x, double t);

/// k-th largest tent value at t (k >= 1); 0 when the diagram has fewer than
/// k points.
double landscape(const PersistenceDiagram& d, int k, double t);

/// Persistence-weighted average of tents with weights pers^q. The empty
/// diagram (and an all-zero weight total) gives the zero function.
double silhouette(const PersistenceDiagram& d, double q, double t);

/// count evenly spaced values covering [lo, hi] inclusive.
std::vector<double> uniform_grid(double lo, double hi, int count);

/// Trapezoidal L2 inner products of the first k_max landscape levels sampled
/// on t_grid; the basis of the landscape kernel.
double landscape_l2_inner(const PersistenceDiagram& a, const PersistenceDiagram& b,
                          int k_max, const std::vector<double>& t_grid);

} // namespace tda
