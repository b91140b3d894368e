#pragma once

#include <limits>
#include <vector>

#include "tda/filtration.hpp"

namespace tda {

constexpr double kInfiniteDeath = std::numeric_limits<double>::infinity();

/// One birth/death pair. `death` is +inf for essential classes.
struct DiagramPoint {
    double birth = 0.0;
    double death = 0.0;

    double pers() const { return death - birth; }
    bool essential() const { return death == kInfiniteDeath; }
};

bool operator==(const DiagramPoint& a, const DiagramPoint& b);
bool diagram_point_less(const DiagramPoint& a, const DiagramPoint& b);

/// Multiset of diagram points of a single homology dimension. The diagonal is
/// implicit and never stored; the empty diagram is valid.
struct PersistenceDiagram {
    int dim = 0;
    std::vector<DiagramPoint> points;

    std::size_t size() const { return points.size(); }
    bool empty() const { return points.empty(); }
    bool has_essential() const;

    /// Points sorted by (birth, death); used for content comparison and hashing.
    PersistenceDiagram sorted() const;
};

bool same_multiset(const PersistenceDiagram& a, const PersistenceDiagram& b, double tol = 0.0);

/// Diagrams for homology dimensions 0..max_hom_dim, indexed by dimension.
struct DiagramSet {
    std::vector<PersistenceDiagram> diagrams;

    const PersistenceDiagram& operator[](int dim) const { return diagrams.at(dim); }
    int max_dim() const { return static_cast<int>(diagrams.size()) - 1; }
};

struct PersistenceOptions {
    /// Keep pairs with birth == death (diagnostic; they lie on the diagonal).
    bool keep_zero_persistence = false;
};

/// Raw output of the boundary-matrix reduction: each entry pairs the index of
/// a birth simplex with the index of the death simplex that kills it, or
/// `kUnpaired` for essential classes. Every simplex of the filtration appears
/// exactly once across all pairs.
struct SimplexPairing {
    static constexpr std::size_t kUnpaired = static_cast<std::size_t>(-1);
    std::vector<std::pair<std::size_t, std::size_t>> pairs;
};

/// Reduces the full Z/2 boundary matrix of `f` (all dimensions).
SimplexPairing compute_simplex_pairing(const Filtration& f);

/// Persistence pairing of the Z/2 boundary matrix of `f`. Requires
/// f.max_dim >= max_hom_dim + 1 so that classes of the top requested
/// dimension can be killed by cofaces.
DiagramSet compute_persistence(const Filtration& f, int max_hom_dim,
                               const PersistenceOptions& opts = {});

/// Degree-p total persistence, sum of pers(x)^p. Requires a bounded diagram.
double total_persistence(const PersistenceDiagram& d, double p);

/// What to do with essential (infinite-death) classes.
struct EssentialPolicy {
    enum class Kind { Cap, Drop };
    Kind kind = Kind::Drop;
    double cap_value = 0.0;

    static EssentialPolicy cap_at(double s) { return {Kind::Cap, s}; }
    static EssentialPolicy drop() { return {Kind::Drop, 0.0}; }
};

/// Replaces infinite deaths by the cap value, or removes those points.
/// Capping below some finite death is a domain error.
PersistenceDiagram cap_or_drop_essential(const PersistenceDiagram& d, const EssentialPolicy& policy);

} // namespace tda
