#include "tda/persistence.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <unordered_map>

namespace tda {

bool operator==(const DiagramPoint& a, const DiagramPoint& b) {
    return a.birth == b.birth && a.death == b.death;
}

bool diagram_point_less(const DiagramPoint& a, const DiagramPoint& b) {
    if (a.birth != b.birth) return a.birth < b.birth;
    return a.death < b.death;
}

bool PersistenceDiagram::has_essential() const {
    return std::any_of(points.begin(), points.end(),
                       [](const DiagramPoint& x) { return x.essential(); });
}

PersistenceDiagram PersistenceDiagram::sorted() const {
    PersistenceDiagram out = *this;
    std::sort(out.points.begin(), out.points.end(), diagram_point_less);
    return out;
}

bool same_multiset(const PersistenceDiagram& a, const PersistenceDiagram& b, double tol) {
    if (a.points.size() != b.points.size()) return false;
    const auto sa = a.sorted();
    const auto sb = b.sorted();
    for (std::size_t i = 0; i < sa.points.size(); ++i) {
        if (std::abs(sa.points[i].birth - sb.points[i].birth) > tol) return false;
        const double da = sa.points[i].death;
        const double db = sb.points[i].death;
        if (std::isinf(da) || std::isinf(db)) {
            if (da != db) return false;
        } else if (std::abs(da - db) > tol) {
            return false;
        }
    }
    return true;
}

namespace {

struct VertexKeyHash {
    std::size_t operator()(const std::vector<int>& v) const {
        std::uint64_t h = 1469598103934665603ull;
        for (int x : v) {
            h ^= static_cast<std::uint64_t>(x) + 0x9e3779b97f4a7c15ull;
            h *= 1099511628211ull;
        }
        return static_cast<std::size_t>(h);
    }
};

// Symmetric difference of two strictly increasing index lists (Z/2 column add).
void xor_into(std::vector<std::size_t>& col, const std::vector<std::size_t>& other,
              std::vector<std::size_t>& scratch) {
    scratch.clear();
    std::set_symmetric_difference(col.begin(), col.end(), other.begin(), other.end(),
                                  std::back_inserter(scratch));
    col.swap(scratch);
}

} // namespace

SimplexPairing compute_simplex_pairing(const Filtration& f) {
    const std::size_t m = f.simplices.size();

    std::unordered_map<std::vector<int>, std::size_t, VertexKeyHash> index_of;
    index_of.reserve(m * 2);
    for (std::size_t i = 0; i < m; ++i)
        index_of.emplace(f.simplices[i].vertices, i);

    // Standard column reduction: columns in filtration order, pivot = largest
    // face index; a column that reduces to empty marks a birth.
    std::vector<std::vector<std::size_t>> reduced(m);
    std::vector<std::size_t> pivot_owner(m, m); // pivot row -> owning column
    std::vector<char> is_positive(m, 0);
    std::vector<char> is_paired(m, 0);

    SimplexPairing pairing;
    std::vector<std::size_t> scratch;
    std::vector<int> face;
    for (std::size_t j = 0; j < m; ++j) {
        const Simplex& s = f.simplices[j];
        std::vector<std::size_t>& col = reduced[j];
        if (s.vertices.size() > 1) {
            col.reserve(s.vertices.size());
            for (std::size_t drop = 0; drop < s.vertices.size(); ++drop) {
                face.clear();
                for (std::size_t k = 0; k < s.vertices.size(); ++k)
                    if (k != drop) face.push_back(s.vertices[k]);
                col.push_back(index_of.at(face));
            }
            std::sort(col.begin(), col.end());
        }

        while (!col.empty() && pivot_owner[col.back()] != m)
            xor_into(col, reduced[pivot_owner[col.back()]], scratch);

        if (col.empty()) {
            is_positive[j] = 1;
            continue;
        }

        const std::size_t birth_idx = col.back();
        pivot_owner[birth_idx] = j;
        is_paired[birth_idx] = 1;
        is_paired[j] = 1;
        pairing.pairs.emplace_back(birth_idx, j);
    }

    for (std::size_t j = 0; j < m; ++j)
        if (is_positive[j] && !is_paired[j])
            pairing.pairs.emplace_back(j, SimplexPairing::kUnpaired);
    return pairing;
}

DiagramSet compute_persistence(const Filtration& f, int max_hom_dim,
                               const PersistenceOptions& opts) {
    if (max_hom_dim < 0)
        throw ConfigError("max_hom_dim must be nonnegative");
    if (f.max_dim < max_hom_dim + 1)
        throw ConfigError("filtration max_dim " + std::to_string(f.max_dim) +
                          " too small for homology dimension " + std::to_string(max_hom_dim) +
                          " (need max_dim >= hom_dim + 1)");

    const SimplexPairing pairing = compute_simplex_pairing(f);

    DiagramSet out;
    out.diagrams.resize(max_hom_dim + 1);
    for (int d = 0; d <= max_hom_dim; ++d)
        out.diagrams[d].dim = d;

    for (const auto& [birth_idx, death_idx] : pairing.pairs) {
        const int dim = f.simplices[birth_idx].dim();
        if (dim > max_hom_dim) continue;
        const double birth = f.simplices[birth_idx].scale;
        if (death_idx == SimplexPairing::kUnpaired) {
            out.diagrams[dim].points.push_back(DiagramPoint{birth, kInfiniteDeath});
            continue;
        }
        const double death = f.simplices[death_idx].scale;
        if (birth == death && !opts.keep_zero_persistence) continue;
        out.diagrams[dim].points.push_back(DiagramPoint{birth, death});
    }

    for (auto& d : out.diagrams)
        std::sort(d.points.begin(), d.points.end(), diagram_point_less);
    return out;
}

double total_persistence(const PersistenceDiagram& d, double p) {
    if (p <= 0.0)
        throw ConfigError("total persistence degree p must be positive");
    double total = 0.0;
    for (const DiagramPoint& x : d.points) {
        if (x.essential())
            throw DomainError("total_persistence requires a bounded diagram; cap or drop "
                              "essential classes first");
        total += std::pow(x.pers(), p);
    }
    return total;
}

PersistenceDiagram cap_or_drop_essential(const PersistenceDiagram& d, const EssentialPolicy& policy) {
    PersistenceDiagram out;
    out.dim = d.dim;
    out.points.reserve(d.points.size());
    if (policy.kind == EssentialPolicy::Kind::Cap) {
        for (const DiagramPoint& x : d.points) {
            if (!x.essential() && x.death > policy.cap_value)
                throw DomainError("cap value " + std::to_string(policy.cap_value) +
                                  " lies below a finite death " + std::to_string(x.death));
        }
    }
    for (const DiagramPoint& x : d.points) {
        if (!x.essential()) {
            out.points.push_back(x);
        } else if (policy.kind == EssentialPolicy::Kind::Cap) {
            out.points.push_back(DiagramPoint{x.birth, policy.cap_value});
        }
    }
    std::sort(out.points.begin(), out.points.end(), diagram_point_less);
    return out;
}

} // namespace tda
