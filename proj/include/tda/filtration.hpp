#pragma once

#include <optional>
#include <vector>

#include "tda/distance_matrix.hpp"

namespace tda {

/// A simplex of the filtration: strictly increasing vertex indices plus the
/// scale at which it enters (its largest pairwise vertex distance).
struct Simplex {
    std::vector<int> vertices;
    double scale = 0.0;

    int dim() const { return static_cast<int>(vertices.size()) - 1; }
};

bool operator==(const Simplex& a, const Simplex& b);

/// Vietoris-Rips filtration: simplices sorted by (scale, dimension, vertex
/// order), so every face precedes its cofaces.
struct Filtration {
    std::vector<Simplex> simplices;
    int max_dim = 0;
    double max_scale = 0.0;

    std::size_t size() const { return simplices.size(); }
};

/// Builds the Rips filtration of `dm` up to simplex dimension `max_dim`,
/// keeping simplices whose scale is <= `max_scale`. A simplex enters at the
/// maximum pairwise distance of its vertices (diameter convention; vertices
/// enter at 0). Passing nullopt for `max_scale` uses the data diameter.
Filtration build_rips_filtration(const DistanceMatrix& dm, int max_dim,
                                 std::optional<double> max_scale = std::nullopt);

} // namespace tda
