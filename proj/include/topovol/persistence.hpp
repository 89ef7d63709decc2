#ifndef TOPOVOL_PERSISTENCE_HPP
#define TOPOVOL_PERSISTENCE_HPP

#include "topovol/embedding.hpp"

#include <array>
#include <cstdint>
#include <iosfwd>
#include <vector>

namespace topovol {

// Symmetric Euclidean distance matrix, flat row-major storage.
struct DistanceMatrix {
    std::size_t n = 0;
    std::vector<double> d; // n*n

    double at(std::size_t i, std::size_t j) const { return d[i * n + j]; }
    double& at(std::size_t i, std::size_t j) { return d[i * n + j]; }
    double diameter() const;
};

DistanceMatrix pairwise_distances(const PointCloud& cloud);

// Simplex of dimension <= 2, vertices sorted ascending. Unused slots
// beyond dim stay zero.
struct Simplex {
    std::array<std::uint32_t, 3> v{0, 0, 0};
    std::uint8_t dim = 0;
    double value = 0.0; // filtration value: 0 / edge length / max edge
};

// Vietoris-Rips filtration up to dimension 2, sorted by
// (value, dimension, lexicographic vertex tuple).
struct FiltrationComplex {
    std::vector<Simplex> simplices;
    std::size_t n_vertices = 0;
    double max_scale = 0.0;
};

FiltrationComplex build_rips(const DistanceMatrix& dist, double max_scale);

struct DiagramPair {
    double birth = 0.0;
    double death = 0.0;
    bool clamped = false; // death truncated at max_scale (unpaired class)
};

// Multiset of birth-death pairs for one homology degree; zero-persistence
// pairs are never stored. Pairs sorted by (birth, death).
struct PersistenceDiagram {
    int degree = 1;
    std::vector<DiagramPair> pairs;
    std::size_t clamped_count = 0;
    double max_scale = 0.0;
};

// Degree-1 persistent homology over Z2 from the boundary matrix, using a
// twist-style reduction (triangle columns only; edge positivity from a
// union-find pass). Unpaired cycles are clamped at max_scale and flagged.
PersistenceDiagram reduce_h1(const FiltrationComplex& fc);

// Degree-0 counterpart (edge columns over vertex pivots); not used by the
// pipeline but kept for cross-checks against the reduction oracle.
PersistenceDiagram reduce_h0(const FiltrationComplex& fc);

// pairwise_distances -> build_rips at the cloud diameter -> reduce_h1.
// At the diameter the complex is a cone, so the diagram is finite.
PersistenceDiagram diagram_for_cloud(const PointCloud& cloud);

// Text dump "birth<TAB>death" per line, sorted by (birth, death).
void dump_diagram(std::ostream& os, const PersistenceDiagram& diag);

} // namespace topovol

#endif
