#ifndef TOPOVOL_LANDSCAPE_HPP
#define TOPOVOL_LANDSCAPE_HPP

#include "topovol/persistence.hpp"

#include <cstddef>
#include <vector>

namespace topovol {

struct LandscapeConfig {
    std::size_t i_max = 10;      // landscape layers kept
    std::size_t grid_size = 500; // scale-grid nodes

    void validate() const;
};

// Landscape layers sampled on a uniform grid spanning
// [min birth, max death] of the source diagram ([0,1] when empty).
// layers[i][j] = lambda(i+1)(grid[j]); layers are pointwise decreasing.
struct PersistenceLandscape {
    std::vector<double> grid;
    std::vector<std::vector<double>> layers;
};

PersistenceLandscape landscape_from_diagram(const PersistenceDiagram& diag,
                                            std::size_t grid_size,
                                            std::size_t i_max);

// Exact L1 norm: (1/4) * sum (death - birth)^2. Errors on infinite death.
double l1_closed_form(const PersistenceDiagram& diag);

// Truncated grid norm: trapezoidal integration of |lambda(i)|^p per layer,
// summed over layers, then the p-th root.
double lp_norm_grid(const PersistenceLandscape& land, double p);

// Per-window L1 norms anchored at the window anchor dates. grid_l1 is the
// pipeline value; closed_l1 is the exact cross-check carried alongside.
struct LandscapeNormSeries {
    std::vector<Date> anchors;
    std::vector<double> grid_l1;
    std::vector<double> closed_l1;
    std::vector<std::size_t> n_pairs;
    double p = 1.0;

    std::size_t size() const { return anchors.size(); }
    ReturnSeries as_series(const std::string& name = "l1_norm") const;
};

// diagrams_out, when given, receives the per-window diagrams (for dumps).
LandscapeNormSeries l1_series(const std::vector<PointCloud>& windows,
                              const LandscapeConfig& cfg, int workers = 1,
                              std::vector<PersistenceDiagram>* diagrams_out = nullptr);

} // namespace topovol

#endif
