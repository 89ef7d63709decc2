#include "topovol/landscape.hpp"
#include "topovol/errors.hpp"
#include "topovol/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace topovol {

void LandscapeConfig::validate() const {
    if (grid_size < 2) throw InvalidInput("landscape grid_size must be >= 2");
    if (i_max < 1) throw InvalidInput("landscape i_max must be >= 1");
}

PersistenceLandscape landscape_from_diagram(const PersistenceDiagram& diag,
                                            std::size_t grid_size, std::size_t i_max) {
    if (grid_size < 2) throw InvalidInput("landscape grid_size must be >= 2");
    if (i_max < 1) throw InvalidInput("landscape i_max must be >= 1");

    double lo = 0.0, hi = 1.0;
    if (!diag.pairs.empty()) {
        lo = std::numeric_limits<double>::infinity();
        hi = -std::numeric_limits<double>::infinity();
        for (const auto& p : diag.pairs) {
            if (!std::isfinite(p.death))
                throw InvalidInput("landscape_from_diagram: infinite death in diagram");
            lo = std::min(lo, p.birth);
            hi = std::max(hi, p.death);
        }
    }

    PersistenceLandscape land;
    land.grid.resize(grid_size);
    const double step = (hi - lo) / static_cast<double>(grid_size - 1);
    for (std::size_t j = 0; j < grid_size; ++j)
        land.grid[j] = lo + step * static_cast<double>(j);
    land.grid.back() = hi;

    land.layers.assign(i_max, std::vector<double>(grid_size, 0.0));
    if (diag.pairs.empty()) return land;

    std::vector<double> tents;
    tents.reserve(diag.pairs.size());
    for (std::size_t j = 0; j < grid_size; ++j) {
        const double x = land.grid[j];
        tents.clear();
        for (const auto& p : diag.pairs) {
            const double t = std::min(x - p.birth, p.death - x);
            if (t > 0.0) tents.push_back(t);
        }
        const std::size_t k = std::min(i_max, tents.size());
        std::partial_sort(tents.begin(), tents.begin() + k, tents.end(),
                          std::greater<double>());
        for (std::size_t i = 0; i < k; ++i) land.layers[i][j] = tents[i];
    }
    return land;
}

double l1_closed_form(const PersistenceDiagram& diag) {
    double s = 0.0;
    for (const auto& p : diag.pairs) {
        if (!std::isfinite(p.death))
            throw InvalidInput("l1_closed_form: infinite death in diagram");
        const double span = p.death - p.birth;
        s += span * span;
    }
    return 0.25 * s;
}

double lp_norm_grid(const PersistenceLandscape& land, double p) {
    if (p < 1.0) throw InvalidInput("lp_norm_grid needs p >= 1");
    double total = 0.0;
    for (const auto& layer : land.layers) {
        double integral = 0.0;
        for (std::size_t j = 1; j < land.grid.size(); ++j) {
            const double dx = land.grid[j] - land.grid[j - 1];
            const double fa = std::pow(std::abs(layer[j - 1]), p);
            const double fb = std::pow(std::abs(layer[j]), p);
            integral += 0.5 * (fa + fb) * dx;
        }
        total += integral;
    }
    return std::pow(total, 1.0 / p);
}

ReturnSeries LandscapeNormSeries::as_series(const std::string& name) const {
    ReturnSeries s;
    s.dates = anchors;
    s.values = grid_l1;
    s.name = name;
    return s;
}

LandscapeNormSeries l1_series(const std::vector<PointCloud>& windows,
                              const LandscapeConfig& cfg, int workers,
                              std::vector<PersistenceDiagram>* diagrams_out) {
    cfg.validate();
    if (windows.empty()) throw InvalidInput("l1_series: empty window list");
    LandscapeNormSeries out;
    const std::size_t n = windows.size();
    out.anchors.resize(n);
    out.grid_l1.resize(n);
    out.closed_l1.resize(n);
    out.n_pairs.resize(n);
    if (diagrams_out) diagrams_out->resize(n);
    parallel_for(n, workers, [&](std::size_t i) {
        PersistenceDiagram diag = diagram_for_cloud(windows[i]);
        const PersistenceLandscape land =
            landscape_from_diagram(diag, cfg.grid_size, cfg.i_max);
        out.anchors[i] = windows[i].anchor_date;
        out.grid_l1[i] = lp_norm_grid(land, 1.0);
        out.closed_l1[i] = l1_closed_form(diag);
        out.n_pairs[i] = diag.pairs.size();
        if (diagrams_out) (*diagrams_out)[i] = std::move(diag);
    });
    return out;
}

} // namespace topovol
