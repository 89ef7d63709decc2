#ifndef TOPOVOL_EMBEDDING_HPP
#define TOPOVOL_EMBEDDING_HPP

#include "topovol/series.hpp"

#include <cstddef>
#include <vector>

namespace topovol {

struct EmbeddingConfig {
    std::size_t dimension = 4; // m
    std::size_t delay = 2;     // d
    std::size_t window = 50;   // w, points per cloud
    std::size_t stride = 1;    // window step; 1 everywhere in the analysis

    void validate() const;
};

// Dense point cloud in R^dim; points stored row-major. anchor_date is the
// date of the last scalar observation any point in the window consumes,
// so every statistic derived from the cloud is causal.
struct PointCloud {
    std::size_t dim = 0;
    std::vector<double> coords; // size() * dim values
    Date anchor_date;

    std::size_t size() const { return dim == 0 ? 0 : coords.size() / dim; }
    const double* point(std::size_t i) const { return coords.data() + i * dim; }
};

// Output of delay_embed: vector t has coordinates
// (z_t, z_{t+d}, ..., z_{t+(m-1)d}). Scalar dates are retained so window
// extraction can assign anchors.
struct DelayVectors {
    std::size_t dim = 0;   // m
    std::size_t delay = 0; // d
    std::vector<double> coords; // count() * dim, row-major
    std::vector<Date> scalar_dates;

    std::size_t count() const { return dim == 0 ? 0 : coords.size() / dim; }
    const double* vec(std::size_t t) const { return coords.data() + t * dim; }
};

DelayVectors delay_embed(const ReturnSeries& s, std::size_t m, std::size_t d);

std::vector<PointCloud> sliding_windows(const DelayVectors& v, std::size_t w,
                                        std::size_t stride = 1);

// Convenience composition used by the pipeline and surrogate machinery.
std::vector<PointCloud> embed_windows(const ReturnSeries& s,
                                      const EmbeddingConfig& cfg);

} // namespace topovol

#endif
