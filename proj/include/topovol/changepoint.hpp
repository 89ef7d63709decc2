#ifndef TOPOVOL_CHANGEPOINT_HPP
#define TOPOVOL_CHANGEPOINT_HPP

#include "topovol/series.hpp"

#include <cstddef>
#include <vector>

namespace topovol {

struct ChangepointResult {
    // 0-based positions where a new segment begins, strictly inside (0, n).
    std::vector<std::size_t> changepoints;
    std::vector<double> segment_means;
    double penalty = 0.0;
    double total_cost = 0.0; // sum of segment SSEs + penalty * #changepoints
};

// Exact penalized mean-shift segmentation (PELT). The pruning is lossless
// for the SSE cost, so the result equals the unpruned optimal-partitioning
// dynamic program.
ChangepointResult pelt_mean_shift(const ReturnSeries& s, double penalty);

// BIC-style default: 2 * sample variance * log n.
double default_penalty(const ReturnSeries& s);

// Best single split regardless of penalty (binary segmentation constrained
// to exactly one changepoint); mirrors a single-dominant-shift readout.
ChangepointResult single_split(const ReturnSeries& s);

} // namespace topovol

#endif
