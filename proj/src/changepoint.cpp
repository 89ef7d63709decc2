#include "topovol/changepoint.hpp"
#include "topovol/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace topovol {

namespace {

// Prefix-sum SSE of the half-open index range [a, b).
struct SegmentCost {
    std::vector<double> s1, s2;
    explicit SegmentCost(const std::vector<double>& x)
        : s1(x.size() + 1, 0.0), s2(x.size() + 1, 0.0) {
        for (std::size_t i = 0; i < x.size(); ++i) {
            s1[i + 1] = s1[i] + x[i];
            s2[i + 1] = s2[i] + x[i] * x[i];
        }
    }
    double operator()(std::size_t a, std::size_t b) const {
        const double n = static_cast<double>(b - a);
        const double sum = s1[b] - s1[a];
        const double cost = (s2[b] - s2[a]) - sum * sum / n;
        return std::max(cost, 0.0); // clip rounding noise on flat segments
    }
    double mean(std::size_t a, std::size_t b) const {
        return (s1[b] - s1[a]) / static_cast<double>(b - a);
    }
};

ChangepointResult assemble(const ReturnSeries& s, const SegmentCost& cost,
                           std::vector<std::size_t> cps, double penalty) {
    ChangepointResult res;
    res.penalty = penalty;
    res.changepoints = std::move(cps);
    std::size_t prev = 0;
    double sse = 0.0;
    for (std::size_t cp : res.changepoints) {
        res.segment_means.push_back(cost.mean(prev, cp));
        sse += cost(prev, cp);
        prev = cp;
    }
    res.segment_means.push_back(cost.mean(prev, s.size()));
    sse += cost(prev, s.size());
    res.total_cost = sse + penalty * static_cast<double>(res.changepoints.size());
    return res;
}

} // namespace

ChangepointResult pelt_mean_shift(const ReturnSeries& s, double penalty) {
    const std::size_t n = s.size();
    if (n < 2) throw InvalidInput("pelt_mean_shift: need at least 2 observations");
    if (!(penalty > 0.0)) throw InvalidInput("pelt_mean_shift: penalty must be > 0");

    const SegmentCost cost(s.values);
    const double inf = std::numeric_limits<double>::infinity();
    std::vector<double> f(n + 1, inf);
    std::vector<std::size_t> prev(n + 1, 0);
    f[0] = -penalty;

    std::vector<std::size_t> candidates{0};
    std::vector<std::size_t> keep;
    for (std::size_t t = 1; t <= n; ++t) {
        double best = inf;
        std::size_t best_tau = 0;
        for (std::size_t tau : candidates) {
            const double v = f[tau] + cost(tau, t) + penalty;
            if (v < best) {
                best = v;
                best_tau = tau;
            }
        }
        f[t] = best;
        prev[t] = best_tau;

        // PELT prune: tau can never be optimal again once
        // f[tau] + cost(tau, t) already exceeds f[t].
        keep.clear();
        for (std::size_t tau : candidates)
            if (f[tau] + cost(tau, t) <= f[t]) keep.push_back(tau);
        keep.push_back(t);
        candidates.swap(keep);
    }

    std::vector<std::size_t> cps;
    for (std::size_t t = n; prev[t] > 0; t = prev[t]) cps.push_back(prev[t]);
    std::reverse(cps.begin(), cps.end());
    return assemble(s, cost, std::move(cps), penalty);
}

double default_penalty(const ReturnSeries& s) {
    const double sd = sample_std(s.values);
    // floor keeps degenerate (constant) series usable: any positive
    // penalty yields zero changepoints there
    return std::max(2.0 * sd * sd * std::log(static_cast<double>(s.size())), 1e-12);
}

ChangepointResult single_split(const ReturnSeries& s) {
    const std::size_t n = s.size();
    if (n < 2) throw InvalidInput("single_split: need at least 2 observations");
    const SegmentCost cost(s.values);
    double best = std::numeric_limits<double>::infinity();
    std::size_t best_t = 1;
    for (std::size_t t = 1; t < n; ++t) {
        const double v = cost(0, t) + cost(t, n);
        if (v < best) {
            best = v;
            best_t = t;
        }
    }
    return assemble(s, cost, {best_t}, 0.0);
}

} // namespace topovol
