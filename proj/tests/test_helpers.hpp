#ifndef TOPOVOL_TESTS_HELPERS_HPP
#define TOPOVOL_TESTS_HELPERS_HPP

#include "topovol/embedding.hpp"
#include "topovol/series.hpp"

#include <random>
#include <vector>

namespace topovol::testing {

inline ReturnSeries mk(std::vector<double> values, const char* start = "2020-01-01",
                       const char* name = "test") {
    return make_series(std::move(values), Date::parse(start), name);
}

inline std::vector<double> gaussian_vector(std::size_t n, std::uint64_t seed,
                                           double sd = 1.0) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> g(0.0, sd);
    std::vector<double> v(n);
    for (auto& x : v) x = g(rng);
    return v;
}

inline PointCloud gaussian_cloud(std::size_t points, std::size_t dim,
                                 std::uint64_t seed) {
    PointCloud pc;
    pc.dim = dim;
    pc.coords = gaussian_vector(points * dim, seed);
    return pc;
}

} // namespace topovol::testing

#endif
