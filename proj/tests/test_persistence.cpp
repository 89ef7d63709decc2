#include "topovol/errors.hpp"
#include "topovol/persistence.hpp"
#include "oracles.hpp"
#include "test_helpers.hpp"

#include <doctest.h>

#include <cmath>
#include <numeric>
#include <random>
#include <sstream>

using namespace topovol;
using testing::gaussian_cloud;

namespace {

PointCloud cloud_from(std::vector<std::vector<double>> pts) {
    PointCloud pc;
    pc.dim = pts[0].size();
    for (const auto& p : pts) pc.coords.insert(pc.coords.end(), p.begin(), p.end());
    return pc;
}

bool diagrams_equal(const PersistenceDiagram& a, const PersistenceDiagram& b) {
    if (a.pairs.size() != b.pairs.size()) return false;
    for (std::size_t i = 0; i < a.pairs.size(); ++i)
        if (a.pairs[i].birth != b.pairs[i].birth || a.pairs[i].death != b.pairs[i].death)
            return false;
    return a.clamped_count == b.clamped_count;
}

} // namespace

TEST_CASE("pairwise distances") {
    auto dm = pairwise_distances(cloud_from({{0, 0}, {3, 4}}));
    CHECK(dm.at(0, 1) == doctest::Approx(5.0).epsilon(1e-15));
    CHECK(dm.at(0, 0) == 0.0);

    auto same = pairwise_distances(cloud_from({{1, 2}, {1, 2}, {1, 2}}));
    for (std::size_t i = 0; i < 3; ++i)
        for (std::size_t j = 0; j < 3; ++j) CHECK(same.at(i, j) == 0.0);

    auto rnd = pairwise_distances(gaussian_cloud(20, 3, 5));
    for (std::size_t i = 0; i < 20; ++i)
        for (std::size_t j = 0; j < 20; ++j) CHECK(rnd.at(i, j) == rnd.at(j, i));
}

TEST_CASE("build_rips content and order") {
    // equilateral triple at distance 1
    DistanceMatrix dm;
    dm.n = 3;
    dm.d = {0, 1, 1, 1, 0, 1, 1, 1, 0};

    auto fc = build_rips(dm, 2.0);
    std::size_t nv = 0, ne = 0, nt = 0;
    for (const auto& s : fc.simplices) {
        if (s.dim == 0) ++nv;
        if (s.dim == 1) { ++ne; CHECK(s.value == 1.0); }
        if (s.dim == 2) { ++nt; CHECK(s.value == 1.0); }
    }
    CHECK(nv == 3);
    CHECK(ne == 3);
    CHECK(nt == 1);

    auto sparse = build_rips(dm, 0.5);
    CHECK(sparse.simplices.size() == 3); // vertices only

    CHECK_THROWS_AS(build_rips(dm, 0.0), InvalidInput);

    SUBCASE("face monotonicity and sort order on a random cloud") {
        auto cloud = gaussian_cloud(25, 3, 7);
        auto d2 = pairwise_distances(cloud);
        auto f2 = build_rips(d2, d2.diameter());
        for (std::size_t i = 1; i < f2.simplices.size(); ++i) {
            const auto& a = f2.simplices[i - 1];
            const auto& b = f2.simplices[i];
            const bool ordered = a.value < b.value ||
                                 (a.value == b.value &&
                                  (a.dim < b.dim || (a.dim == b.dim && a.v < b.v)));
            CHECK(ordered);
        }
        for (const auto& s : f2.simplices) {
            if (s.dim == 2) {
                const double expect = std::max(
                    {d2.at(s.v[0], s.v[1]), d2.at(s.v[0], s.v[2]), d2.at(s.v[1], s.v[2])});
                CHECK(s.value == expect); // triangle value is its max edge
                CHECK(s.value >= d2.at(s.v[0], s.v[1]));
            }
        }
    }
}

TEST_CASE("reduce_h1 small geometries") {
    SUBCASE("equilateral triangle has no surviving loop") {
        DistanceMatrix dm;
        dm.n = 3;
        dm.d = {0, 1, 1, 1, 0, 1, 1, 1, 0};
        auto diag = reduce_h1(build_rips(dm, 2.0));
        CHECK(diag.pairs.empty());
    }
    SUBCASE("unit square gives exactly (1, sqrt 2)") {
        auto cloud = cloud_from({{0, 0}, {1, 0}, {1, 1}, {0, 1}});
        auto diag = diagram_for_cloud(cloud);
        REQUIRE(diag.pairs.size() == 1);
        CHECK(std::abs(diag.pairs[0].birth - 1.0) < 1e-9);
        CHECK(std::abs(diag.pairs[0].death - std::sqrt(2.0)) < 1e-9);
        CHECK(diag.clamped_count == 0);
    }
    SUBCASE("collinear points have trivial H1") {
        auto cloud = cloud_from({{0, 0}, {1, 0}, {2, 0}, {3.5, 0}, {5, 0}});
        CHECK(diagram_for_cloud(cloud).pairs.empty());
    }
}

TEST_CASE("circle geometry") {
    PointCloud pc;
    pc.dim = 2;
    for (int i = 0; i < 50; ++i) {
        const double a = 2.0 * M_PI * i / 50.0;
        pc.coords.push_back(std::cos(a));
        pc.coords.push_back(std::sin(a));
    }
    auto diag = diagram_for_cloud(pc);
    std::size_t dominant = 0;
    for (const auto& p : diag.pairs) {
        if (p.death - p.birth > 0.5) ++dominant;
        else CHECK(p.death - p.birth < 0.1);
    }
    CHECK(dominant == 1);
}

TEST_CASE("optimized reduction equals the naive oracle") {
    std::mt19937_64 rng(2024);
    for (int trial = 0; trial < 40; ++trial) {
        const std::size_t dim = 2 + trial % 3;
        const std::size_t npts = 5 + rng() % 30;
        auto cloud = gaussian_cloud(npts, dim, rng());
        auto dm = pairwise_distances(cloud);
        const double diam = dm.diameter();
        auto fc = build_rips(dm, diam);
        CHECK(diagrams_equal(reduce_h1(fc), oracle::naive_reduction(fc, 1)));
        CHECK(diagrams_equal(reduce_h0(fc), oracle::naive_reduction(fc, 0)));

        // truncated scale exercises the clamped-essential path
        auto fc_half = build_rips(dm, 0.5 * diam);
        CHECK(diagrams_equal(reduce_h1(fc_half), oracle::naive_reduction(fc_half, 1)));
        CHECK(diagrams_equal(reduce_h0(fc_half), oracle::naive_reduction(fc_half, 0)));
    }
}

TEST_CASE("diagram equals oracle on a seeded Gaussian cloud in R4") {
    auto cloud = gaussian_cloud(50, 4, 99);
    auto dm = pairwise_distances(cloud);
    auto fc = build_rips(dm, dm.diameter());
    CHECK(diagrams_equal(diagram_for_cloud(cloud), oracle::naive_reduction(fc, 1)));
}

TEST_CASE("diagram invariances") {
    auto base = gaussian_cloud(30, 3, 123);
    auto ref = diagram_for_cloud(base);

    SUBCASE("point relabeling") {
        std::vector<std::size_t> perm(30);
        std::iota(perm.begin(), perm.end(), std::size_t{0});
        std::mt19937_64 rng(5);
        std::shuffle(perm.begin(), perm.end(), rng);
        PointCloud shuffled;
        shuffled.dim = base.dim;
        for (std::size_t i : perm)
            shuffled.coords.insert(shuffled.coords.end(), base.point(i),
                                   base.point(i) + base.dim);
        auto diag = diagram_for_cloud(shuffled);
        REQUIRE(diag.pairs.size() == ref.pairs.size());
        for (std::size_t i = 0; i < diag.pairs.size(); ++i) {
            CHECK(diag.pairs[i].birth == doctest::Approx(ref.pairs[i].birth).epsilon(1e-12));
            CHECK(diag.pairs[i].death == doctest::Approx(ref.pairs[i].death).epsilon(1e-12));
        }
    }
    SUBCASE("global scaling") {
        const double c = 3.7;
        PointCloud scaled = base;
        for (auto& x : scaled.coords) x *= c;
        auto diag = diagram_for_cloud(scaled);
        REQUIRE(diag.pairs.size() == ref.pairs.size());
        for (std::size_t i = 0; i < diag.pairs.size(); ++i) {
            CHECK(std::abs(diag.pairs[i].birth - c * ref.pairs[i].birth) <
                  1e-9 * std::max(1.0, c * ref.pairs[i].birth));
            CHECK(std::abs(diag.pairs[i].death - c * ref.pairs[i].death) <
                  1e-9 * std::max(1.0, c * ref.pairs[i].death));
        }
    }
    SUBCASE("duplicated point changes nothing") {
        PointCloud dup = base;
        dup.coords.insert(dup.coords.end(), base.point(4), base.point(4) + base.dim);
        auto diag = diagram_for_cloud(dup);
        CHECK(diagrams_equal(diag, ref));
    }
}

TEST_CASE("degenerate and small clouds") {
    CHECK_THROWS_AS(diagram_for_cloud(cloud_from({{0, 0}, {1, 1}})), InvalidInput);
    auto diag = diagram_for_cloud(cloud_from({{2, 2}, {2, 2}, {2, 2}}));
    CHECK(diag.pairs.empty()); // zero diameter
}

TEST_CASE("diagram dump format") {
    PersistenceDiagram d;
    d.pairs = {{1.0, 2.5, false}, {0.25, 0.75, false}};
    std::sort(d.pairs.begin(), d.pairs.end(),
              [](const DiagramPair& a, const DiagramPair& b) { return a.birth < b.birth; });
    std::ostringstream os;
    dump_diagram(os, d);
    CHECK(os.str() == "0.25\t0.75\n1\t2.5\n");
}
