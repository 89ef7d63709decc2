#include "topovol/errors.hpp"
#include "topovol/series.hpp"
#include "test_helpers.hpp"

#include <doctest.h>

#include <cmath>
#include <random>

using namespace topovol;
using testing::gaussian_vector;
using testing::mk;

TEST_CASE("log_returns basics") {
    auto r = log_returns(mk({100.0, 100.0}));
    REQUIRE(r.size() == 1);
    CHECK(r.values[0] == doctest::Approx(0.0).epsilon(1e-15));

    r = log_returns(mk({100.0, 110.0}));
    CHECK(r.values[0] == doctest::Approx(std::log(1.1)).epsilon(1e-12));
    CHECK(r.dates[0] == Date::parse("2020-01-02")); // dated at the later price

    CHECK_THROWS_WITH_AS(log_returns(mk({100.0})),
                         doctest::Contains("insufficient observations"), InvalidInput);
    CHECK_THROWS_WITH_AS(log_returns(mk({100.0, -1.0, 90.0})),
                         doctest::Contains("index 1"), InvalidInput);
    CHECK(log_returns(mk({5, 6, 7, 8, 9, 10, 11, 12, 13, 14})).size() == 9);
}

TEST_CASE("standardize") {
    auto s = standardize(mk({1.0, 2.0, 3.0}));
    CHECK(s.values[0] == doctest::Approx(-1.0).epsilon(1e-14));
    CHECK(s.values[1] == doctest::Approx(0.0).epsilon(1e-14));
    CHECK(s.values[2] == doctest::Approx(1.0).epsilon(1e-14));

    CHECK_THROWS_WITH_AS(standardize(mk({5.0, 5.0, 5.0})),
                         doctest::Contains("zero variance"), ZeroVariance);

    SUBCASE("mean 0 and sd 1 on random inputs, idempotent") {
        std::mt19937_64 rng(11);
        std::uniform_real_distribution<double> u(-5.0, 5.0);
        for (int t = 0; t < 20; ++t) {
            std::vector<double> v(50);
            for (auto& x : v) x = u(rng);
            auto z = standardize(mk(v));
            CHECK(std::abs(sample_mean(z.values)) < 1e-12);
            CHECK(std::abs(sample_std(z.values) - 1.0) < 1e-12);
            auto zz = standardize(z);
            for (std::size_t i = 0; i < z.size(); ++i)
                CHECK(zz.values[i] == doctest::Approx(z.values[i]).epsilon(1e-12));
        }
    }
}

TEST_CASE("rolling statistics") {
    auto m = rolling_stat(mk({1.0, 2.0, 3.0}), 2, RollingStat::mean);
    REQUIRE(m.size() == 2);
    CHECK(m.values[0] == 1.5);
    CHECK(m.values[1] == 2.5);
    CHECK(m.dates[0] == Date::parse("2020-01-02")); // indexed by window end

    auto sd = rolling_stat(mk({1.0, 1.0, 1.0, 1.0}), 2, RollingStat::stddev);
    CHECK(sd.values == std::vector<double>{0.0, 0.0, 0.0});

    sd = rolling_stat(mk({0.0, 2.0}), 2, RollingStat::stddev);
    CHECK(sd.values[0] == doctest::Approx(std::sqrt(2.0)).epsilon(1e-14));

    CHECK_THROWS_AS(rolling_stat(mk({1.0, 2.0}), 3, RollingStat::mean), InvalidInput);
}

TEST_CASE("rolling correlation") {
    auto a = mk(gaussian_vector(60, 3));
    SUBCASE("self correlation is one, negation is minus one") {
        auto r = rolling_correlation(a, a, 20);
        REQUIRE(r.size() == 41);
        for (double v : r.values) CHECK(v == doctest::Approx(1.0).epsilon(1e-12));

        ReturnSeries neg = a;
        for (auto& v : neg.values) v = -v;
        r = rolling_correlation(a, neg, 20);
        for (double v : r.values) CHECK(v == doctest::Approx(-1.0).epsilon(1e-12));
    }
    SUBCASE("constant shift invariance") {
        ReturnSeries shifted = a;
        for (auto& v : shifted.values) v += 7.5;
        auto r = rolling_correlation(a, shifted, 15);
        for (double v : r.values) CHECK(v == doctest::Approx(1.0).epsilon(1e-12));
    }
    SUBCASE("window larger than the joined range") {
        auto b = mk(gaussian_vector(60, 4));
        CHECK_THROWS_AS(rolling_correlation(a, b, 61), InvalidInput);
    }
    SUBCASE("zero-variance window goes missing, not fabricated") {
        std::vector<double> v = gaussian_vector(30, 5);
        for (int i = 5; i < 12; ++i) v[i] = 4.0; // constant stretch
        auto b = mk(gaussian_vector(30, 6));
        std::size_t dropped = 0;
        auto r = rolling_correlation(mk(v), b, 7, &dropped);
        CHECK(dropped == 1); // exactly the all-constant window
        CHECK(r.size() == 30 - 7 + 1 - dropped);
        // the anchor of the degenerate window is absent
        for (const auto& d : r.dates) CHECK(d != Date::parse("2020-01-12"));
    }
}

TEST_CASE("acf") {
    SUBCASE("lag zero is exactly one") {
        auto r = acf(mk(gaussian_vector(100, 8)), 10);
        CHECK(r.values[0] == 1.0);
        CHECK(r.confidence_halfwidth == doctest::Approx(0.196).epsilon(1e-3));
    }
    SUBCASE("alternating series, lag one") {
        auto r = acf(mk({1.0, -1.0, 1.0, -1.0}), 1);
        CHECK(r.values[1] == doctest::Approx(-0.75).epsilon(1e-15));
    }
    SUBCASE("matches brute-force double loop") {
        auto s = mk(gaussian_vector(80, 21));
        auto r = acf(s, 15);
        const double mean = sample_mean(s.values);
        double denom = 0.0;
        for (double v : s.values) denom += (v - mean) * (v - mean);
        for (std::size_t k = 0; k <= 15; ++k) {
            double num = 0.0;
            for (std::size_t t = 0; t + k < s.size(); ++t)
                num += (s.values[t] - mean) * (s.values[t + k] - mean);
            CHECK(std::abs(r.values[k] - num / denom) < 1e-12);
        }
    }
    SUBCASE("white noise stays inside the band") {
        auto r = acf(mk(gaussian_vector(1000, 42)), 20);
        int inside = 0;
        for (std::size_t k = 1; k <= 20; ++k)
            if (std::abs(r.values[k]) < r.confidence_halfwidth) ++inside;
        CHECK(inside >= 18); // >= 90% of lags
    }
    CHECK_THROWS_AS(acf(mk({2.0, 2.0, 2.0}), 1), ZeroVariance);
    CHECK_THROWS_AS(acf(mk({1.0, 2.0}), 2), InvalidInput);
}

TEST_CASE("ols_fit") {
    SUBCASE("exact line") {
        auto x = mk(gaussian_vector(40, 2), "2020-01-01", "x");
        ReturnSeries y = x;
        y.name = "y";
        for (std::size_t i = 0; i < y.size(); ++i) y.values[i] = 3.0 + 2.0 * x.values[i];
        auto fit = ols_fit(y, {x});
        CHECK(fit.coefficients[0] == doctest::Approx(3.0).epsilon(1e-10));
        CHECK(fit.coefficients[1] == doctest::Approx(2.0).epsilon(1e-10));
        for (double r : fit.residuals.values) CHECK(std::abs(r) < 1e-10);
        CHECK(fit.r_squared == doctest::Approx(1.0).epsilon(1e-10));
    }
    SUBCASE("duplicated constant covariate is collinear") {
        auto y = mk(gaussian_vector(30, 3), "2020-01-01", "y");
        auto c1 = mk(std::vector<double>(30, 1.5), "2020-01-01", "const_a");
        auto c2 = mk(std::vector<double>(30, 1.5), "2020-01-01", "const_b");
        CHECK_THROWS_AS(ols_fit(y, {c1, c2}), CollinearityError);
        try {
            ols_fit(y, {c1, c2});
        } catch (const CollinearityError& e) {
            CHECK(!e.offending_columns.empty());
        }
    }
    SUBCASE("recovers known coefficients under noise") {
        const std::size_t n = 1000;
        auto a = mk(gaussian_vector(n, 10), "2020-01-01", "a");
        auto b = mk(gaussian_vector(n, 11), "2020-01-01", "b");
        auto c = mk(gaussian_vector(n, 12), "2020-01-01", "c");
        auto noise = gaussian_vector(n, 13, 0.1); // variance 0.01
        ReturnSeries y = a;
        y.name = "y";
        for (std::size_t i = 0; i < n; ++i)
            y.values[i] = 1.0 + 0.5 * a.values[i] + 0.2 * b.values[i] -
                          0.1 * c.values[i] + noise[i];
        auto fit = ols_fit(y, {a, b, c});
        CHECK(std::abs(fit.coefficients[0] - 1.0) < 0.05);
        CHECK(std::abs(fit.coefficients[1] - 0.5) < 0.05);
        CHECK(std::abs(fit.coefficients[2] - 0.2) < 0.05);
        CHECK(std::abs(fit.coefficients[3] + 0.1) < 0.05);
    }
    SUBCASE("residuals orthogonal to the design") {
        auto a = mk(gaussian_vector(200, 30), "2020-01-01", "a");
        auto b = mk(gaussian_vector(200, 31), "2020-01-01", "b");
        auto y = mk(gaussian_vector(200, 32), "2020-01-01", "y");
        auto fit = ols_fit(y, {a, b});
        double norm_x = 0.0, norm_y = 0.0;
        for (std::size_t i = 0; i < y.size(); ++i) {
            norm_x += 1.0 + a.values[i] * a.values[i] + b.values[i] * b.values[i];
            norm_y += y.values[i] * y.values[i];
        }
        norm_x = std::sqrt(norm_x);
        norm_y = std::sqrt(norm_y);
        double dot_const = 0.0, dot_a = 0.0, dot_b = 0.0;
        for (std::size_t i = 0; i < y.size(); ++i) {
            dot_const += fit.residuals.values[i];
            dot_a += fit.residuals.values[i] * a.values[i];
            dot_b += fit.residuals.values[i] * b.values[i];
        }
        const double bound = 1e-8 * norm_x * norm_y;
        CHECK(std::abs(dot_const) < bound);
        CHECK(std::abs(dot_a) < bound);
        CHECK(std::abs(dot_b) < bound);
        CHECK(std::abs(sample_mean(fit.residuals.values)) < 1e-10 * norm_y);
    }
}

TEST_CASE("residualize_l1") {
    const std::size_t n = 120;
    const std::size_t L = 10;
    auto sigma = mk(gaussian_vector(n, 40), "2020-01-01", "sigma");
    SentimentSeries sent;
    {
        std::mt19937_64 rng(41);
        std::uniform_int_distribution<int> u(0, 100);
        for (std::size_t i = 0; i < n; ++i) {
            sent.dates.push_back(Date::parse("2020-01-01") + static_cast<int>(i));
            sent.values.push_back(static_cast<double>(u(rng)));
        }
    }
    SUBCASE("exactly linear target leaves no residual") {
        ReturnSeries f;
        f.dates = sent.dates;
        f.values = sent.values;
        auto sigma_bar = rolling_stat(sigma, L, RollingStat::mean);
        auto f_bar = rolling_stat(f, L, RollingStat::mean);
        auto s_t = rolling_stat(f, L, RollingStat::stddev);
        ReturnSeries l1 = sigma_bar;
        for (std::size_t i = 0; i < l1.size(); ++i)
            l1.values[i] =
                2.0 + 1.5 * sigma_bar.values[i] + 0.3 * f_bar.values[i] - 0.7 * s_t.values[i];
        auto fit = residualize_l1(l1, sigma, sent, L);
        CHECK(fit.rolling_window == L);
        for (double r : fit.residuals.values) CHECK(std::abs(r) < 1e-9);
    }
    SUBCASE("window equal to the series length is rejected") {
        auto l1 = mk(gaussian_vector(n, 42), "2020-01-01", "l1");
        CHECK_THROWS_AS(residualize_l1(l1, sigma, sent, n), InvalidInput);
    }
}

TEST_CASE("sentiment classification") {
    SentimentSeries s;
    s.dates = {Date::parse("2021-01-01"), Date::parse("2021-01-02"),
               Date::parse("2021-01-03")};
    s.values = {0.0, 100.0, 50.0};
    auto c = classify_sentiment(s);
    CHECK(c.labels[0] == "Extreme Fear");
    CHECK(c.labels[1] == "Extreme Greed");
    CHECK(c.labels[2] == "Neutral");

    SUBCASE("source labels pass through verbatim") {
        s.labels = {"Greed", "Greed", "Greed"};
        c = classify_sentiment(s);
        CHECK(c.labels[0] == "Greed");
        CHECK(c.labels[2] == "Greed");
    }
    SUBCASE("bin edges") {
        CHECK(sentiment_label(24) == "Extreme Fear");
        CHECK(sentiment_label(25) == "Fear");
        CHECK(sentiment_label(44) == "Fear");
        CHECK(sentiment_label(45) == "Neutral");
        CHECK(sentiment_label(54) == "Neutral");
        CHECK(sentiment_label(55) == "Greed");
        CHECK(sentiment_label(74) == "Greed");
        CHECK(sentiment_label(75) == "Extreme Greed");
    }
    CHECK_THROWS_AS(sentiment_label(250.0), InvalidInput);
}

TEST_CASE("inner join is symmetric") {
    ReturnSeries a = mk(gaussian_vector(20, 50), "2020-01-01");
    ReturnSeries b = mk(gaussian_vector(15, 51), "2020-01-08");
    std::vector<Date> d1, d2;
    std::vector<double> x1, y1, x2, y2;
    inner_join(a, b, d1, x1, y1);
    inner_join(b, a, d2, x2, y2);
    CHECK(d1 == d2);
    CHECK(x1 == y2);
    CHECK(y1 == x2);
}
