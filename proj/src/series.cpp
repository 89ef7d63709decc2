#include "topovol/series.hpp"
#include "topovol/errors.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <numeric>

namespace topovol {

void ReturnSeries::check_invariants() const {
    if (dates.size() != values.size())
        throw InvalidInput("series '" + name + "': timestamp/value length mismatch");
    for (std::size_t i = 1; i < dates.size(); ++i)
        if (!(dates[i - 1] < dates[i]))
            throw InvalidInput("series '" + name + "': timestamps not strictly increasing at " +
                               dates[i].to_string());
    for (double v : values)
        if (!std::isfinite(v))
            throw InvalidInput("series '" + name + "': non-finite value");
}

ReturnSeries make_series(std::vector<double> values, Date start, std::string name) {
    ReturnSeries s;
    s.values = std::move(values);
    s.dates.reserve(s.values.size());
    for (std::size_t i = 0; i < s.values.size(); ++i)
        s.dates.push_back(start + static_cast<int>(i));
    s.name = std::move(name);
    return s;
}

double sample_mean(const std::vector<double>& v) {
    if (v.empty()) throw InvalidInput("mean of empty vector");
    return std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
}

double sample_std(const std::vector<double>& v) {
    if (v.size() < 2) throw InvalidInput("sample std needs at least 2 observations");
    const double m = sample_mean(v);
    double ss = 0.0;
    for (double x : v) ss += (x - m) * (x - m);
    return std::sqrt(ss / static_cast<double>(v.size() - 1));
}

ReturnSeries log_returns(const ReturnSeries& prices) {
    if (prices.size() < 2)
        throw InvalidInput("insufficient observations: log returns need at least 2 prices");
    for (std::size_t i = 0; i < prices.size(); ++i)
        if (!(prices.values[i] > 0.0))
            throw InvalidInput("non-positive price at index " + std::to_string(i) +
                               " (" + prices.dates[i].to_string() + ")");
    ReturnSeries out;
    out.name = prices.name.empty() ? "log_returns" : prices.name + "_logret";
    out.dates.assign(prices.dates.begin() + 1, prices.dates.end());
    out.values.resize(prices.size() - 1);
    for (std::size_t t = 1; t < prices.size(); ++t)
        out.values[t - 1] = std::log(prices.values[t] / prices.values[t - 1]);
    return out;
}

ReturnSeries standardize(const ReturnSeries& s) {
    if (s.size() < 2)
        throw InvalidInput("standardize needs at least 2 observations");
    const double m = sample_mean(s.values);
    const double sd = sample_std(s.values);
    if (sd <= 0.0)
        throw ZeroVariance("zero variance: cannot standardize constant series '" + s.name + "'");
    ReturnSeries out = s;
    for (double& v : out.values) v = (v - m) / sd;
    return out;
}

ReturnSeries rolling_stat(const ReturnSeries& s, std::size_t window, RollingStat kind) {
    if (window == 0) throw InvalidInput("rolling window must be positive");
    if (window > s.size())
        throw InvalidInput("rolling window " + std::to_string(window) +
                           " exceeds series length " + std::to_string(s.size()));
    if (kind == RollingStat::stddev && window < 2)
        throw InvalidInput("rolling std needs window >= 2");
    ReturnSeries out;
    out.name = s.name + (kind == RollingStat::mean ? "_rollmean" : "_rollstd");
    const std::size_t n_out = s.size() - window + 1;
    out.dates.assign(s.dates.begin() + (window - 1), s.dates.end());
    out.values.resize(n_out);
    for (std::size_t i = 0; i < n_out; ++i) {
        const double* w = s.values.data() + i;
        double m = 0.0;
        for (std::size_t j = 0; j < window; ++j) m += w[j];
        m /= static_cast<double>(window);
        if (kind == RollingStat::mean) {
            out.values[i] = m;
        } else {
            double ss = 0.0;
            for (std::size_t j = 0; j < window; ++j) ss += (w[j] - m) * (w[j] - m);
            out.values[i] = std::sqrt(ss / static_cast<double>(window - 1));
        }
    }
    return out;
}

void inner_join(const ReturnSeries& a, const ReturnSeries& b, std::vector<Date>& dates,
                std::vector<double>& va, std::vector<double>& vb, std::size_t* dropped) {
    dates.clear();
    va.clear();
    vb.clear();
    std::size_t i = 0, j = 0;
    while (i < a.size() && j < b.size()) {
        if (a.dates[i] < b.dates[j]) {
            ++i;
        } else if (b.dates[j] < a.dates[i]) {
            ++j;
        } else {
            dates.push_back(a.dates[i]);
            va.push_back(a.values[i]);
            vb.push_back(b.values[j]);
            ++i;
            ++j;
        }
    }
    if (dropped) *dropped = (a.size() - dates.size()) + (b.size() - dates.size());
}

ReturnSeries rolling_correlation(const ReturnSeries& a, const ReturnSeries& b,
                                 std::size_t window, std::size_t* dropped_windows) {
    std::vector<Date> dates;
    std::vector<double> va, vb;
    inner_join(a, b, dates, va, vb);
    if (window == 0 || window > dates.size())
        throw InvalidInput("rolling correlation window " + std::to_string(window) +
                           " exceeds joined length " + std::to_string(dates.size()));
    ReturnSeries out;
    out.name = "rolling_correlation";
    std::size_t dropped = 0;
    for (std::size_t i = 0; i + window <= dates.size(); ++i) {
        double ma = 0.0, mb = 0.0;
        for (std::size_t j = 0; j < window; ++j) {
            ma += va[i + j];
            mb += vb[i + j];
        }
        ma /= static_cast<double>(window);
        mb /= static_cast<double>(window);
        double saa = 0.0, sbb = 0.0, sab = 0.0;
        for (std::size_t j = 0; j < window; ++j) {
            const double da = va[i + j] - ma;
            const double db = vb[i + j] - mb;
            saa += da * da;
            sbb += db * db;
            sab += da * db;
        }
        if (saa <= 0.0 || sbb <= 0.0) {
            ++dropped; // correlation undefined in this window
            continue;
        }
        double r = sab / std::sqrt(saa * sbb);
        r = std::clamp(r, -1.0, 1.0); // guard rounding at |r| = 1
        out.dates.push_back(dates[i + window - 1]);
        out.values.push_back(r);
    }
    if (dropped_windows) *dropped_windows = dropped;
    return out;
}

ACFResult acf(const ReturnSeries& s, std::size_t max_lag) {
    const std::size_t n = s.size();
    if (max_lag >= n)
        throw InvalidInput("acf max_lag must be smaller than series length");
    const double m = sample_mean(s.values);
    double denom = 0.0;
    for (double v : s.values) denom += (v - m) * (v - m);
    if (denom <= 0.0) throw ZeroVariance("zero variance: acf undefined for constant series");
    ACFResult r;
    r.values.resize(max_lag + 1);
    for (std::size_t k = 0; k <= max_lag; ++k) {
        double num = 0.0;
        for (std::size_t t = 0; t + k < n; ++t)
            num += (s.values[t] - m) * (s.values[t + k] - m);
        r.values[k] = num / denom;
    }
    r.values[0] = 1.0;
    r.confidence_halfwidth = 1.96 / std::sqrt(static_cast<double>(n));
    return r;
}

RegressionResult ols_fit(const ReturnSeries& y, const std::vector<ReturnSeries>& covariates) {
    // Sequential inner join of the response with every covariate.
    std::vector<Date> dates = y.dates;
    std::vector<double> yv = y.values;
    std::vector<std::vector<double>> cols;
    for (const auto& c : covariates) {
        std::vector<Date> nd;
        std::vector<double> ny, nc;
        ReturnSeries cur;
        cur.dates = dates;
        cur.values = yv;
        inner_join(cur, c, nd, ny, nc);
        // Re-filter the covariate columns gathered so far onto the new index.
        std::vector<std::vector<double>> filtered(cols.size());
        std::size_t k = 0;
        for (std::size_t i = 0; i < dates.size() && k < nd.size(); ++i) {
            if (dates[i] == nd[k]) {
                for (std::size_t q = 0; q < cols.size(); ++q)
                    filtered[q].push_back(cols[q][i]);
                ++k;
            }
        }
        dates = std::move(nd);
        yv = std::move(ny);
        cols = std::move(filtered);
        cols.push_back(std::move(nc));
    }
    const std::size_t n = dates.size();
    const std::size_t p = cols.size() + 1; // + intercept
    if (n <= cols.size() + 1)
        throw InvalidInput("ols_fit: joined sample too short (" + std::to_string(n) +
                           " rows for " + std::to_string(p) + " coefficients)");

    std::vector<std::string> names;
    names.push_back("intercept");
    for (std::size_t j = 0; j < covariates.size(); ++j)
        names.push_back(covariates[j].name.empty() ? "x" + std::to_string(j + 1)
                                                   : covariates[j].name);

    Eigen::MatrixXd X(n, p);
    Eigen::VectorXd Y(n);
    for (std::size_t i = 0; i < n; ++i) {
        X(i, 0) = 1.0;
        for (std::size_t j = 0; j < cols.size(); ++j) X(i, j + 1) = cols[j][i];
        Y(i) = yv[i];
    }

    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(X);
    qr.setThreshold(1e-10);
    if (qr.rank() < static_cast<Eigen::Index>(p)) {
        // Pivots past the numerical rank identify the dependent columns.
        std::vector<std::string> bad;
        const auto& perm = qr.colsPermutation().indices();
        for (Eigen::Index k = qr.rank(); k < static_cast<Eigen::Index>(p); ++k)
            bad.push_back(names[static_cast<std::size_t>(perm(k))]);
        std::string msg = "collinear design columns:";
        for (const auto& b : bad) msg += " " + b;
        throw CollinearityError(msg, bad);
    }

    Eigen::VectorXd beta = qr.solve(Y);
    Eigen::VectorXd resid = Y - X * beta;

    RegressionResult res;
    res.coefficients.assign(beta.data(), beta.data() + p);
    res.covariate_names = std::move(names);
    res.residuals.dates = dates;
    res.residuals.values.assign(resid.data(), resid.data() + n);
    res.residuals.name = "residuals";
    const double ym = Y.mean();
    const double tss = (Y.array() - ym).square().sum();
    res.r_squared = tss > 0.0 ? 1.0 - resid.squaredNorm() / tss : 0.0;
    return res;
}

RegressionResult residualize_l1(const ReturnSeries& l1, const ReturnSeries& sigma,
                                const SentimentSeries& sentiment, std::size_t L) {
    if (L == 0) throw InvalidInput("residualization window must be positive");
    ReturnSeries f;
    f.dates = sentiment.dates;
    f.values = sentiment.values;
    f.name = "sentiment";
    if (sigma.size() < L + 1 || f.size() < L + 1)
        throw InvalidInput("residualization window " + std::to_string(L) +
                           " leaves no rolling output");

    ReturnSeries sigma_bar = rolling_stat(sigma, L, RollingStat::mean);
    sigma_bar.name = "sigma_bar";
    ReturnSeries f_bar = rolling_stat(f, L, RollingStat::mean);
    f_bar.name = "sentiment_bar";
    ReturnSeries s_t = rolling_stat(f, L, RollingStat::stddev);
    s_t.name = "sentiment_sd";

    RegressionResult res = ols_fit(l1, {sigma_bar, f_bar, s_t});
    res.rolling_window = L;
    return res;
}

std::string sentiment_label(double value, const SentimentBins& bins) {
    if (value < 0.0 || value > 100.0)
        throw InvalidInput("sentiment value " + std::to_string(value) + " outside [0,100]");
    const int v = static_cast<int>(std::llround(value));
    if (v <= bins.fear_max) return "Extreme Fear";
    if (v < bins.neutral_min) return "Fear";
    if (v <= bins.neutral_max) return "Neutral";
    if (v <= bins.greed_max) return "Greed";
    return "Extreme Greed";
}

SentimentSeries classify_sentiment(const SentimentSeries& s, const SentimentBins& bins) {
    SentimentSeries out = s;
    const bool have_labels = !s.labels.empty();
    if (have_labels && s.labels.size() != s.values.size())
        throw InvalidInput("sentiment labels length mismatch");
    out.labels.resize(s.values.size());
    for (std::size_t i = 0; i < s.values.size(); ++i) {
        if (have_labels && !s.labels[i].empty())
            out.labels[i] = s.labels[i]; // source labels pass through verbatim
        else
            out.labels[i] = sentiment_label(s.values[i], bins);
    }
    return out;
}

} // namespace topovol
