#ifndef TOPOVOL_SERIES_HPP
#define TOPOVOL_SERIES_HPP

#include "topovol/date.hpp"

#include <cstddef>
#include <string>
#include <vector>

namespace topovol {

// Daily scalar series (prices, log returns, derived statistics).
// Timestamps are strictly increasing and values are finite; ingestion is
// responsible for dropping bad rows before construction.
struct ReturnSeries {
    std::vector<Date> dates;
    std::vector<double> values;
    std::string name;

    std::size_t size() const { return values.size(); }
    bool empty() const { return values.empty(); }

    // Throws InvalidInput if lengths differ, dates are not strictly
    // increasing, or a value is non-finite.
    void check_invariants() const;
};

ReturnSeries make_series(std::vector<double> values, Date start,
                         std::string name = "");

// Fear & Greed style sentiment: integer values in [0,100] plus optional
// per-observation regime labels carried through from the source.
struct SentimentSeries {
    std::vector<Date> dates;
    std::vector<double> values;
    std::vector<std::string> labels; // empty or same length as values
    std::size_t size() const { return values.size(); }
};

// Numeric regime bins applied when the source carries no labels.
// Thresholds follow the index provider's published convention.
struct SentimentBins {
    int fear_max = 24;     // 0..fear_max            -> Extreme Fear
    int neutral_min = 45;  // fear_max+1..neutral_min - 1 -> Fear
    int neutral_max = 54;  //                         -> Neutral
    int greed_max = 74;    // neutral_max+1..greed_max -> Greed, above -> Extreme Greed
};

struct RegressionResult {
    std::vector<double> coefficients;      // beta0 (intercept) first
    std::vector<std::string> covariate_names; // aligned with coefficients
    ReturnSeries residuals;
    double r_squared = 0.0;
    std::size_t rolling_window = 0; // L, when produced by residualize_l1
};

struct ACFResult {
    std::vector<double> values; // index = lag, values[0] == 1
    double confidence_halfwidth = 0.0; // 1.96 / sqrt(n)
    std::size_t max_lag() const { return values.size() - 1; }
};

enum class RollingStat { mean, stddev };

// --- operations -----------------------------------------------------------

// value at t = ln(p_t / p_{t-1}); output dated at the later observation.
ReturnSeries log_returns(const ReturnSeries& prices);

// Mean 0, sample (n-1) standard deviation 1.
ReturnSeries standardize(const ReturnSeries& s);

double sample_mean(const std::vector<double>& v);
double sample_std(const std::vector<double>& v); // n-1 denominator

// Trailing-window statistic indexed by window end date.
ReturnSeries rolling_stat(const ReturnSeries& s, std::size_t window,
                          RollingStat kind);

// Pearson correlation over trailing windows after inner-joining a and b.
// Windows with zero variance on either side are dropped (undefined
// correlation is never fabricated); dropped_windows reports how many.
ReturnSeries rolling_correlation(const ReturnSeries& a, const ReturnSeries& b,
                                 std::size_t window,
                                 std::size_t* dropped_windows = nullptr);

// Biased autocorrelation estimator (full-sample denominator).
ACFResult acf(const ReturnSeries& s, std::size_t max_lag);

// OLS with intercept on date-aligned covariates, solved by column-pivoted
// QR. Rank deficiency raises CollinearityError naming the columns.
RegressionResult ols_fit(const ReturnSeries& y,
                         const std::vector<ReturnSeries>& covariates);

// Regression of the landscape-norm series on rolling mean volatility,
// rolling mean sentiment and rolling sentiment dispersion (window L).
RegressionResult residualize_l1(const ReturnSeries& l1,
                                const ReturnSeries& sigma,
                                const SentimentSeries& sentiment,
                                std::size_t L);

// Fills in regime labels: source labels pass through verbatim, otherwise
// the numeric bins apply.
SentimentSeries classify_sentiment(const SentimentSeries& s,
                                   const SentimentBins& bins = {});

std::string sentiment_label(double value, const SentimentBins& bins = {});

// Inner join on calendar dates. Outputs share one date vector; the number
// of dates dropped from either input is reported when requested.
void inner_join(const ReturnSeries& a, const ReturnSeries& b,
                std::vector<Date>& dates, std::vector<double>& va,
                std::vector<double>& vb, std::size_t* dropped = nullptr);

} // namespace topovol

#endif
