#ifndef TOPOVOL_PIPELINE_HPP
#define TOPOVOL_PIPELINE_HPP

#include "topovol/changepoint.hpp"
#include "topovol/config.hpp"
#include "topovol/ingest.hpp"
#include "topovol/landscape.hpp"
#include "topovol/surrogate.hpp"
#include "topovol/svmodel.hpp"

#include <string>
#include <utility>
#include <vector>

namespace topovol {

// Every stage creates cfg.out_dir if needed, writes its artifacts there
// (tables as CSV, reports as JSON, figures as SVG) plus the effective
// config, and returns its key results for in-process composition.

struct IngestOutputs {
    PriceIngest prices;
    SentimentIngest sentiment; // empty when no sentiment path configured
    bool have_sentiment = false;
};
IngestOutputs run_ingest(const AnalysisConfig& cfg);

struct TdaOutputs {
    LandscapeNormSeries norms;
    ReturnSeries log_ret;
    ReturnSeries std_returns;
};
TdaOutputs run_tda(const AnalysisConfig& cfg);

struct SvOutputs {
    SVParams params;
    std::vector<double> replicate_log_likelihoods;
    int best_replicate = 0;
    FilterOutput filtered;
};
SvOutputs run_sv(const AnalysisConfig& cfg);

// Requires l1_norms.csv and sv_filtered.csv in cfg.out_dir.
struct CompareOutputs {
    ReturnSeries correlation;
    ChangepointResult pelt;
    ChangepointResult dominant_split;
};
CompareOutputs run_compare(const AnalysisConfig& cfg);

// Requires l1_norms.csv in cfg.out_dir; regenerates the standardized
// return series from the price input for surrogate generation.
struct NullOutputs {
    std::vector<std::pair<NullEnvelope, ExceedanceReport>> results;
};
NullOutputs run_nulls(const AnalysisConfig& cfg);

// Full analysis: ingest, tda, sv, compare, nulls, sentiment-regime
// distribution, residualization ACF, manifest.
void run_report(const AnalysisConfig& cfg);

// --- artifact helpers (also used by tests) --------------------------------

LandscapeNormSeries read_l1_csv(const std::string& path);
ReturnSeries read_csv_column(const std::string& path, const std::string& column);
std::string file_digest_hex(const std::string& path);

// Scans the output directory (sorted names, manifest itself excluded) and
// writes manifest.json with per-file digests, the effective config and the
// seed.
void write_manifest(const AnalysisConfig& cfg);

struct RegimeRow {
    std::string regime;
    std::size_t count = 0;
    double median = 0.0, q1 = 0.0, q3 = 0.0;
    double lo_whisker = 0.0, hi_whisker = 0.0;
    std::size_t n_outliers = 0;
};
// Tukey box summary of L1 norms grouped by same-day sentiment regime.
std::vector<RegimeRow> regime_distribution(const LandscapeNormSeries& norms,
                                           const SentimentSeries& classified);

} // namespace topovol

#endif
