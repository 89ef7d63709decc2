// topovol: topological signatures of return series, validated against
// stochastic volatility and surrogate null models.

#include "topovol/pipeline.hpp"

#include <CLI11.hpp>

#include <iostream>
#include <optional>
#include <string>

namespace {

struct CliOverrides {
    std::optional<std::string> prices, sentiment, out, price_column, surrogate_kind;
    std::optional<std::uint64_t> seed;
    std::optional<std::size_t> m, d, window, stride, roll_window, resid_window,
        grid_size, imax, acf_max_lag;
    std::optional<int> surrogates, workers, sv_iterations, sv_replicates,
        sv_particles, sv_eval_particles, sv_evaluations;
    std::optional<double> penalty, sv_rw_sd, sv_cooling;
};

void add_common_flags(CLI::App* cmd, std::string& config_path, CliOverrides& ov) {
    cmd->add_option("--config", config_path, "flat key=value config file");
    cmd->add_option("--prices", ov.prices, "price CSV path");
    cmd->add_option("--sentiment", ov.sentiment, "sentiment JSON path");
    cmd->add_option("--out", ov.out, "output directory");
    cmd->add_option("--seed", ov.seed, "top-level 64-bit seed");
    cmd->add_option("--workers", ov.workers, "worker threads (0 = auto)");
    cmd->add_option("--m", ov.m, "embedding dimension");
    cmd->add_option("--d", ov.d, "embedding delay");
    cmd->add_option("--window", ov.window, "sliding window length (points)");
    cmd->add_option("--stride", ov.stride, "sliding window stride");
    cmd->add_option("--roll-window", ov.roll_window, "rolling correlation window (days)");
    cmd->add_option("--resid-window", ov.resid_window, "residualization window (days)");
    cmd->add_option("--imax", ov.imax, "landscape layers");
    cmd->add_option("--grid-size", ov.grid_size, "landscape grid nodes");
    cmd->add_option("--acf-max-lag", ov.acf_max_lag, "max lag of the residual ACF");
    cmd->add_option("--surrogates", ov.surrogates, "surrogate realizations per null");
    cmd->add_option("--surrogate-kind", ov.surrogate_kind,
                    "comma list of null kinds (shuffle,fft)");
    cmd->add_option("--penalty", ov.penalty, "changepoint penalty (<=0 = auto)");
    cmd->add_option("--price-column", ov.price_column, "price column (Close/Adj Close)");
    cmd->add_option("--sv-iterations", ov.sv_iterations, "IF2 iterations");
    cmd->add_option("--sv-replicates", ov.sv_replicates, "IF2 replicates");
    cmd->add_option("--sv-particles", ov.sv_particles, "IF2 estimation particles");
    cmd->add_option("--sv-eval-particles", ov.sv_eval_particles,
                    "likelihood evaluation particles");
    cmd->add_option("--sv-evaluations", ov.sv_evaluations,
                    "likelihood evaluations per replicate");
    cmd->add_option("--sv-rw-sd", ov.sv_rw_sd, "IF2 random-walk sd (estimation scale)");
    cmd->add_option("--sv-cooling", ov.sv_cooling, "IF2 cooling factor");
}

topovol::AnalysisConfig build_config(const std::string& config_path,
                                     const CliOverrides& ov) {
    topovol::AnalysisConfig cfg;
    if (!config_path.empty()) cfg = topovol::AnalysisConfig::from_file(config_path);
    // CLI overrides the file
    if (ov.prices) cfg.prices_path = *ov.prices;
    if (ov.sentiment) cfg.sentiment_path = *ov.sentiment;
    if (ov.out) cfg.out_dir = *ov.out;
    if (ov.seed) cfg.seed = *ov.seed;
    if (ov.workers) cfg.workers = *ov.workers;
    if (ov.m) cfg.embedding.dimension = *ov.m;
    if (ov.d) cfg.embedding.delay = *ov.d;
    if (ov.window) cfg.embedding.window = *ov.window;
    if (ov.stride) cfg.embedding.stride = *ov.stride;
    if (ov.roll_window) cfg.roll_window = *ov.roll_window;
    if (ov.resid_window) cfg.resid_window = *ov.resid_window;
    if (ov.imax) cfg.landscape.i_max = *ov.imax;
    if (ov.grid_size) cfg.landscape.grid_size = *ov.grid_size;
    if (ov.acf_max_lag) cfg.acf_max_lag = *ov.acf_max_lag;
    if (ov.surrogates) cfg.surrogate_count = *ov.surrogates;
    if (ov.surrogate_kind) cfg.set("surrogate-kind", *ov.surrogate_kind);
    if (ov.penalty) cfg.penalty = *ov.penalty;
    if (ov.price_column) cfg.price_column = *ov.price_column;
    if (ov.sv_iterations) cfg.sv_iterations = *ov.sv_iterations;
    if (ov.sv_replicates) cfg.sv_replicates = *ov.sv_replicates;
    if (ov.sv_particles) cfg.sv_particles = *ov.sv_particles;
    if (ov.sv_eval_particles) cfg.sv_eval_particles = *ov.sv_eval_particles;
    if (ov.sv_evaluations) cfg.sv_evaluations = *ov.sv_evaluations;
    if (ov.sv_rw_sd) cfg.sv_rw_sd = *ov.sv_rw_sd;
    if (ov.sv_cooling) cfg.sv_cooling = *ov.sv_cooling;
    return cfg;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"topological analysis of return series with stochastic-volatility "
                 "comparison and surrogate null validation"};
    app.require_subcommand(1);

    std::string config_path;
    CliOverrides ov;

    auto* c_ingest = app.add_subcommand("ingest", "validate and clean input files");
    auto* c_tda = app.add_subcommand("tda", "sliding-window persistence landscape norms");
    auto* c_sv = app.add_subcommand("sv", "stochastic volatility estimation and filtering");
    auto* c_compare = app.add_subcommand("compare",
                                         "overlay, rolling correlation, changepoints");
    auto* c_nulls = app.add_subcommand("nulls", "surrogate null envelopes and exceedances");
    auto* c_report = app.add_subcommand("report", "full analysis with manifest");
    for (auto* cmd : {c_ingest, c_tda, c_sv, c_compare, c_nulls, c_report})
        add_common_flags(cmd, config_path, ov);

    CLI11_PARSE(app, argc, argv);

    try {
        const topovol::AnalysisConfig cfg = build_config(config_path, ov);
        if (c_ingest->parsed()) topovol::run_ingest(cfg);
        else if (c_tda->parsed()) topovol::run_tda(cfg);
        else if (c_sv->parsed()) topovol::run_sv(cfg);
        else if (c_compare->parsed()) topovol::run_compare(cfg);
        else if (c_nulls->parsed()) topovol::run_nulls(cfg);
        else if (c_report->parsed()) topovol::run_report(cfg);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
