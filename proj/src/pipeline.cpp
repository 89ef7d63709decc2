#include "topovol/pipeline.hpp"
#include "topovol/csv.hpp"
#include "topovol/errors.hpp"
#include "topovol/rng.hpp"
#include "topovol/svg.hpp"

#include <json.hpp>

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>

namespace topovol {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

std::string out_path(const AnalysisConfig& cfg, const std::string& name) {
    return (fs::path(cfg.out_dir) / name).string();
}

void prepare_out_dir(const AnalysisConfig& cfg) {
    fs::create_directories(cfg.out_dir);
    write_file(out_path(cfg, "config.txt"), cfg.serialize());
}

std::string provenance(const AnalysisConfig& cfg) {
    return "topovol run: config digest " + cfg.digest() + ", seed " +
           std::to_string(cfg.seed);
}

std::vector<double> dates_as_doubles(const std::vector<Date>& dates) {
    std::vector<double> x(dates.size());
    for (std::size_t i = 0; i < dates.size(); ++i)
        x[i] = static_cast<double>(dates[i].serial());
    return x;
}

void save_json(const AnalysisConfig& cfg, const std::string& name, const json& j) {
    write_file(out_path(cfg, name), j.dump(2) + "\n");
}

// Degenerate constant-return inputs cannot be standardized; the pipeline
// proceeds on the centered series (all zeros) so downstream statistics
// come out as legitimate zeros instead of aborting.
ReturnSeries standardize_or_center(const ReturnSeries& s) {
    try {
        return standardize(s);
    } catch (const ZeroVariance&) {
        ReturnSeries out = s;
        const double m = sample_mean(s.values);
        for (double& v : out.values) v -= m;
        std::cout << "[warn] zero-variance return series, proceeding unscaled\n";
        return out;
    }
}

ReturnSeries standardized_returns(const AnalysisConfig& cfg) {
    auto ingest = ingest_prices(cfg.prices_path, cfg.price_column);
    return standardize_or_center(log_returns(ingest.prices));
}

} // namespace

IngestOutputs run_ingest(const AnalysisConfig& cfg) {
    cfg.validate();
    prepare_out_dir(cfg);
    IngestOutputs out;
    out.prices = ingest_prices(cfg.prices_path, cfg.price_column);

    ReturnSeries clean = out.prices.prices;
    std::string csv = "Date," + cfg.price_column + "\n";
    for (std::size_t i = 0; i < clean.size(); ++i)
        csv += clean.dates[i].to_string() + "," + format_double(clean.values[i]) + "\n";
    write_file(out_path(cfg, "prices_clean.csv"), csv);

    json summary;
    summary["prices"] = {{"rows", clean.size()},
                         {"rows_dropped", out.prices.rows_dropped},
                         {"first_date", clean.dates.front().to_string()},
                         {"last_date", clean.dates.back().to_string()}};

    if (!cfg.sentiment_path.empty()) {
        out.sentiment = ingest_sentiment(cfg.sentiment_path);
        out.have_sentiment = true;
        const auto classified = classify_sentiment(out.sentiment.sentiment);
        std::vector<std::vector<std::string>> rows;
        for (std::size_t i = 0; i < classified.size(); ++i)
            rows.push_back({classified.dates[i].to_string(),
                            format_double(classified.values[i]), classified.labels[i]});
        write_table_csv(out_path(cfg, "sentiment_clean.csv"),
                        {"date", "value", "regime"}, rows);
        summary["sentiment"] = {{"rows", classified.size()},
                                {"rows_dropped", out.sentiment.rows_dropped},
                                {"duplicates_dropped", out.sentiment.duplicates_dropped}};
    }
    save_json(cfg, "ingest_summary.json", summary);
    return out;
}

TdaOutputs run_tda(const AnalysisConfig& cfg) {
    cfg.validate();
    prepare_out_dir(cfg);

    auto ingest = ingest_prices(cfg.prices_path, cfg.price_column);
    TdaOutputs out;
    out.log_ret = log_returns(ingest.prices);
    out.std_returns = standardize_or_center(out.log_ret);

    const auto windows = embed_windows(out.std_returns, cfg.embedding);
    std::vector<PersistenceDiagram> diagrams;
    out.norms = l1_series(windows, cfg.landscape, cfg.effective_workers(), &diagrams);

    write_series_csv(out_path(cfg, "log_returns.csv"), out.log_ret, "log_return");
    write_series_csv(out_path(cfg, "returns_std.csv"), out.std_returns, "std_return");

    std::vector<std::vector<std::string>> rows;
    for (std::size_t i = 0; i < out.norms.size(); ++i)
        rows.push_back({out.norms.anchors[i].to_string(),
                        format_double(out.norms.grid_l1[i]),
                        format_double(out.norms.closed_l1[i]),
                        std::to_string(out.norms.n_pairs[i])});
    write_table_csv(out_path(cfg, "l1_norms.csv"),
                    {"anchor_date", "l1_grid", "l1_closed_form", "n_pairs"}, rows);

    std::ostringstream dump;
    for (std::size_t i = 0; i < diagrams.size(); ++i) {
        dump << "# anchor " << out.norms.anchors[i].to_string() << "\n";
        dump_diagram(dump, diagrams[i]);
    }
    write_file(out_path(cfg, "diagrams.txt"), dump.str());

    SvgFigure fig_ret("Daily log returns");
    fig_ret.use_date_axis(true);
    fig_ret.add_line(dates_as_doubles(out.log_ret.dates), out.log_ret.values, "#1f77b4");
    fig_ret.save(out_path(cfg, "fig_log_returns.svg"), provenance(cfg));

    SvgFigure fig_l1("L1 norm of the persistence landscape");
    fig_l1.use_date_axis(true);
    fig_l1.add_line(dates_as_doubles(out.norms.anchors), out.norms.grid_l1, "#1f77b4");
    fig_l1.save(out_path(cfg, "fig_l1_norm.svg"), provenance(cfg));

    std::cout << "[tda] " << out.norms.size() << " windows, wrote l1_norms.csv\n";
    return out;
}

SvOutputs run_sv(const AnalysisConfig& cfg) {
    cfg.validate();
    prepare_out_dir(cfg);

    const ReturnSeries z = standardized_returns(cfg);
    const SVParams init = heuristic_init(z);
    const IF2Settings settings = cfg.if2_settings();
    const IF2Result est = if2_estimate(z, init, settings);

    SvOutputs out;
    out.params = est.params;
    out.replicate_log_likelihoods = est.replicate_log_likelihoods;
    out.best_replicate = est.best_replicate;
    out.filtered = particle_filter(z, est.params, settings.particles_evaluation,
                                   derive_seed(cfg.seed, "sv.final_filter"));

    std::vector<std::vector<std::string>> rows;
    for (std::size_t t = 0; t < out.filtered.dates.size(); ++t)
        rows.push_back({out.filtered.dates[t].to_string(),
                        format_double(out.filtered.filtered_h[t]),
                        format_double(out.filtered.filtered_variance[t]),
                        format_double(out.filtered.filtered_sigma[t])});
    write_table_csv(out_path(cfg, "sv_filtered.csv"),
                    {"date", "h_hat", "V_hat", "sigma_hat"}, rows);

    json params;
    params["mu"] = out.params.mu;
    params["phi"] = out.params.phi;
    params["sigma_eta"] = out.params.sigma_eta;
    params["h0"] = out.params.h0;
    json summary;
    summary["params"] = params;
    summary["replicate_log_likelihoods"] = out.replicate_log_likelihoods;
    summary["best_replicate"] = out.best_replicate;
    summary["final_filter_log_likelihood"] = out.filtered.log_likelihood;
    summary["init"] = {{"mu", init.mu},
                       {"phi", init.phi},
                       {"sigma_eta", init.sigma_eta},
                       {"h0", init.h0}};
    summary["settings"] = {{"iterations", settings.iterations},
                           {"replicates", settings.replicates},
                           {"particles_estimation", settings.particles_estimation},
                           {"particles_evaluation", settings.particles_evaluation},
                           {"evaluations_per_replicate", settings.evaluations_per_replicate},
                           {"cooling", settings.cooling},
                           {"rw_sd", settings.rw_sd[0]}};
    save_json(cfg, "sv_params.json", summary);

    SvgFigure fig("Filtered conditional volatility");
    fig.use_date_axis(true);
    fig.add_line(dates_as_doubles(out.filtered.dates), out.filtered.filtered_sigma,
                 "#d62728", "sigma_hat");
    fig.save(out_path(cfg, "fig_sv_sigma.svg"), provenance(cfg));

    std::cout << "[sv] mu=" << format_double(out.params.mu)
              << " phi=" << format_double(out.params.phi)
              << " sigma_eta=" << format_double(out.params.sigma_eta) << "\n";
    return out;
}

LandscapeNormSeries read_l1_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IngestError("cannot open '" + path + "' (run the tda stage first)");
    std::string line;
    std::getline(in, line);
    LandscapeNormSeries out;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        const auto f = split_csv_line(line);
        if (f.size() < 4) throw IngestError("malformed l1 table row: " + line);
        out.anchors.push_back(Date::parse(f[0]));
        out.grid_l1.push_back(std::stod(f[1]));
        out.closed_l1.push_back(std::stod(f[2]));
        out.n_pairs.push_back(static_cast<std::size_t>(std::stoul(f[3])));
    }
    if (out.anchors.empty()) throw IngestError("l1 table '" + path + "' has no rows");
    return out;
}

ReturnSeries read_csv_column(const std::string& path, const std::string& column) {
    std::ifstream in(path);
    if (!in) throw IngestError("cannot open '" + path + "'");
    std::string line;
    if (!std::getline(in, line)) throw IngestError("empty file '" + path + "'");
    const auto header = split_csv_line(line);
    std::size_t col = header.size();
    for (std::size_t i = 0; i < header.size(); ++i)
        if (header[i] == column) col = i;
    if (col == header.size())
        throw IngestError("file '" + path + "' has no column '" + column + "'");
    ReturnSeries s;
    s.name = column;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        const auto f = split_csv_line(line);
        if (f.size() <= col) throw IngestError("malformed row in '" + path + "'");
        s.dates.push_back(Date::parse(f[0]));
        s.values.push_back(std::stod(f[col]));
    }
    s.check_invariants();
    return s;
}

CompareOutputs run_compare(const AnalysisConfig& cfg) {
    cfg.validate();
    prepare_out_dir(cfg);

    const LandscapeNormSeries norms = read_l1_csv(out_path(cfg, "l1_norms.csv"));
    const ReturnSeries l1 = norms.as_series("l1");
    const ReturnSeries sigma =
        read_csv_column(out_path(cfg, "sv_filtered.csv"), "sigma_hat");

    const ReturnSeries l1_std = standardize(l1);
    const ReturnSeries sigma_std = standardize(sigma);

    std::vector<Date> dates;
    std::vector<double> a, b;
    inner_join(l1_std, sigma_std, dates, a, b);
    if (dates.empty()) throw InvalidInput("run_compare: overlay join is empty");
    std::vector<std::vector<std::string>> rows;
    for (std::size_t i = 0; i < dates.size(); ++i)
        rows.push_back({dates[i].to_string(), format_double(a[i]), format_double(b[i])});
    write_table_csv(out_path(cfg, "overlay.csv"), {"date", "l1_std", "sigma_std"}, rows);

    CompareOutputs out;
    out.correlation = rolling_correlation(l1, sigma, cfg.roll_window);
    write_series_csv(out_path(cfg, "rolling_correlation.csv"), out.correlation,
                     "correlation");

    const double penalty =
        cfg.penalty > 0.0 ? cfg.penalty : default_penalty(out.correlation);
    out.pelt = pelt_mean_shift(out.correlation, penalty);
    out.dominant_split = single_split(out.correlation);

    json cp;
    cp["penalty"] = penalty;
    cp["penalty_mode"] = cfg.penalty > 0.0 ? "configured" : "auto";
    json cps = json::array();
    for (std::size_t idx : out.pelt.changepoints)
        cps.push_back({{"index", idx},
                       {"date", out.correlation.dates[idx].to_string()}});
    cp["pelt_changepoints"] = cps;
    cp["pelt_segment_means"] = out.pelt.segment_means;
    cp["pelt_total_cost"] = out.pelt.total_cost;
    cp["dominant_split"] = {
        {"index", out.dominant_split.changepoints[0]},
        {"date", out.correlation.dates[out.dominant_split.changepoints[0]].to_string()},
        {"segment_means", out.dominant_split.segment_means}};
    save_json(cfg, "changepoints.json", cp);

    SvgFigure fig_overlay("Standardized L1 norm vs filtered volatility");
    fig_overlay.use_date_axis(true);
    fig_overlay.add_line(dates_as_doubles(dates), a, "#1f77b4", "L1 norm (std)");
    fig_overlay.add_line(dates_as_doubles(dates), b, "#d62728", "volatility (std)");
    fig_overlay.save(out_path(cfg, "fig_overlay.svg"), provenance(cfg));

    SvgFigure fig_corr("Rolling correlation of L1 norm and volatility");
    fig_corr.use_date_axis(true);
    fig_corr.add_line(dates_as_doubles(out.correlation.dates), out.correlation.values,
                      "#2ca02c", "rolling correlation");
    fig_corr.add_vline(
        static_cast<double>(
            out.correlation.dates[out.dominant_split.changepoints[0]].serial()),
        "#8c564b", "dominant mean shift");
    fig_corr.save(out_path(cfg, "fig_rolling_correlation.svg"), provenance(cfg));

    std::cout << "[compare] " << out.correlation.size() << " correlation windows, "
              << out.pelt.changepoints.size() << " changepoints at penalty "
              << format_double(penalty) << "\n";
    return out;
}

NullOutputs run_nulls(const AnalysisConfig& cfg) {
    cfg.validate();
    prepare_out_dir(cfg);

    const LandscapeNormSeries observed = read_l1_csv(out_path(cfg, "l1_norms.csv"));
    const ReturnSeries z = standardized_returns(cfg);

    NullOutputs out;
    for (const SurrogateKind kind : cfg.surrogate_kinds) {
        const std::uint64_t seed = derive_seed(cfg.seed, "nulls." + to_string(kind));
        const NullEnvelope env = null_envelope(z, kind, cfg.surrogate_count, seed,
                                               cfg.tda(), cfg.effective_workers());
        const ExceedanceReport rep = exceedance(observed, env);
        const std::string kname = to_string(kind);

        // envelope table joined with the observed series
        std::vector<std::vector<std::string>> rows;
        std::size_t i = 0, j = 0;
        while (i < observed.size() && j < env.anchors.size()) {
            if (observed.anchors[i] < env.anchors[j]) { ++i; continue; }
            if (env.anchors[j] < observed.anchors[i]) { ++j; continue; }
            const double v = observed.grid_l1[i];
            const char* flag = v < env.q05[j] ? "below" : (v > env.q95[j] ? "above" : "inside");
            rows.push_back({env.anchors[j].to_string(), format_double(env.mean[j]),
                            format_double(env.q05[j]), format_double(env.q95[j]),
                            format_double(v), flag});
            ++i; ++j;
        }
        write_table_csv(out_path(cfg, "envelope_" + kname + ".csv"),
                        {"anchor_date", "null_mean", "q05", "q95", "observed", "flag"},
                        rows);

        json jr;
        jr["kind"] = kname;
        jr["n_windows"] = rep.n_windows;
        jr["n_below"] = rep.n_below;
        jr["n_above"] = rep.n_above;
        jr["frac_below"] = rep.frac_below;
        jr["frac_above"] = rep.frac_above;
        jr["realizations"] = env.realizations;
        jr["seed"] = seed;
        save_json(cfg, "exceedance_" + kname + ".json", jr);

        SvgFigure fig("L1 norm vs " + kname + " null envelope");
        fig.use_date_axis(true);
        const auto xs = dates_as_doubles(env.anchors);
        fig.add_band(xs, env.q05, env.q95, "#bbbbbb", "null 5-95% envelope");
        fig.add_line(xs, env.mean, "#777777", "null mean");
        fig.add_line(dates_as_doubles(observed.anchors), observed.grid_l1, "#1f77b4",
                     "observed L1 norm");
        fig.save(out_path(cfg, "fig_null_" + kname + ".svg"), provenance(cfg));

        std::cout << "[nulls] " << kname << ": frac_below=" << format_double(rep.frac_below)
                  << " frac_above=" << format_double(rep.frac_above) << "\n";
        out.results.emplace_back(env, rep);
    }
    return out;
}

std::vector<RegimeRow> regime_distribution(const LandscapeNormSeries& norms,
                                           const SentimentSeries& classified) {
    std::map<std::string, std::vector<double>> groups;
    std::size_t i = 0, j = 0;
    while (i < norms.size() && j < classified.size()) {
        if (norms.anchors[i] < classified.dates[j]) { ++i; continue; }
        if (classified.dates[j] < norms.anchors[i]) { ++j; continue; }
        groups[classified.labels[j]].push_back(norms.grid_l1[i]);
        ++i; ++j;
    }

    static const std::vector<std::string> canonical = {
        "Extreme Fear", "Fear", "Neutral", "Greed", "Extreme Greed"};
    std::vector<std::string> order;
    for (const auto& r : canonical)
        if (groups.count(r)) order.push_back(r);
    for (const auto& [name, _] : groups)
        if (std::find(canonical.begin(), canonical.end(), name) == canonical.end())
            order.push_back(name);

    std::vector<RegimeRow> rows;
    for (const auto& name : order) {
        const auto& vals = groups[name];
        RegimeRow row;
        row.regime = name;
        row.count = vals.size();
        row.median = quantile(vals, 0.5);
        row.q1 = quantile(vals, 0.25);
        row.q3 = quantile(vals, 0.75);
        const double iqr = row.q3 - row.q1;
        const double lo_fence = row.q1 - 1.5 * iqr;
        const double hi_fence = row.q3 + 1.5 * iqr;
        row.lo_whisker = row.q1;
        row.hi_whisker = row.q3;
        bool lo_set = false, hi_set = false;
        for (double v : vals) {
            if (v >= lo_fence && (!lo_set || v < row.lo_whisker)) {
                row.lo_whisker = v;
                lo_set = true;
            }
            if (v <= hi_fence && (!hi_set || v > row.hi_whisker)) {
                row.hi_whisker = v;
                hi_set = true;
            }
            if (v < lo_fence || v > hi_fence) ++row.n_outliers;
        }
        rows.push_back(row);
    }
    return rows;
}

std::string file_digest_hex(const std::string& path) {
    char buf[24];
    std::snprintf(buf, sizeof(buf), "%016llx",
                  static_cast<unsigned long long>(fnv1a64(read_file(path))));
    return buf;
}

void write_manifest(const AnalysisConfig& cfg) {
    std::vector<std::string> names;
    for (const auto& entry : fs::directory_iterator(cfg.out_dir)) {
        if (!entry.is_regular_file()) continue;
        const std::string name = entry.path().filename().string();
        if (name == "manifest.json") continue;
        names.push_back(name);
    }
    std::sort(names.begin(), names.end());

    json files = json::array();
    for (const auto& name : names)
        files.push_back({{"name", name},
                         {"digest", file_digest_hex(out_path(cfg, name))}});
    json manifest;
    manifest["seed"] = cfg.seed;
    manifest["config_digest"] = cfg.digest();
    manifest["config"] = cfg.serialize();
    manifest["files"] = files;
    save_json(cfg, "manifest.json", manifest);
}

void run_report(const AnalysisConfig& cfg) {
    cfg.validate();
    if (cfg.sentiment_path.empty())
        throw InvalidInput("run_report requires a sentiment input");
    prepare_out_dir(cfg);

    const IngestOutputs ingest = run_ingest(cfg);
    const TdaOutputs tda = run_tda(cfg);
    run_sv(cfg);
    run_compare(cfg);
    run_nulls(cfg);

    // L1 distribution across sentiment regimes
    const SentimentSeries classified = classify_sentiment(ingest.sentiment.sentiment);
    const auto regimes = regime_distribution(tda.norms, classified);
    std::vector<std::vector<std::string>> rows;
    for (const auto& r : regimes)
        rows.push_back({r.regime, std::to_string(r.count), format_double(r.median),
                        format_double(r.q1), format_double(r.q3),
                        format_double(r.lo_whisker), format_double(r.hi_whisker),
                        std::to_string(r.n_outliers)});
    write_table_csv(out_path(cfg, "regime_table.csv"),
                    {"regime", "count", "median", "q1", "q3", "lo_whisker",
                     "hi_whisker", "n_outliers"},
                    rows);

    SvgFigure fig_dist("L1 norm distribution across sentiment regimes");
    for (std::size_t i = 0; i < regimes.size(); ++i)
        fig_dist.add_box(static_cast<double>(i), regimes[i].lo_whisker, regimes[i].q1,
                         regimes[i].median, regimes[i].q3, regimes[i].hi_whisker,
                         regimes[i].regime);
    fig_dist.save(out_path(cfg, "fig_sentiment_distribution.svg"), provenance(cfg));

    // residualization on volatility + sentiment, then the residual ACF
    const ReturnSeries sigma =
        read_csv_column(out_path(cfg, "sv_filtered.csv"), "sigma_hat");
    const RegressionResult reg = residualize_l1(tda.norms.as_series("l1"), sigma,
                                                classified, cfg.resid_window);
    const std::size_t max_lag =
        std::min(cfg.acf_max_lag, reg.residuals.size() > 1 ? reg.residuals.size() - 1
                                                           : std::size_t{1});
    const ACFResult resid_acf = acf(reg.residuals, max_lag);

    json jr;
    json coeffs;
    for (std::size_t i = 0; i < reg.coefficients.size(); ++i)
        coeffs[reg.covariate_names[i]] = reg.coefficients[i];
    jr["coefficients"] = coeffs;
    jr["r_squared"] = reg.r_squared;
    jr["rolling_window"] = reg.rolling_window;
    jr["n_observations"] = reg.residuals.size();
    jr["acf_lag1"] = resid_acf.values.size() > 1 ? resid_acf.values[1] : 0.0;
    jr["acf_band"] = resid_acf.confidence_halfwidth;
    save_json(cfg, "residual_regression.json", jr);

    std::vector<std::vector<std::string>> acf_rows;
    for (std::size_t k = 0; k < resid_acf.values.size(); ++k)
        acf_rows.push_back({std::to_string(k), format_double(resid_acf.values[k]),
                            format_double(resid_acf.confidence_halfwidth)});
    write_table_csv(out_path(cfg, "resid_acf.csv"), {"lag", "acf", "band"}, acf_rows);

    SvgFigure fig_acf("ACF of residual L1 norm");
    std::vector<double> lags(resid_acf.values.size());
    for (std::size_t k = 0; k < lags.size(); ++k) lags[k] = static_cast<double>(k);
    fig_acf.add_stems(lags, resid_acf.values, "#1f77b4");
    fig_acf.add_hline(resid_acf.confidence_halfwidth, "#d62728");
    fig_acf.add_hline(-resid_acf.confidence_halfwidth, "#d62728");
    fig_acf.add_hline(0.0, "#444444", false);
    fig_acf.save(out_path(cfg, "fig_acf_residual.svg"), provenance(cfg));

    write_manifest(cfg);
    std::cout << "[report] complete, manifest written\n";
}

} // namespace topovol
