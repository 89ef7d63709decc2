#ifndef TOPOVOL_CONFIG_HPP
#define TOPOVOL_CONFIG_HPP

#include "topovol/embedding.hpp"
#include "topovol/landscape.hpp"
#include "topovol/surrogate.hpp"
#include "topovol/svmodel.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace topovol {

// Effective settings of one analysis run. Every key of the flat config
// file maps onto one field here and onto one CLI flag; CLI values override
// file values. The serialized form is written next to every run's outputs.
struct AnalysisConfig {
    std::string prices_path;
    std::string sentiment_path;
    std::string out_dir = "out";
    std::uint64_t seed = 42;
    int workers = 0; // 0 -> hardware concurrency

    EmbeddingConfig embedding;  // m=4, d=2, window=50, stride=1
    LandscapeConfig landscape;  // i_max=10, grid_size=500

    std::size_t roll_window = 180; // rolling-correlation horizon, days
    std::size_t resid_window = 30; // residualization window L, days
    double penalty = 0.0;          // changepoint penalty; <= 0 means auto
    std::size_t acf_max_lag = 40;

    int surrogate_count = 30;
    std::vector<SurrogateKind> surrogate_kinds = {SurrogateKind::shuffle,
                                                  SurrogateKind::fft};

    std::string price_column = "Close"; // or "Adj Close"

    int sv_iterations = 50;
    int sv_replicates = 3;
    int sv_particles = 1000;
    int sv_eval_particles = 1000;
    int sv_evaluations = 5;
    double sv_rw_sd = 0.02;
    double sv_cooling = 0.95;

    // Parses "key = value" lines; '#' starts a comment. Unknown keys are
    // rejected so typos cannot silently fall back to defaults.
    static AnalysisConfig from_file(const std::string& path);
    void set(const std::string& key, const std::string& value);

    std::string serialize() const;
    std::string digest() const; // over the serialized form

    int effective_workers() const;
    TdaConfig tda() const { return {embedding, landscape}; }
    IF2Settings if2_settings() const;

    void validate() const;
};

} // namespace topovol

#endif
