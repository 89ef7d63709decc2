#ifndef TOPOVOL_SVMODEL_HPP
#define TOPOVOL_SVMODEL_HPP

#include "topovol/series.hpp"

#include <array>
#include <cstdint>
#include <vector>

namespace topovol {

// Parameters of the discrete-time stochastic volatility model:
// latent log variance h_t = mu + phi*(h_{t-1} - mu) + sigma_eta * eta_t,
// observed return z_t ~ N(0, exp(h_t)).
struct SVParams {
    double mu = 0.0;        // long-run mean of log variance
    double phi = 0.95;      // persistence, strictly inside (0,1)
    double sigma_eta = 0.2; // log-variance shock scale, > 0
    double h0 = 0.0;        // initial log variance (estimated with the rest)

    void validate() const;
};

// Unconstrained coordinates used during estimation: sigma_eta on the log
// scale, phi on the logit scale, mu and h0 unchanged.
using EstimationVector = std::array<double, 4>; // (mu, logit phi, log sigma, h0)

EstimationVector to_estimation_scale(const SVParams& p);
SVParams from_estimation_scale(const EstimationVector& v);

struct SimResult {
    std::vector<double> h; // latent log variance
    std::vector<double> z; // observations
};

SimResult simulate(const SVParams& params, std::size_t n, std::uint64_t seed);

struct FilterOutput {
    double log_likelihood = 0.0;
    std::vector<Date> dates;
    std::vector<double> filtered_h;        // posterior mean of h_t
    std::vector<double> filtered_variance; // exp(h_hat)
    std::vector<double> filtered_sigma;    // exp(h_hat / 2)
    std::vector<double> ess;               // effective sample size per step
    int particle_count = 0;
};

// Bootstrap filter: state-equation proposal, Gaussian observation weights,
// systematic resampling every step. Throws FilterFailure when all weights
// collapse at some observation.
FilterOutput particle_filter(const ReturnSeries& z, const SVParams& params,
                             int particle_count, std::uint64_t seed);

// log((1/k) sum exp(v_i)) computed with a max shift.
double log_mean_exp(const std::vector<double>& values);

struct IF2Settings {
    int iterations = 50;
    int replicates = 3;
    int particles_estimation = 1000;
    int particles_evaluation = 1000;
    int evaluations_per_replicate = 5;
    // random-walk sd per estimation-scale coordinate (mu, logit phi, log sigma, h0)
    std::array<double, 4> rw_sd = {0.02, 0.02, 0.02, 0.02};
    double cooling = 0.95; // per-iteration shrink factor, in (0,1]
    std::uint64_t seed = 0;
    int workers = 1;

    void validate() const;
};

struct IF2Result {
    SVParams params;
    std::vector<double> replicate_log_likelihoods; // log-mean-exp aggregated
    int best_replicate = 0;
};

// Iterated filtering: per replicate, runs `iterations` perturbed particle
// filters with the random-walk sd cooled geometrically, takes the final
// parameter-swarm mean on the estimation scale, scores it with independent
// particle filters aggregated by log_mean_exp, and returns the best
// replicate. Failed replicates are skipped; all failing is an error.
IF2Result if2_estimate(const ReturnSeries& z, const SVParams& init,
                       const IF2Settings& settings);

// Initialization heuristic: mu and h0 at the log empirical variance,
// persistence high, moderate shock scale.
SVParams heuristic_init(const ReturnSeries& z);

// Series of sigma_hat = exp(h_hat/2) on the observation dates.
ReturnSeries filtered_volatility(const FilterOutput& fo);

} // namespace topovol

#endif
