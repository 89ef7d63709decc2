#include "topovol/svmodel.hpp"
#include "topovol/errors.hpp"
#include "topovol/parallel.hpp"
#include "topovol/rng.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace topovol {

namespace {

constexpr double kLog2Pi = 1.8378770664093454836;

// log N(z; 0, exp(h)) without materializing exp(h)
inline double obs_logpdf(double z, double h) {
    return -0.5 * (kLog2Pi + h + z * z * std::exp(-h));
}

// Systematic resampling: one uniform offset, Np evenly spaced positions.
void systematic_resample(const std::vector<double>& weights, double u0,
                         std::vector<std::uint32_t>& idx) {
    const std::size_t np = weights.size();
    idx.resize(np);
    double cum = weights[0];
    std::size_t j = 0;
    for (std::size_t i = 0; i < np; ++i) {
        const double pos = (static_cast<double>(i) + u0) / static_cast<double>(np);
        while (cum < pos && j + 1 < np) cum += weights[++j];
        idx[i] = static_cast<std::uint32_t>(j);
    }
}

template <typename T>
void gather(std::vector<T>& v, const std::vector<std::uint32_t>& idx, std::vector<T>& tmp) {
    tmp.resize(v.size());
    for (std::size_t i = 0; i < idx.size(); ++i) tmp[i] = v[idx[i]];
    v.swap(tmp);
}

} // namespace

void SVParams::validate() const {
    if (!(phi > 0.0 && phi < 1.0))
        throw InvalidInput("sv params: phi must lie strictly inside (0,1)");
    if (!(sigma_eta > 0.0)) throw InvalidInput("sv params: sigma_eta must be > 0");
    if (!std::isfinite(mu) || !std::isfinite(h0))
        throw InvalidInput("sv params: mu and h0 must be finite");
}

EstimationVector to_estimation_scale(const SVParams& p) {
    p.validate();
    return {p.mu, std::log(p.phi / (1.0 - p.phi)), std::log(p.sigma_eta), p.h0};
}

SVParams from_estimation_scale(const EstimationVector& v) {
    SVParams p;
    p.mu = v[0];
    p.phi = 1.0 / (1.0 + std::exp(-v[1]));
    p.sigma_eta = std::exp(v[2]);
    p.h0 = v[3];
    return p;
}

SimResult simulate(const SVParams& params, std::size_t n, std::uint64_t seed) {
    params.validate();
    SimResult out;
    out.h.resize(n);
    out.z.resize(n);
    Rng rng(seed);
    std::normal_distribution<double> gauss(0.0, 1.0);
    double h_prev = params.h0;
    for (std::size_t t = 0; t < n; ++t) {
        const double h = params.mu + params.phi * (h_prev - params.mu) +
                         params.sigma_eta * gauss(rng);
        out.h[t] = h;
        out.z[t] = std::exp(0.5 * h) * gauss(rng);
        h_prev = h;
    }
    return out;
}

FilterOutput particle_filter(const ReturnSeries& z, const SVParams& params,
                             int particle_count, std::uint64_t seed) {
    params.validate();
    if (z.empty()) throw InvalidInput("particle_filter: empty observation series");
    if (particle_count < 1) throw InvalidInput("particle_filter: need at least 1 particle");

    const std::size_t n = z.size();
    const std::size_t np = static_cast<std::size_t>(particle_count);
    FilterOutput out;
    out.dates = z.dates;
    out.particle_count = particle_count;
    out.filtered_h.resize(n);
    out.filtered_variance.resize(n);
    out.filtered_sigma.resize(n);
    out.ess.resize(n);

    Rng rng(seed);
    std::normal_distribution<double> gauss(0.0, 1.0);
    std::uniform_real_distribution<double> unif(0.0, 1.0);

    std::vector<double> h(np, params.h0), lw(np), w(np), tmp;
    std::vector<std::uint32_t> idx;
    double loglik = 0.0;

    for (std::size_t t = 0; t < n; ++t) {
        double max_lw = -std::numeric_limits<double>::infinity();
        for (std::size_t i = 0; i < np; ++i) {
            h[i] = params.mu + params.phi * (h[i] - params.mu) +
                   params.sigma_eta * gauss(rng);
            lw[i] = obs_logpdf(z.values[t], h[i]);
            if (lw[i] > max_lw) max_lw = lw[i];
        }
        if (!std::isfinite(max_lw))
            throw FilterFailure("particle filter: all weights degenerate at step " +
                                    std::to_string(t),
                                t);
        double sum = 0.0, sum_sq = 0.0;
        for (std::size_t i = 0; i < np; ++i) {
            w[i] = std::exp(lw[i] - max_lw);
            sum += w[i];
        }
        if (!(sum > 0.0))
            throw FilterFailure("particle filter: weight underflow at step " +
                                    std::to_string(t),
                                t);
        loglik += max_lw + std::log(sum / static_cast<double>(np));
        for (std::size_t i = 0; i < np; ++i) {
            w[i] /= sum;
            sum_sq += w[i] * w[i];
        }
        out.ess[t] = 1.0 / sum_sq;

        systematic_resample(w, unif(rng), idx);
        gather(h, idx, tmp);

        double mean_h = 0.0;
        for (double hi : h) mean_h += hi;
        mean_h /= static_cast<double>(np);
        out.filtered_h[t] = mean_h;
        out.filtered_variance[t] = std::exp(mean_h);
        out.filtered_sigma[t] = std::exp(0.5 * mean_h);
    }
    out.log_likelihood = loglik;
    return out;
}

double log_mean_exp(const std::vector<double>& values) {
    if (values.empty()) throw InvalidInput("log_mean_exp of empty list");
    const double m = *std::max_element(values.begin(), values.end());
    if (!std::isfinite(m)) return m;
    double s = 0.0;
    for (double v : values) s += std::exp(v - m);
    return m + std::log(s / static_cast<double>(values.size()));
}

void IF2Settings::validate() const {
    if (iterations < 0) throw InvalidInput("if2: iterations must be >= 0");
    if (replicates < 1 || particles_estimation < 1 || particles_evaluation < 1 ||
        evaluations_per_replicate < 1)
        throw InvalidInput("if2: all counts must be >= 1");
    if (!(cooling > 0.0 && cooling <= 1.0))
        throw InvalidInput("if2: cooling factor must lie in (0,1]");
    for (double s : rw_sd)
        if (s < 0.0) throw InvalidInput("if2: random-walk sd must be >= 0");
}

namespace {

struct ReplicateResult {
    SVParams params;
    double score = -std::numeric_limits<double>::infinity();
    bool failed = false;
    std::string error;
};

ReplicateResult run_replicate(const ReturnSeries& z, const SVParams& init,
                              const IF2Settings& st, std::uint64_t seed_rep) {
    ReplicateResult res;
    const std::size_t n = z.size();
    const std::size_t np = static_cast<std::size_t>(st.particles_estimation);

    Rng rng(seed_rep);
    std::normal_distribution<double> gauss(0.0, 1.0);
    std::uniform_real_distribution<double> unif(0.0, 1.0);

    const EstimationVector theta0 = to_estimation_scale(init);
    std::vector<EstimationVector> theta(np, theta0), theta_tmp;
    std::vector<double> h(np), lw(np), w(np), h_tmp;
    std::vector<std::uint32_t> idx;

    try {
        double cool = 1.0;
        for (int m = 0; m < st.iterations; ++m) {
            std::array<double, 4> sd;
            for (int k = 0; k < 4; ++k) sd[k] = st.rw_sd[k] * cool;

            for (std::size_t t = 0; t < n; ++t) {
                double max_lw = -std::numeric_limits<double>::infinity();
                for (std::size_t i = 0; i < np; ++i) {
                    for (int k = 0; k < 4; ++k)
                        if (sd[k] > 0.0) theta[i][k] += sd[k] * gauss(rng);
                    const SVParams p = from_estimation_scale(theta[i]);
                    const double prev = (t == 0) ? p.h0 : h[i];
                    h[i] = p.mu + p.phi * (prev - p.mu) + p.sigma_eta * gauss(rng);
                    lw[i] = obs_logpdf(z.values[t], h[i]);
                    if (lw[i] > max_lw) max_lw = lw[i];
                }
                if (!std::isfinite(max_lw))
                    throw FilterFailure("if2: all weights degenerate at step " +
                                            std::to_string(t),
                                        t);
                double sum = 0.0;
                for (std::size_t i = 0; i < np; ++i) {
                    w[i] = std::exp(lw[i] - max_lw);
                    sum += w[i];
                }
                if (!(sum > 0.0))
                    throw FilterFailure("if2: weight underflow at step " + std::to_string(t), t);
                for (std::size_t i = 0; i < np; ++i) w[i] /= sum;

                systematic_resample(w, unif(rng), idx);
                gather(h, idx, h_tmp);
                gather(theta, idx, theta_tmp);
            }
            cool *= st.cooling;

            // The logit walk keeps phi inside (0,1); make that explicit.
            for (const auto& th : theta) {
                const double phi = from_estimation_scale(th).phi;
                if (!(phi > 0.0 && phi < 1.0))
                    throw Error("if2: phi left (0,1), estimation-scale walk violated");
            }
        }

        EstimationVector mean{0.0, 0.0, 0.0, 0.0};
        for (const auto& th : theta)
            for (int k = 0; k < 4; ++k) mean[k] += th[k];
        for (int k = 0; k < 4; ++k) mean[k] /= static_cast<double>(np);
        res.params = from_estimation_scale(mean);

        std::vector<double> lls(static_cast<std::size_t>(st.evaluations_per_replicate));
        for (std::size_t e = 0; e < lls.size(); ++e)
            lls[e] = particle_filter(z, res.params, st.particles_evaluation,
                                     derive_seed(seed_rep, "if2.eval", e))
                         .log_likelihood;
        res.score = log_mean_exp(lls);
    } catch (const Error& err) {
        res.failed = true;
        res.error = err.what();
    }
    return res;
}

} // namespace

IF2Result if2_estimate(const ReturnSeries& z, const SVParams& init,
                       const IF2Settings& settings) {
    settings.validate();
    init.validate();
    if (z.empty()) throw InvalidInput("if2_estimate: empty observation series");

    const std::size_t nrep = static_cast<std::size_t>(settings.replicates);
    std::vector<ReplicateResult> reps(nrep);
    parallel_for(nrep, settings.workers, [&](std::size_t r) {
        reps[r] = run_replicate(z, init, settings,
                                derive_seed(settings.seed, "if2.replicate", r));
    });

    IF2Result out;
    out.replicate_log_likelihoods.resize(nrep,
                                         -std::numeric_limits<double>::infinity());
    int best = -1;
    for (std::size_t r = 0; r < nrep; ++r) {
        if (reps[r].failed) continue;
        out.replicate_log_likelihoods[r] = reps[r].score;
        if (best < 0 || reps[r].score > reps[static_cast<std::size_t>(best)].score)
            best = static_cast<int>(r);
    }
    if (best < 0)
        throw Error("if2_estimate: every replicate failed (" + reps[0].error + ")");
    out.best_replicate = best;
    out.params = reps[static_cast<std::size_t>(best)].params;
    return out;
}

SVParams heuristic_init(const ReturnSeries& z) {
    if (z.size() < 2) throw InvalidInput("heuristic_init needs at least 2 observations");
    const double sd = sample_std(z.values);
    if (sd <= 0.0) throw ZeroVariance("heuristic_init: constant observation series");
    SVParams p;
    p.mu = std::log(sd * sd);
    p.phi = 0.95;
    p.sigma_eta = 0.2;
    p.h0 = p.mu;
    return p;
}

ReturnSeries filtered_volatility(const FilterOutput& fo) {
    ReturnSeries s;
    s.dates = fo.dates;
    s.values = fo.filtered_sigma;
    s.name = "sigma_hat";
    return s;
}

} // namespace topovol
