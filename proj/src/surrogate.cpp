#include "topovol/surrogate.hpp"
#include "topovol/errors.hpp"
#include "topovol/parallel.hpp"
#include "topovol/rng.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <mutex>
#include <numeric>

namespace topovol {

std::string to_string(SurrogateKind kind) {
    return kind == SurrogateKind::shuffle ? "shuffle" : "fft";
}

SurrogateKind surrogate_kind_from_string(const std::string& s) {
    if (s == "shuffle") return SurrogateKind::shuffle;
    if (s == "fft") return SurrogateKind::fft;
    throw InvalidInput("unknown surrogate kind '" + s + "' (expected shuffle|fft)");
}

std::vector<std::size_t> random_permutation(std::size_t n, std::uint64_t seed) {
    std::vector<std::size_t> perm(n);
    std::iota(perm.begin(), perm.end(), std::size_t{0});
    Rng rng(seed);
    for (std::size_t i = n; i > 1; --i) {
        std::uniform_int_distribution<std::size_t> pick(0, i - 1);
        std::swap(perm[i - 1], perm[pick(rng)]);
    }
    return perm;
}

ReturnSeries apply_permutation(const ReturnSeries& s, const std::vector<std::size_t>& perm) {
    if (perm.size() != s.size())
        throw InvalidInput("permutation length mismatch");
    ReturnSeries out = s;
    for (std::size_t i = 0; i < perm.size(); ++i) out.values[i] = s.values[perm[i]];
    return out;
}

ReturnSeries shuffle_surrogate(const ReturnSeries& z, std::uint64_t seed) {
    if (z.empty()) throw InvalidInput("shuffle_surrogate: empty series");
    return apply_permutation(z, random_permutation(z.size(), seed));
}

namespace {

// FFTW plan creation is not thread safe; executions on private buffers are.
std::mutex& fftw_plan_mutex() {
    static std::mutex m;
    return m;
}

std::vector<std::complex<double>> run_dft(const std::vector<std::complex<double>>& in,
                                          int sign) {
    const std::size_t n = in.size();
    std::vector<std::complex<double>> out(n);
    fftw_plan plan;
    {
        std::lock_guard<std::mutex> lock(fftw_plan_mutex());
        plan = fftw_plan_dft_1d(
            static_cast<int>(n),
            reinterpret_cast<fftw_complex*>(const_cast<std::complex<double>*>(in.data())),
            reinterpret_cast<fftw_complex*>(out.data()), sign, FFTW_ESTIMATE);
    }
    fftw_execute(plan);
    {
        std::lock_guard<std::mutex> lock(fftw_plan_mutex());
        fftw_destroy_plan(plan);
    }
    return out;
}

} // namespace

std::vector<std::complex<double>> dft(const std::vector<double>& x) {
    std::vector<std::complex<double>> in(x.begin(), x.end());
    return run_dft(in, FFTW_FORWARD);
}

std::vector<std::complex<double>> idft(const std::vector<std::complex<double>>& z) {
    auto out = run_dft(z, FFTW_BACKWARD);
    const double scale = 1.0 / static_cast<double>(z.size());
    for (auto& c : out) c *= scale;
    return out;
}

std::vector<double> periodogram(const std::vector<double>& x) {
    const auto z = dft(x);
    std::vector<double> p(z.size());
    for (std::size_t k = 0; k < z.size(); ++k) p[k] = std::norm(z[k]);
    return p;
}

SpectralRepresentation spectral_decompose(const std::vector<double>& demeaned) {
    SpectralRepresentation rep;
    rep.coefficients = dft(demeaned);
    return rep;
}

ReturnSeries fft_surrogate(const ReturnSeries& z, std::uint64_t seed) {
    const std::size_t n = z.size();
    if (n < 2) throw InvalidInput("fft_surrogate: need at least 2 observations");

    const double mean = sample_mean(z.values);
    std::vector<double> demeaned(n);
    for (std::size_t t = 0; t < n; ++t) demeaned[t] = z.values[t] - mean;

    SpectralRepresentation rep = spectral_decompose(demeaned);
    auto& coef = rep.coefficients;

    Rng rng(seed);
    std::uniform_real_distribution<double> unif_phase(0.0, 2.0 * M_PI);
    // Randomize positive frequencies, mirror to the conjugate ones. Z_0 is
    // kept; for even N the Nyquist coefficient is kept unchanged so the
    // inverse stays real.
    const std::size_t half = (n - 1) / 2;
    for (std::size_t k = 1; k <= half; ++k) {
        const double mag = rep.magnitude(k);
        const double phi = unif_phase(rng);
        coef[k] = std::polar(mag, phi);
        coef[n - k] = std::conj(coef[k]);
    }

    const auto back = idft(coef);
    double worst_imag = 0.0;
    for (const auto& c : back) worst_imag = std::max(worst_imag, std::abs(c.imag()));
    const double scale = std::max(1.0, std::abs(coef[0]));
    if (worst_imag > 1e-9 * scale)
        throw Error("fft_surrogate: imaginary residue " + std::to_string(worst_imag) +
                    " after inverse transform");

    ReturnSeries out = z;
    for (std::size_t t = 0; t < n; ++t) out.values[t] = back[t].real() + mean;
    return out;
}

ReturnSeries make_surrogate(const ReturnSeries& z, SurrogateKind kind, std::uint64_t seed) {
    return kind == SurrogateKind::shuffle ? shuffle_surrogate(z, seed)
                                          : fft_surrogate(z, seed);
}

double quantile(std::vector<double> sample, double p) {
    if (sample.empty()) throw InvalidInput("quantile of empty sample");
    if (p < 0.0 || p > 1.0) throw InvalidInput("quantile probability outside [0,1]");
    std::sort(sample.begin(), sample.end());
    const std::size_t n = sample.size();
    const double h = (static_cast<double>(n) - 1.0) * p + 1.0; // 1-based
    const std::size_t lo = static_cast<std::size_t>(std::floor(h));
    if (lo >= n) return sample[n - 1];
    const double frac = h - static_cast<double>(lo);
    const double a = sample[lo - 1];
    const double b = sample[std::min(lo, n - 1)];
    return a + frac * (b - a);
}

NullEnvelope null_envelope(const ReturnSeries& z, SurrogateKind kind, int count,
                           std::uint64_t seed, const TdaConfig& tda, int workers,
                           double lower_prob, double upper_prob) {
    if (count < 2) throw InvalidInput("null_envelope: need at least 2 realizations");
    if (!(lower_prob < upper_prob))
        throw InvalidInput("null_envelope: lower_prob must be below upper_prob");
    tda.embedding.validate();
    tda.landscape.validate();

    const std::string stage = "surrogate." + to_string(kind);
    struct Slot {
        bool ok = false;
        LandscapeNormSeries norms;
        std::string error;
    };
    std::vector<Slot> slots(static_cast<std::size_t>(count));
    parallel_for(slots.size(), workers, [&](std::size_t j) {
        try {
            const ReturnSeries surr = make_surrogate(z, kind, derive_seed(seed, stage, j));
            slots[j].norms = l1_series(embed_windows(surr, tda.embedding), tda.landscape);
            slots[j].ok = true;
        } catch (const Error& e) {
            slots[j].error = e.what(); // realization aborted, counted below
        }
    });

    std::vector<const LandscapeNormSeries*> survivors;
    std::string first_error;
    for (const auto& s : slots) {
        if (s.ok) survivors.push_back(&s.norms);
        else if (first_error.empty()) first_error = s.error;
    }
    if (survivors.size() < 2)
        throw Error("null_envelope: fewer than 2 surviving realizations (" +
                    std::to_string(survivors.size()) + " of " + std::to_string(count) +
                    (first_error.empty() ? "" : "; first failure: " + first_error) + ")");

    NullEnvelope env;
    env.kind = kind;
    env.realizations = static_cast<int>(survivors.size());
    env.lower_prob = lower_prob;
    env.upper_prob = upper_prob;
    env.anchors = survivors.front()->anchors;
    const std::size_t n_windows = env.anchors.size();
    for (const auto* s : survivors)
        if (s->anchors != env.anchors)
            throw Error("null_envelope: surrogate window anchors diverged");

    env.mean.resize(n_windows);
    env.q05.resize(n_windows);
    env.q95.resize(n_windows);
    std::vector<double> column(survivors.size());
    for (std::size_t wdx = 0; wdx < n_windows; ++wdx) {
        for (std::size_t j = 0; j < survivors.size(); ++j)
            column[j] = survivors[j]->grid_l1[wdx];
        env.mean[wdx] =
            std::accumulate(column.begin(), column.end(), 0.0) / column.size();
        env.q05[wdx] = quantile(column, lower_prob);
        env.q95[wdx] = quantile(column, upper_prob);
    }
    return env;
}

ExceedanceReport exceedance(const LandscapeNormSeries& observed, const NullEnvelope& env) {
    ExceedanceReport rep;
    std::size_t i = 0, j = 0;
    while (i < observed.size() && j < env.anchors.size()) {
        if (observed.anchors[i] < env.anchors[j]) {
            ++i;
        } else if (env.anchors[j] < observed.anchors[i]) {
            ++j;
        } else {
            const double v = observed.grid_l1[i];
            ++rep.n_windows;
            if (v < env.q05[j]) ++rep.n_below;
            else if (v > env.q95[j]) ++rep.n_above;
            ++i;
            ++j;
        }
    }
    if (rep.n_windows == 0)
        throw InvalidInput("exceedance: observed series and envelope share no anchors");
    rep.frac_below = static_cast<double>(rep.n_below) / static_cast<double>(rep.n_windows);
    rep.frac_above = static_cast<double>(rep.n_above) / static_cast<double>(rep.n_windows);
    return rep;
}

} // namespace topovol
