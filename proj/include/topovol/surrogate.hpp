#ifndef TOPOVOL_SURROGATE_HPP
#define TOPOVOL_SURROGATE_HPP

#include "topovol/embedding.hpp"
#include "topovol/landscape.hpp"
#include "topovol/series.hpp"

#include <complex>
#include <cstdint>
#include <string>
#include <vector>

namespace topovol {

enum class SurrogateKind { shuffle, fft };

std::string to_string(SurrogateKind kind);
SurrogateKind surrogate_kind_from_string(const std::string& s);

// Embedding + landscape parameters shared by the observed pipeline and
// every surrogate realization, so the statistics stay commensurable.
struct TdaConfig {
    EmbeddingConfig embedding;
    LandscapeConfig landscape;
};

// Uniform random permutation of {0..n-1} (Fisher-Yates).
std::vector<std::size_t> random_permutation(std::size_t n, std::uint64_t seed);

// values[i] <- values[perm[i]], timestamps unchanged. Exposed so tests can
// force specific permutations (identity, reversal).
ReturnSeries apply_permutation(const ReturnSeries& s,
                               const std::vector<std::size_t>& perm);

// Shuffle surrogate: destroys all temporal ordering, preserves the value
// multiset exactly.
ReturnSeries shuffle_surrogate(const ReturnSeries& z, std::uint64_t seed);

// Discrete Fourier transform Z_k = sum_t x_t e^{-2 pi i k t / N} and its
// inverse (FFTW behind the scenes; idft includes the 1/N factor).
std::vector<std::complex<double>> dft(const std::vector<double>& x);
std::vector<std::complex<double>> idft(const std::vector<std::complex<double>>& z);

// |Z_k|^2 of a real series.
std::vector<double> periodogram(const std::vector<double>& x);

// DFT of the demeaned series together with phase bookkeeping; used by the
// FFT surrogate and by spectrum-preservation checks.
struct SpectralRepresentation {
    std::vector<std::complex<double>> coefficients; // Z_k, k = 0..N-1
    double magnitude(std::size_t k) const { return std::abs(coefficients[k]); }
    double phase(std::size_t k) const { return std::arg(coefficients[k]); }
};

SpectralRepresentation spectral_decompose(const std::vector<double>& demeaned);

// Phase-randomized surrogate: keeps |Z_k| (hence the power spectrum), draws
// phases Unif(0,2pi) at positive frequencies, enforces conjugate symmetry,
// keeps Z_0 and (for even N) the Nyquist coefficient, restores the mean.
ReturnSeries fft_surrogate(const ReturnSeries& z, std::uint64_t seed);

ReturnSeries make_surrogate(const ReturnSeries& z, SurrogateKind kind,
                            std::uint64_t seed);

// Linear-interpolation empirical quantile with plotting position
// h = (n-1)p + 1. Input need not be sorted.
double quantile(std::vector<double> sample, double p);

struct NullEnvelope {
    std::vector<Date> anchors;
    std::vector<double> mean;
    std::vector<double> q05;
    std::vector<double> q95;
    SurrogateKind kind = SurrogateKind::shuffle;
    int realizations = 0; // surviving realizations the quantiles summarize
    double lower_prob = 0.05;
    double upper_prob = 0.95;
};

// Runs `count` surrogate realizations of z through the full embedding ->
// persistence -> landscape pipeline and summarizes the per-window norm
// distribution. Each realization gets a stable derived seed, so individual
// realizations can be replayed and worker count cannot change the result.
NullEnvelope null_envelope(const ReturnSeries& z, SurrogateKind kind, int count,
                           std::uint64_t seed, const TdaConfig& tda,
                           int workers = 1, double lower_prob = 0.05,
                           double upper_prob = 0.95);

struct ExceedanceReport {
    std::size_t n_windows = 0;
    std::size_t n_below = 0;
    std::size_t n_above = 0;
    double frac_below = 0.0;
    double frac_above = 0.0;
};

// Counts windows where the observed norm leaves the envelope, over the
// inner join of observed anchors and envelope anchors.
ExceedanceReport exceedance(const LandscapeNormSeries& observed,
                            const NullEnvelope& env);

} // namespace topovol

#endif
