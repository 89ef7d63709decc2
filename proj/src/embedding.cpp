#include "topovol/embedding.hpp"
#include "topovol/errors.hpp"

namespace topovol {

void EmbeddingConfig::validate() const {
    if (dimension < 1) throw InvalidInput("embedding dimension must be >= 1");
    if (delay < 1) throw InvalidInput("embedding delay must be >= 1");
    if (window < 2) throw InvalidInput("sliding window must be >= 2");
    if (stride < 1) throw InvalidInput("window stride must be >= 1");
}

DelayVectors delay_embed(const ReturnSeries& s, std::size_t m, std::size_t d) {
    if (m < 1 || d < 1) throw InvalidInput("delay embedding needs m >= 1 and d >= 1");
    const std::size_t need = (m - 1) * d + 1;
    if (s.size() < need)
        throw InvalidInput("series too short for delay embedding: need at least " +
                           std::to_string(need) + " observations, have " +
                           std::to_string(s.size()));
    DelayVectors out;
    out.dim = m;
    out.delay = d;
    out.scalar_dates = s.dates;
    const std::size_t count = s.size() - (m - 1) * d;
    out.coords.resize(count * m);
    for (std::size_t t = 0; t < count; ++t)
        for (std::size_t j = 0; j < m; ++j)
            out.coords[t * m + j] = s.values[t + j * d];
    return out;
}

std::vector<PointCloud> sliding_windows(const DelayVectors& v, std::size_t w,
                                        std::size_t stride) {
    if (w < 1) throw InvalidInput("window length must be >= 1");
    if (stride < 1) throw InvalidInput("window stride must be >= 1");
    const std::size_t count = v.count();
    if (w > count)
        throw InvalidInput("window length " + std::to_string(w) +
                           " exceeds vector count " + std::to_string(count));
    std::vector<PointCloud> clouds;
    for (std::size_t t = 0; t + w <= count; t += stride) {
        PointCloud c;
        c.dim = v.dim;
        c.coords.assign(v.coords.begin() + t * v.dim,
                        v.coords.begin() + (t + w) * v.dim);
        // last scalar consumed by the window: index t + w - 1 + (m-1)*d
        c.anchor_date = v.scalar_dates[t + w - 1 + (v.dim - 1) * v.delay];
        clouds.push_back(std::move(c));
    }
    return clouds;
}

std::vector<PointCloud> embed_windows(const ReturnSeries& s, const EmbeddingConfig& cfg) {
    cfg.validate();
    return sliding_windows(delay_embed(s, cfg.dimension, cfg.delay), cfg.window,
                           cfg.stride);
}

} // namespace topovol
