#include "conekit/mc.hpp"

#include <cmath>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace conekit {

std::vector<detail::ChunkStat> mc_chunk_stats(std::uint64_t n, std::uint64_t chunk, Exec exec,
                                              const std::function<double(std::uint64_t)>& term) {
    if (chunk == 0) throw std::invalid_argument("mc: chunk size must be positive");
    const std::uint64_t nchunks = (n + chunk - 1) / chunk;
    std::vector<detail::ChunkStat> stats(nchunks);

    auto run_chunk = [&](std::uint64_t c) {
        const std::uint64_t lo = c * chunk;
        const std::uint64_t hi = std::min(n, lo + chunk);
        detail::ChunkStat s;
        for (std::uint64_t i = lo; i < hi; ++i) {
            const double t = term(i);
            s.sum += t;
            s.sumsq += t * t;
            s.max_abs = std::max(s.max_abs, std::abs(t));
        }
        stats[c] = s;
    };

    if (exec == Exec::OpenMP) {
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic, 1)
        for (std::int64_t c = 0; c < static_cast<std::int64_t>(nchunks); ++c)
            run_chunk(static_cast<std::uint64_t>(c));
#else
        for (std::uint64_t c = 0; c < nchunks; ++c) run_chunk(c);
#endif
    } else {
        for (std::uint64_t c = 0; c < nchunks; ++c) run_chunk(c);
    }
    return stats;
}

namespace {

McEstimate combine(const std::vector<detail::ChunkStat>& stats, std::uint64_t n) {
    double sum = 0.0, sumsq = 0.0;
    for (const auto& s : stats) {   // fixed order, independent of thread count
        sum += s.sum;
        sumsq += s.sumsq;
    }
    McEstimate e;
    e.samples_used = n;
    if (n == 0) return e;
    e.value = sum / static_cast<double>(n);
    if (n > 1) {
        const double var = std::max(0.0, sumsq - static_cast<double>(n) * e.value * e.value) /
                           static_cast<double>(n - 1);
        e.stderr_ = std::sqrt(var / static_cast<double>(n));
    }
    return e;
}

// mean over the first m samples, m a multiple of the chunk size
double prefix_mean(const std::vector<detail::ChunkStat>& stats, std::uint64_t chunk,
                   std::uint64_t m) {
    const std::uint64_t nc = (m + chunk - 1) / chunk;
    double sum = 0.0;
    for (std::uint64_t c = 0; c < nc && c < stats.size(); ++c) sum += stats[c].sum;
    return m > 0 ? sum / static_cast<double>(m) : 0.0;
}

}  // namespace

McEstimate mc_mean(std::uint64_t n, const McConfig& cfg, Exec exec,
                   const std::function<double(std::uint64_t)>& term) {
    auto stats = mc_chunk_stats(n, cfg.chunk, exec, term);
    return combine(stats, n);
}

GrowthCheck mc_mean_growth(std::uint64_t n, const McConfig& cfg, Exec exec,
                           const std::function<double(std::uint64_t)>& term,
                           double ratio_threshold) {
    // round n up to a chunk multiple so the n-prefix is chunk-aligned
    const std::uint64_t chunk = cfg.chunk;
    const std::uint64_t n_al = ((n + chunk - 1) / chunk) * chunk;
    const std::uint64_t total = 4 * n_al;
    auto stats = mc_chunk_stats(total, chunk, exec, term);

    GrowthCheck g;
    g.at_4n = combine(stats, total);
    g.mean_n = prefix_mean(stats, chunk, n_al);
    g.mean_2n = prefix_mean(stats, chunk, 2 * n_al);
    g.mean_4n = g.at_4n.value;
    if (g.mean_n != 0.0) g.growth = g.mean_4n / g.mean_n;
    double max_abs = 0.0, abs_sum = 0.0;
    for (const auto& s : stats) {
        max_abs = std::max(max_abs, s.max_abs);
        abs_sum += s.sum;  // terms are nonnegative throughout this library
    }
    g.max_fraction = (abs_sum > 0.0) ? max_abs / std::abs(abs_sum) : 0.0;
    g.diverged = std::isfinite(g.mean_4n)
                     ? (g.growth > ratio_threshold || g.max_fraction > 0.5)
                     : true;
    g.at_4n.diverged = g.diverged;
    return g;
}

double mc_ess(const McEstimate& e) {
    if (e.samples_used < 2) return static_cast<double>(e.samples_used);
    const double n = static_cast<double>(e.samples_used);
    const double mean = e.value;
    const double var = e.stderr_ * e.stderr_ * n;       // sample variance
    const double meansq = var * (n - 1.0) / n + mean * mean;  // E[t^2]
    if (meansq <= 0.0) return n;
    return n * mean * mean / meansq;
}

}  // namespace conekit
