#pragma once

#include <cstdint>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

namespace conekit {

struct McConfig {
    std::uint64_t samples = 100000;
    std::uint64_t seed = 20250809;
    std::uint64_t chunk = 8192;           // reduction block size; fixes summation order
    std::uint64_t max_rejections = 1000000;

    McConfig with_samples(std::uint64_t n) const {
        McConfig c = *this;
        c.samples = n;
        return c;
    }
};

struct McEstimate {
    double value = 0.0;
    double stderr_ = 0.0;
    std::uint64_t samples_used = 0;
    bool diverged = false;
    std::string warning;   // set e.g. when the effective sample size collapses
};

enum class Exec { Serial, OpenMP };

namespace detail {
struct ChunkStat {
    double sum = 0.0;
    double sumsq = 0.0;
    double max_abs = 0.0;
};
}  // namespace detail

// Deterministic chunked mean of term(i) for i in [0, n).  Chunks are filled in
// index order and combined in chunk order, so Serial and OpenMP execution give
// bit-identical results for a fixed chunk size.
std::vector<detail::ChunkStat> mc_chunk_stats(std::uint64_t n, std::uint64_t chunk, Exec exec,
                                              const std::function<double(std::uint64_t)>& term);

McEstimate mc_mean(std::uint64_t n, const McConfig& cfg, Exec exec,
                   const std::function<double(std::uint64_t)>& term);

// Growth diagnostic: evaluates the running mean at n and 4n over one shared
// stream (the first n terms are a prefix of the 4n).  `diverged` is set when
// the estimate grows by more than `ratio_threshold`, or when a single term
// dominates the sum (the running mean of an infinite-mean integrand is
// carried by its largest draw, which the plain ratio can miss).
struct GrowthCheck {
    McEstimate at_4n;      // full-budget estimate (returned to callers)
    double mean_n = 0.0;
    double mean_2n = 0.0;
    double mean_4n = 0.0;
    double growth = 1.0;   // mean_4n / mean_n (1 when mean_n == 0)
    double max_fraction = 0.0;  // largest |term| over the total sum
    bool diverged = false;
    bool monotone_growth() const { return mean_2n > mean_n && mean_4n > mean_2n; }
};

GrowthCheck mc_mean_growth(std::uint64_t n, const McConfig& cfg, Exec exec,
                           const std::function<double(std::uint64_t)>& term,
                           double ratio_threshold = 1.5);

// effective sample size of a nonnegative-weight mean, from its moments
double mc_ess(const McEstimate& e);

}  // namespace conekit
