#pragma once

#include <cmath>
#include <cstdint>

namespace conekit {

// Counter-based random stream: the generator state is a pure function of
// (seed, stream, index), so sample i of stream s can be regenerated from
// scratch by any thread.  Within one stream the sequence is splitmix64.
class RngStream {
public:
    static constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ull;

    static std::uint64_t mix64(std::uint64_t z) {
        z ^= z >> 30;
        z *= 0xBF58476D1CE4E5B9ull;
        z ^= z >> 27;
        z *= 0x94D049BB133111EBull;
        z ^= z >> 31;
        return z;
    }

    static RngStream at(std::uint64_t seed, std::uint64_t stream, std::uint64_t index) {
        RngStream r;
        r.state_ = mix64(seed + kGolden) ^ mix64(stream + 0xD1B54A32D192ED03ull) ^
                   mix64(index + 0x8CB92BA72F3D8DD7ull);
        return r;
    }

    std::uint64_t next_u64() {
        state_ += kGolden;
        return mix64(state_);
    }

    // uniform on (0,1), never exactly 0 or 1
    double u01() {
        return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
    }

    double uniform(double a, double b) { return a + (b - a) * u01(); }

    // Box-Muller; consumes exactly two uniforms
    double normal() {
        double u1 = u01(), u2 = u01();
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586476925287 * u2);
    }

    // Marsaglia-Tsang, boosted for shape < 1.  rate = 1.
    double gamma(double shape) {
        if (shape < 1.0) {
            double u = u01();
            if (u < 1e-12) u = 1e-12;
            return gamma(shape + 1.0) * std::pow(u, 1.0 / shape);
        }
        const double d = shape - 1.0 / 3.0;
        const double c = 1.0 / std::sqrt(9.0 * d);
        for (;;) {
            double x = normal();
            double v = 1.0 + c * x;
            if (v <= 0.0) continue;
            v = v * v * v;
            double u = u01();
            if (std::log(u) < 0.5 * x * x + d - d * v + d * std::log(v)) return d * v;
        }
    }

    double beta(double a, double b) {
        double x = gamma(a);
        double y = gamma(b);
        return x / (x + y);
    }

    // one-sided exponential with given rate
    double exponential(double rate) { return -std::log(u01()) / rate; }

    // two-sided exponential (Laplace), density rate/2 * exp(-rate|z|)
    double laplace(double rate) {
        double u = u01();
        return (u < 0.5) ? std::log(2.0 * u) / rate : -std::log(2.0 * (1.0 - u)) / rate;
    }

private:
    std::uint64_t state_ = 0;
};

}  // namespace conekit
