#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace polisim {

// Single per-run random stream. Every stochastic decision in a run pulls from
// one stream in a fixed, documented order, and draw_count() is stamped into
// the run log so a divergence between two executions can be attributed to a
// specific draw. Distributions are implemented here (not via <random>
// distribution adaptors) so the number of engine draws per call is fixed:
//   uniform01 / uniform_int / bernoulli / gumbel : 1 draw
//   normal (Box-Muller, no caching)              : 2 draws
class RngStream {
public:
    explicit RngStream(std::uint64_t seed) : engine_(seed), seed_(seed) {}

    std::uint64_t next_u64() {
        ++draws_;
        return engine_();
    }

    // [0, 1)
    double uniform01() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    // (0, 1]
    double uniform01_open() {
        return static_cast<double>((next_u64() >> 11) + 1) * 0x1.0p-53;
    }

    // [0, n); n must be > 0. Modulo bias is negligible for the small n used
    // here and keeps the call at exactly one draw.
    std::uint64_t uniform_int(std::uint64_t n) { return next_u64() % n; }

    bool bernoulli(double p) { return uniform01() < p; }

    double normal(double mean, double sd) {
        const double u1 = uniform01_open();
        const double u2 = uniform01();
        const double r = std::sqrt(-2.0 * std::log(u1));
        return mean + sd * r * std::cos(2.0 * 3.14159265358979323846 * u2);
    }

    double gumbel() { return -std::log(-std::log(uniform01_open())); }

    std::uint64_t draw_count() const { return draws_; }
    std::uint64_t seed() const { return seed_; }

private:
    std::mt19937_64 engine_;
    std::uint64_t draws_ = 0;
    std::uint64_t seed_ = 0;
};

} // namespace polisim
