#pragma once

#include <cstdint>
#include <cmath>
#include <complex>
#include <numbers>

namespace aplab {

// Stateless counter-based generator.  Every draw is a pure function of
// (seed, stream, counter), so trials with distinct streams can be produced
// in any order or on any number of threads and still agree bit for bit.
class CounterRng {
public:
    CounterRng(std::uint64_t seed, std::uint64_t stream = 0)
        : seed_(seed), stream_(stream) {}

    CounterRng stream(std::uint64_t sub) const {
        return CounterRng(mix(seed_ ^ mix(sub + 0x7fb5d329728ea185ull)), sub);
    }

    std::uint64_t next_u64() {
        std::uint64_t z = seed_ + 0x9e3779b97f4a7c15ull * (counter_++ + 1);
        z ^= mix(stream_ + 0x2545f4914f6cdd1dull);
        return mix(z);
    }

    // uniform in [0, 1)
    double next_unit() {
        return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    }

    // uniform in (0, 1], safe as a log argument
    double next_unit_pos() {
        return (static_cast<double>(next_u64() >> 11) + 1.0) * 0x1.0p-53;
    }

    double next_sign() { return (next_u64() & 1u) ? 1.0 : -1.0; }

    bool next_bit() { return (next_u64() & 1u) != 0; }

    double next_uniform(double lo, double hi) {
        return lo + (hi - lo) * next_unit();
    }

    // standard real normal, Box-Muller with a cached partner
    double next_gauss() {
        if (have_cached_) {
            have_cached_ = false;
            return cached_;
        }
        const double u1 = next_unit_pos();
        const double u2 = next_unit();
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double a = 2.0 * std::numbers::pi * u2;
        cached_ = r * std::sin(a);
        have_cached_ = true;
        return r * std::cos(a);
    }

    // standard complex normal: E|z|^2 = 1
    std::complex<double> next_cgauss() {
        const double re = next_gauss();
        const double im = next_gauss();
        return {re * std::numbers::sqrt2 / 2.0, im * std::numbers::sqrt2 / 2.0};
    }

    // unit-modulus phase with uniform angle
    std::complex<double> next_phase() {
        const double a = 2.0 * std::numbers::pi * next_unit();
        return {std::cos(a), std::sin(a)};
    }

    static std::uint64_t mix(std::uint64_t z) {
        z += 0x9e3779b97f4a7c15ull;
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
        return z ^ (z >> 31);
    }

private:
    std::uint64_t seed_;
    std::uint64_t stream_;
    std::uint64_t counter_ = 0;
    double cached_ = 0.0;
    bool have_cached_ = false;
};

} // namespace aplab
