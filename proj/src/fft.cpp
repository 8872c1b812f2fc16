#include "aplab/fft.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace aplab {

void fft_radix2(std::vector<std::complex<double>>& a, bool forward) {
    const std::size_t n = a.size();
    if (n == 0 || (n & (n - 1)) != 0) {
        throw std::invalid_argument("fft size must be a power of two");
    }
    for (std::size_t i = 1, j = 0; i < n; ++i) {
        std::size_t bit = n >> 1;
        for (; j & bit; bit >>= 1) j ^= bit;
        j ^= bit;
        if (i < j) std::swap(a[i], a[j]);
    }
    const double sign = forward ? -1.0 : 1.0;
    for (std::size_t len = 2; len <= n; len <<= 1) {
        const double ang = sign * 2.0 * std::numbers::pi / static_cast<double>(len);
        const std::complex<double> wl(std::cos(ang), std::sin(ang));
        for (std::size_t i = 0; i < n; i += len) {
            std::complex<double> w(1.0, 0.0);
            for (std::size_t j = 0; j < len / 2; ++j) {
                const auto u = a[i + j];
                const auto v = a[i + j + len / 2] * w;
                a[i + j] = u + v;
                a[i + j + len / 2] = u - v;
                w *= wl;
            }
        }
    }
}

std::size_t next_pow2(std::size_t n) {
    std::size_t p = 1;
    while (p < n) p <<= 1;
    return p;
}

std::vector<std::complex<double>> eval_on_circle_grid(
    const std::vector<std::complex<double>>& coeffs, std::size_t n) {
    if (n < coeffs.size()) {
        throw std::invalid_argument("grid must be at least as fine as the coefficient count");
    }
    std::vector<std::complex<double>> a(n, std::complex<double>(0.0, 0.0));
    for (std::size_t k = 0; k < coeffs.size(); ++k) a[k] = coeffs[k];
    fft_radix2(a, false);
    return a;
}

CircleSupBracket circle_sup_bracket(const std::vector<std::complex<double>>& coeffs_by_freq,
                                    double T, std::size_t min_grid) {
    if (!(T > 0.0)) throw std::invalid_argument("circle_sup_bracket: T must be positive");
    CircleSupBracket out;
    if (coeffs_by_freq.empty()) return out;
    const std::size_t N = next_pow2(std::max({min_grid, std::size_t{64}, 4 * coeffs_by_freq.size()}));
    out.grid = N;
    double L = 0.0;
    for (std::size_t j = 0; j < coeffs_by_freq.size(); ++j) {
        L += std::abs(coeffs_by_freq[j]) * static_cast<double>(j);
    }
    const auto values = eval_on_circle_grid(coeffs_by_freq, N);
    const double h = 2.0 * std::numbers::pi / static_cast<double>(N);
    const bool full = T >= std::numbers::pi;
    double best = 0.0;
    for (std::size_t j = 0; j < N; ++j) {
        if (!full) {
            const double t = j <= N / 2 ? static_cast<double>(j) * h
                                        : static_cast<double>(j) * h - 2.0 * std::numbers::pi;
            if (std::abs(t) > T) continue;
        }
        best = std::max(best, std::norm(values[j]));
    }
    out.lower = std::sqrt(best);
    out.upper = out.lower + L * 0.5 * h;
    return out;
}

} // namespace aplab
