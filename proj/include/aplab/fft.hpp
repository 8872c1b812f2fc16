#pragma once

#include <complex>
#include <cstddef>
#include <vector>

namespace aplab {

// In-place radix-2 transform; n must be a power of two.
// forward=false computes sum_k c[k] e^{+2*pi*i*jk/n} (no 1/n factor), which is
// what uniform-grid evaluation of integer-frequency sums needs.
void fft_radix2(std::vector<std::complex<double>>& a, bool forward);

std::size_t next_pow2(std::size_t n);

// Values of P(t) = sum_k coeffs[k] e^{i (k0 + k) t} on the uniform grid
// t_j = 2*pi*j/n, j = 0..n-1.  The leading-frequency offset k0 only rotates
// phases, so |P| on the grid is independent of it and it is ignored here.
std::vector<std::complex<double>> eval_on_circle_grid(
    const std::vector<std::complex<double>>& coeffs, std::size_t n);

// Certified bracket for sup_{|t| <= T} |sum_j coeffs[j] e^{ijt}| via a dense
// FFT grid plus Lipschitz slack (L = sum_j |c_j| j).  For T >= pi the sup is
// taken over the full period.
struct CircleSupBracket {
    double lower = 0.0;
    double upper = 0.0;
    std::size_t grid = 0;
};

CircleSupBracket circle_sup_bracket(const std::vector<std::complex<double>>& coeffs_by_freq,
                                    double T, std::size_t min_grid = 4096);

} // namespace aplab
