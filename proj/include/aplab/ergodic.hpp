#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "aplab/certified_sup.hpp"
#include "aplab/expsum.hpp"
#include "aplab/process.hpp"

namespace aplab {

// Commuting circle rotations y -> y + alpha_i (mod 1).
struct TorusRotationSystem {
    std::vector<double> alphas; // rotation numbers in [0, 1)

    explicit TorusRotationSystem(std::vector<double> a);
    int dim() const { return static_cast<int>(alphas.size()); }
};

// Finite Fourier sum f(y) = sum_m c_m e^{2 pi i m y} on the circle.
struct FourierFunction {
    std::vector<std::int64_t> modes;
    std::vector<cdouble> coeff;

    static FourierFunction from_modes(std::vector<std::pair<std::int64_t, cdouble>> entries);

    double l2_norm() const;
    cdouble evaluate(double y) const;
    std::size_t size() const { return modes.size(); }
};

// Nonnegative integer power vectors j_n in N^s.
struct PowerSchedule {
    std::vector<std::int64_t> flat; // row-major n x s
    int dim = 1;

    std::size_t count() const { return flat.size() / static_cast<std::size_t>(dim); }
    std::int64_t at(std::size_t k, int axis) const {
        return flat[k * static_cast<std::size_t>(dim) + static_cast<std::size_t>(axis)];
    }
    // <j_k, alpha> reduced mod 1
    double dot_alpha_mod1(const TorusRotationSystem& sys, std::size_t k) const;
    std::int64_t running_max_abs(std::size_t m) const; // |j_m|*
    void validate(int expected_dim) const;
};

// composition action: each mode picks up the phase e^{2 pi i m <j, alpha>}
FourierFunction apply_powers(const FourierFunction& f, std::span<const std::int64_t> j,
                             const TorusRotationSystem& sys);

struct TransferCheck {
    double lhs = 0.0; // || sum a_k V^{j_k} f ||_2, exact through the modes
    double rhs = 0.0; // ||f||_2 * certified upper of the schedule polynomial sup
    bool ok = false;  // lhs <= rhs + tol
    SupStatus status = SupStatus::Converged;
};

TransferCheck spectral_transfer_check(const std::vector<cdouble>& coeffs,
                                      const PowerSchedule& sched, const FourierFunction& f,
                                      const TorusRotationSystem& sys, double tol);

struct SeriesTrajectory {
    std::vector<std::size_t> N_grid;
    std::vector<double> eval_points;
    std::vector<std::vector<cdouble>> values; // values[gi][yi] = S_{N_grid[gi]}(y_i)
    std::vector<double> tail_l2;              // || sum_{n > N}^{Nmax} ... ||_2 per grid N
    std::ptrdiff_t monotone_tail_from = -1;   // grid index past which tails never increase
};

// S_N(y) = sum_{n<=N} X_n (V^{j_n} f)(y); tail norms computed exactly via
// mode arithmetic.
SeriesTrajectory weighted_series_partial_sums(const SamplePath& path, const PowerSchedule& sched,
                                              const FourierFunction& f,
                                              const TorusRotationSystem& sys,
                                              const std::vector<double>& eval_points,
                                              const std::vector<std::size_t>& N_grid);

// same series with weights X_n / n^{(2-q)/(2q)}, 1 <= q <= 2
SeriesTrajectory normalized_series(const SamplePath& path, const PowerSchedule& sched,
                                   const FourierFunction& f, const TorusRotationSystem& sys,
                                   double q, const std::vector<double>& eval_points,
                                   const std::vector<std::size_t>& N_grid);

// ---------------------------------------------------------------------
// Wiener-Wintner estimates on the Bernoulli shift
// ---------------------------------------------------------------------

// Centered function of a window of fair bits, |values| <= 1.
struct BernoulliWindowFunction {
    int window = 1;
    std::vector<double> table; // size 2^window, index bit b_1 is the low bit

    BernoulliWindowFunction(int window, std::vector<double> table);

    double sup_norm() const;
    // f(theta^offset bits): reads bits[offset .. offset+window-1] (0-based)
    double value(const std::vector<int>& bits, std::size_t offset) const;
};

// cylinder indicator centered by its probability: 1_{window = pattern} - 2^{-k}
BernoulliWindowFunction cylinder_function(int window, const std::vector<int>& pattern);

struct WwEstimate {
    double value = 0.0;
    double stderr_ = 0.0;
    std::size_t grid = 0; // sup grid actually used
};

// (E max_t |(1/n) sum_{k<=n} e^{ikt} f o theta^k|^p)^{1/p} by Monte Carlo;
// the inner sup is a dense-grid maximum with oversampling chosen from tol
// (relative bias ~ (pi/oversample)^2 / 2).
WwEstimate ww_norm(const BernoulliWindowFunction& f, std::size_t n, double p,
                   std::size_t trials, std::uint64_t seed, double tol = 5e-3);

// (C_p sqrt(log n)/n) (n ||f||_inf^2 + cross)^{1/2} with cross = 0 for
// window 1 and n*k*||f||_inf^2 for window k >= 2
double ww_norm_rhs(const BernoulliWindowFunction& f, std::size_t n, double p);

// the universal factor in front: C_p of the circle system, unit-modulus
// characters on [-pi, pi]
double ww_constant(double p);

struct ExponentFit {
    double alpha_hat = 0.0;
    double stderr_ = 0.0;
    std::vector<double> residuals;
};

// least squares of log norm ~ -alpha log n + const
ExponentFit ww_exponent_fit(const std::vector<std::size_t>& ns, const std::vector<double>& norms);

struct CylinderRatioCheck {
    std::vector<std::size_t> n_grid;
    std::vector<double> ratios; // ww_norm * n / sqrt(n log(n+1))
    double bound = 0.0;         // sqrt(k) * C_p
    double margin = 0.0;        // bound / max ratio
    bool pass = false;
};

CylinderRatioCheck cylinder_ratio_check(const BernoulliWindowFunction& f, const std::vector<std::size_t>& n_grid,
                         double p, std::size_t trials, std::uint64_t seed);

} // namespace aplab
