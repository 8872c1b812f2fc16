#pragma once

#include <cstdint>
#include <vector>

#include "aplab/expsum.hpp"

namespace aplab {

enum class SupStatus { Converged, BudgetExhausted };

struct SupOptions {
    double tol = 1e-6;                  // absolute bracket width target
    std::uint64_t max_evals = 1000000;  // cell evaluation budget
    std::size_t seed_grid = 33;         // warm-start grid per axis (0 = none)
    bool use_curvature = true;          // curvature bound on |P|^2 next to the Lipschitz slack
};

struct SupResult {
    CertifiedBound bound;
    SupStatus status = SupStatus::Converged;
    std::vector<double> argmax; // best point found; |P(argmax)| == bound.lower
    std::uint64_t evals = 0;
};

// Two-sided bracket for sup_{t in box} |P(t)| by best-first subdivision,
// splitting the widest axis of the worst cell.
SupResult certified_sup(const ExpSum& p, const Box& box, const SupOptions& opts = {});

struct RunningMaxResult {
    CertifiedBound bound;
    SupStatus status = SupStatus::Converged;
    std::vector<double> argmax;
    std::size_t arg_prefix = 0; // 1-based prefix attaining the running max
    std::uint64_t evals = 0;
};

// Bracket for max_{1<=l<=m} sup_{box} |P_l|.
RunningMaxResult running_partial_max(const ExpSum& p, std::size_t m, const Box& box,
                                     const SupOptions& opts = {});

// Upper bound for max_{l<=m} sup_{box} |P_l'| (one-dimensional sums):
// 3 m max_{k<=m}|lambda_k| * M in general, 2 lambda_m * M when the
// frequencies are positive nondecreasing, with M a certified upper bound of
// the running partial-sum max.
struct DerivativeBound {
    double bound = 0.0;
    CertifiedBound partial_max;
    SupStatus status = SupStatus::Converged;
};

DerivativeBound derivative_sup_bound(const ExpSum& p, std::size_t m, const Box& box,
                                     bool monotone, double tol);

// dense-grid sample of max_{l<=m} sup |P_l'|, the companion check
double sampled_derivative_max(const ExpSum& p, std::size_t m, const Box& box,
                              std::size_t grid_pts);

// Rectangle around an approximate running-max argmax with half-widths
// min{1/(6 s m |lambda_m^(i)|*), T} (monotone: min{1/(4 s lambda_m^(i)), T});
// a zero-frequency axis gets the full box width.
Rectangle witness_rectangle(const ExpSum& p, std::size_t m, const Box& box, double tol,
                            bool monotone = false);

// same rectangle built around an already-computed running-max argmax
Rectangle witness_rectangle_from(const ExpSum& p, std::size_t m, const Box& box,
                                 const RunningMaxResult& run, bool monotone = false);

struct WitnessCheck {
    double min_ratio = 0.0; // min over samples of runmax(t) / M_lower
    bool ok = false;        // min_ratio >= 1/2 - tol
    double m_lower = 0.0;
    std::size_t samples = 0;
};

// m_lower_hint > 0 skips the internal certified run; it must be a certified
// lower bound of the running partial-sum max.
WitnessCheck witness_halfmax_check(const ExpSum& p, std::size_t m, const Box& box,
                                   const Rectangle& rect, double tol,
                                   std::size_t n_samples = 200, std::uint64_t seed = 1,
                                   double m_lower_hint = 0.0);

} // namespace aplab
