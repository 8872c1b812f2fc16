#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "aplab/expsum.hpp"
#include "aplab/process.hpp"
#include "aplab/sigma.hpp"

namespace aplab {

// If E Z^{2n} <= C1 (C2 n)^n for all n >= 1 then
// E exp(delta Z^2) <= 1 + C1 / (1 - e delta C2) for delta < 1/(e C2).
double exp_square_moment_bound(double c1, double c2, double delta);

// sqrt(2p) (sum_i ||X_i^2||_{p/2} + cross_sum)^{1/2}; complex-valued inputs
// double the value.
double dedecker_rhs(const std::vector<double>& sq_norms, double cross_sum, double p,
                    bool complex_valued);

// C (1 - 2^{-(q-1)/p})^{-p}, the maximal-inequality multiplier for q > 1.
double moricz_constant(double C, double p, double q);

// q = 1 variant: C (2 + log2 m)^p * alpha_sum.
double moricz_log_bound(double C, double p, std::size_t m, double alpha_sum);

struct ConstantsReport {
    double epsilon = 0.0;    // rho2^2 / (6400 e fmax^2)
    double c_p = 0.0;        // sqrt([1 + 2 log(e^{p/2} + 3 nu(K)/rho1)] / epsilon)
    double orlicz_rhs = 0.0; // 3 nu(K) sigma_m / rho1
    double rho1 = 0.0, rho2 = 0.0, nu_k = 0.0, sigma_m = 0.0, fmax = 0.0, p = 0.0;
};

ConstantsReport orlicz_constants(double rho1, double rho2, double nu_k, double sigma_m,
                                 double fmax, double p);

// p-moment maximal constant 2 sqrt(2p) / (rho1^{1/p} rho2) * (1 - 2^{(1-p/2)/p})^{-1}
// for p > 2; the p = 2 route needs the extra log(4m) factor with constant
// 4 / (sqrt(rho1) rho2 log 2).
double pmoment_maximal_constant(double rho1, double rho2, double p);
double pmoment_maximal_constant_p2(double rho1, double rho2);

// Explicit constants for the sup-over-(n,m,T) exponential statistics on the
// integer-box family K_r = [-r, r]^s: the Orlicz mean of the whole sup is at
// most `bound` with exponent `epsilon`.
struct SupOrliczConstants {
    double epsilon = 0.0;
    double bound = 0.0;
    double q = 2.0;      // summability exponent used in the chain
    double c2 = 0.0;     // series constant entering the bound
};

SupOrliczConstants sup_orlicz_constants(const FreqTable& freqs, std::size_t m_trunc,
                                        double q = 2.0);
// centered (not necessarily symmetric) variant with the p-norm normalizer
SupOrliczConstants sup_orlicz_constants_pnorm(const FreqTable& freqs, std::size_t m_trunc,
                                              double p, double q = 2.0);

// ---------------------------------------------------------------------
// Monte Carlo bound checks
// ---------------------------------------------------------------------

enum class BoundId { Thm31Orlicz, Thm31Lp, Cor32, Cor33, Thm34, Cor37Sup, Thm38 };

const char* bound_id_name(BoundId id);
std::optional<BoundId> bound_id_from_name(const std::string& name);

struct SupTruncation {
    std::vector<std::pair<std::size_t, std::size_t>> ranges; // (n, m) with n < m
    std::vector<double> T_values;                            // each >= 1

    std::string describe() const;
};

struct BoundCheckConfig {
    BoundId id = BoundId::Thm31Orlicz;
    ProcessSpec process;
    FreqTable freqs;
    SigmaFamily family = SigmaFamily::Exponential;
    std::size_t n = 0;
    std::size_t m = 0;
    double T = 1.0;
    double p = 2.0;
    SupTruncation truncation; // Cor37Sup / Thm38 only
    std::size_t trials = 100;
    std::uint64_t seed = 0;
    std::size_t grid_pts = 2048; // inner sup grid per axis
};

struct BoundReport {
    std::string bound_id;
    double lhs = 0.0;
    double stderr_ = 0.0;
    double rhs = 0.0;
    double margin = 0.0; // rhs / lhs
    std::size_t trials = 0;
    std::uint64_t seed = 0;
    bool pass = false;
    std::string note;
    std::string truncation;
};

// Estimates the left side over `trials` sample paths (inner maxima taken at
// certified upper endpoints, so the check is conservative) and compares with
// the analytic right side; pass means lhs + 3 stderr <= rhs.
BoundReport check_bound(const BoundCheckConfig& cfg);

// E max_{t in [-pi,pi]} |sum_{k<=n} eps_k e^{ikt}| / sqrt(n log n)
struct GrowthRow {
    std::size_t n = 0;
    double ratio = 0.0;
    double stderr_ = 0.0;
};

std::vector<GrowthRow> salem_zygmund_growth(const std::vector<std::size_t>& n_grid,
                                            std::size_t trials, std::uint64_t seed);

// per-trial seed derivation shared by every Monte Carlo loop
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index);

} // namespace aplab
