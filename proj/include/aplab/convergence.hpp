#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "aplab/certified_sup.hpp"
#include "aplab/expsum.hpp"
#include "aplab/process.hpp"
#include "aplab/sigma.hpp"

namespace aplab {

struct GrowthCap {
    double C = 1.0;
    double gamma = 0.0;
};

// Positive nondecreasing weight sequence A_n, optionally with a declared
// polynomial growth cap A_n <= C n^gamma.
struct WeightSequence {
    std::function<double(std::int64_t)> eval; // 1-based
    std::optional<GrowthCap> cap;

    double at(std::int64_t n) const { return eval(n); }
    // positivity, monotonicity, and the cap, scanned on [1, N]
    void check_prefix(std::int64_t N) const;
};

struct BlockSchedule {
    std::vector<std::int64_t> kappa; // strictly increasing block ends
    std::vector<int> levels;         // dyadic levels, aligned with kappa
    bool truncated = false;          // horizon cut the final block
};

// kappa_1 = first n with A_n (log n)^p >= e; each next block extends while
// A_m (log m)^p <= e A_{kappa+1} (log(kappa+1))^p.  Throws when no kappa_1
// exists within the horizon.
BlockSchedule kappa_blocks(const WeightSequence& A, double p, std::int64_t N);

// Greedy dyadic-level blocks: each block holds A within one [2^l, 2^{l+1}).
// Throws when A never leaves the first level within the horizon.
BlockSchedule dyadic_blocks(const WeightSequence& A, std::int64_t N);

struct KappaPropertyReport {
    bool ok_i = true;
    bool ok_ii = true;
    bool ok_iii = true;
    double worst_slack = 0.0; // most negative margin seen, 0 when clean
    bool ok() const { return ok_i && ok_ii && ok_iii; }
};

// property check for the construction above, with relative slack 1e-9
KappaPropertyReport kappa_properties_check(const WeightSequence& A, double p, double gamma,
                                           const BlockSchedule& sched);

// ---------------------------------------------------------------------
// series conditions
// ---------------------------------------------------------------------

enum class SeriesId { Thm41, Thm42, Thm45, Thm51, Thm12 };
const char* series_id_name(SeriesId id);
std::optional<SeriesId> series_id_from_name(const std::string& name);

// envelope c n^{-a} (log n)^{-b} valid from index `from`
struct PowerLogEnvelope {
    double c = 1.0;
    double a = 0.0;
    double b = 0.0;
    std::int64_t from = 2;
};

struct SeriesInputs {
    std::function<double(std::int64_t)> alpha;     // series weights / ||X_n||^2
    std::function<double(std::int64_t)> weight_A;  // THM41 / THM42
    std::function<double(std::int64_t)> gamma_idx; // THM45 thresholds gamma_k
    std::function<double(std::int64_t)> log_arg;   // THM51/THM12 |j_n| per index
    double p = 2.0;
    double q = 1.0;

    std::optional<std::int64_t> finite_support;    // all inputs vanish beyond
    std::optional<PowerLogEnvelope> term_upper;    // envelope of the series terms
    std::optional<PowerLogEnvelope> term_lower;
    std::optional<PowerLogEnvelope> inner_lower;   // for ids with inner tail sums
};

enum class Verdict { Converges, Diverges, Undetermined };
const char* verdict_name(Verdict v);

struct SeriesReport {
    double partial = 0.0;
    std::optional<double> alt_partial; // THM42's second display
    std::optional<double> tail_bound;
    Verdict verdict = Verdict::Undetermined;
};

SeriesReport series_condition(SeriesId id, const SeriesInputs& in, std::int64_t horizon);

// 2 e^{1/p} [1 + p^{(p-1)/p} (p + gamma)] series^{1/p}
double series_maximal_constant(double p, double gamma, double series_value);

// ---------------------------------------------------------------------
// uniform-convergence diagnostics
// ---------------------------------------------------------------------

struct TailDiagnostic {
    std::vector<double> block_upper; // certified upper endpoints per block
    std::vector<double> block_lower;
    bool cauchy_consistent = false;  // last-quartile mean < first-quartile mean / 4
    SupStatus status = SupStatus::Converged;
};

// Certified sups of the block sums sum_{block} X_k e^{i<lambda_k, t>}.
TailDiagnostic uniform_tail_diagnostic(const SamplePath& path, const FreqTable& freqs,
                                       const Box& box, const BlockSchedule& schedule,
                                       double tol);

} // namespace aplab
