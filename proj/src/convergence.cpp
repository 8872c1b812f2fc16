#include "aplab/convergence.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "aplab/fft.hpp"

namespace aplab {

namespace {
constexpr double kE = std::numbers::e;
constexpr double kSlack = 1e-9;
} // namespace

void WeightSequence::check_prefix(std::int64_t N) const {
    double prev = 0.0;
    for (std::int64_t n = 1; n <= N; ++n) {
        const double v = at(n);
        if (!(v > 0.0) || !std::isfinite(v)) {
            throw std::invalid_argument("WeightSequence: values must be positive and finite");
        }
        if (v < prev * (1.0 - 1e-12)) {
            throw std::invalid_argument("WeightSequence: sequence must be nondecreasing");
        }
        if (cap && v > cap->C * std::pow(static_cast<double>(n), cap->gamma) * (1.0 + 1e-9)) {
            throw std::invalid_argument("WeightSequence: declared growth cap violated");
        }
        prev = v;
    }
}

namespace {

double kappa_score(const WeightSequence& A, double p, std::int64_t n) {
    return A.at(n) * std::pow(std::log(static_cast<double>(n)), p);
}

} // namespace

BlockSchedule kappa_blocks(const WeightSequence& A, double p, std::int64_t N) {
    if (!(p > 0.0)) throw std::invalid_argument("kappa_blocks: p must be positive");
    if (N < 2) throw std::invalid_argument("kappa_blocks: horizon too small");

    std::int64_t k1 = 0;
    for (std::int64_t n = 2; n <= N; ++n) {
        if (kappa_score(A, p, n) >= kE) {
            k1 = n;
            break;
        }
    }
    if (k1 == 0) {
        throw std::runtime_error("kappa_blocks: no starting index reaches the threshold within the horizon");
    }

    BlockSchedule sched;
    sched.kappa.push_back(k1);
    while (true) {
        const std::int64_t prev = sched.kappa.back();
        if (prev >= N) {
            sched.truncated = true;
            break;
        }
        const double cap = kE * kappa_score(A, p, prev + 1);
        std::int64_t end = prev + 1; // always admissible
        while (end + 1 <= N && kappa_score(A, p, end + 1) <= cap) ++end;
        sched.kappa.push_back(end);
        if (end >= N) {
            sched.truncated = true;
            break;
        }
    }
    return sched;
}

BlockSchedule dyadic_blocks(const WeightSequence& A, std::int64_t N) {
    if (N < 1) throw std::invalid_argument("dyadic_blocks: horizon too small");
    if (A.at(1) < 1.0) throw std::invalid_argument("dyadic_blocks: need A_1 >= 1");

    auto level_of = [](double v) {
        int l = static_cast<int>(std::floor(std::log2(v)));
        while (std::pow(2.0, l) > v) --l;
        while (std::pow(2.0, l + 1) <= v) ++l;
        return l;
    };

    BlockSchedule sched;
    std::int64_t start = 1;
    while (start <= N) {
        const int lvl = level_of(A.at(start));
        const double top = std::pow(2.0, lvl + 1);
        std::int64_t end = start;
        while (end + 1 <= N && A.at(end + 1) < top) ++end;
        sched.kappa.push_back(end);
        sched.levels.push_back(lvl);
        if (end == N) {
            sched.truncated = true;
            break;
        }
        start = end + 1;
    }
    if (sched.kappa.size() == 1 && sched.truncated) {
        throw std::runtime_error("dyadic_blocks: sequence stays within one dyadic level on the horizon");
    }
    return sched;
}

KappaPropertyReport kappa_properties_check(const WeightSequence& A, double p, double gamma,
                                           const BlockSchedule& sched) {
    KappaPropertyReport rep;
    auto note = [&rep](bool& flag, double margin) {
        if (margin < -kSlack) flag = false;
        rep.worst_slack = std::min(rep.worst_slack, margin);
    };
    for (std::size_t v = 1; v < sched.kappa.size(); ++v) {
        const std::int64_t kn = sched.kappa[v - 1];
        const std::int64_t kn1 = sched.kappa[v];
        const double base = kappa_score(A, p, kn + 1);
        const double nd = static_cast<double>(v);

        // (i) A_{k_{n+1}} (log k_{n+1})^p <= e A_{k_n+1} (log(k_n+1))^p, and
        //     the next index would break the cap (skipped on a truncated tail)
        {
            const double lhs = kappa_score(A, p, kn1);
            note(rep.ok_i, (kE * base - lhs) / std::max(kE * base, 1e-300));
            const bool last = v + 1 == sched.kappa.size();
            if (!(last && sched.truncated)) {
                const double next = kappa_score(A, p, kn1 + 1);
                note(rep.ok_i, (next - kE * base) / std::max(next, 1e-300));
            }
        }
        // (ii) A_{k_{n+1}} <= e A_{k_n+1} and A_{k_{n+1}} (log(k_n+1))^p >= e^n
        {
            note(rep.ok_ii, (kE * A.at(kn + 1) - A.at(kn1)) / std::max(kE * A.at(kn + 1), 1e-300));
            const double lhs = A.at(kn1) * std::pow(std::log(static_cast<double>(kn + 1)), p);
            const double rhs = std::exp(nd);
            note(rep.ok_ii, (lhs - rhs) / std::max(lhs, 1e-300));
        }
        // (iii) (p + gamma) log(k_n + 1) >= n
        {
            const double lhs = (p + gamma) * std::log(static_cast<double>(kn + 1));
            note(rep.ok_iii, (lhs - nd) / std::max(lhs, 1e-300));
        }
    }
    return rep;
}

const char* series_id_name(SeriesId id) {
    switch (id) {
        case SeriesId::Thm41: return "THM41";
        case SeriesId::Thm42: return "THM42";
        case SeriesId::Thm45: return "THM45";
        case SeriesId::Thm51: return "THM51";
        case SeriesId::Thm12: return "THM12";
    }
    return "?";
}

std::optional<SeriesId> series_id_from_name(const std::string& name) {
    for (SeriesId id : {SeriesId::Thm41, SeriesId::Thm42, SeriesId::Thm45, SeriesId::Thm51,
                        SeriesId::Thm12}) {
        if (name == series_id_name(id)) return id;
    }
    return std::nullopt;
}

const char* verdict_name(Verdict v) {
    switch (v) {
        case Verdict::Converges: return "converges";
        case Verdict::Diverges: return "diverges";
        case Verdict::Undetermined: return "undetermined";
    }
    return "?";
}

namespace {

bool envelope_converges(const PowerLogEnvelope& e) {
    return e.a > 1.0 || (e.a == 1.0 && e.b > 1.0);
}

bool envelope_diverges(const PowerLogEnvelope& e) {
    return e.c > 0.0 && (e.a < 1.0 || (e.a == 1.0 && e.b <= 1.0));
}

// upper bound for sum_{n > H} c n^{-a} (log n)^{-b}
std::optional<double> envelope_tail(const PowerLogEnvelope& e, std::int64_t H) {
    if (!envelope_converges(e)) return std::nullopt;
    const double u0 = std::log(static_cast<double>(std::max<std::int64_t>(H, 2)));
    if (e.a == 1.0) {
        return e.c * std::pow(u0, 1.0 - e.b) / (e.b - 1.0);
    }
    if (e.b >= 0.0) {
        return e.c * std::pow(u0, -e.b) * std::pow(static_cast<double>(H), 1.0 - e.a) / (e.a - 1.0);
    }
    // growing log factor: bound u^B e^{-(a-1)u} by its peak times a slower decay
    const double B = -e.b;
    const double theta = 0.5 * (e.a - 1.0);
    const double peak = B > 0.0 ? std::pow(B / (theta * kE), B) : 1.0;
    return e.c * peak * std::exp(-theta * u0) * (1.0 / theta) *
           std::exp(-(e.a - 1.0 - theta) * u0) / 1.0;
}

} // namespace

SeriesReport series_condition(SeriesId id, const SeriesInputs& in, std::int64_t horizon) {
    if (horizon < 2) throw std::invalid_argument("series_condition: horizon too small");
    SeriesReport rep;

    switch (id) {
        case SeriesId::Thm41: {
            double s = 0.0;
            for (std::int64_t n = 1; n <= horizon; ++n) {
                s += in.alpha(n) * in.weight_A(n) * std::pow(std::log(static_cast<double>(n)), in.p);
            }
            rep.partial = s;
            break;
        }
        case SeriesId::Thm42: {
            // dyadic display: sum_l 2^{l/p} (sum_{2^l <= A_k < 2^{l+1}} alpha_k)^{q/p}
            std::vector<double> level_sum;
            for (std::int64_t k = 1; k <= horizon; ++k) {
                const double A = in.weight_A(k);
                const int lvl = A >= 1.0 ? static_cast<int>(std::floor(std::log2(A))) : 0;
                if (static_cast<std::size_t>(lvl) >= level_sum.size()) {
                    level_sum.resize(static_cast<std::size_t>(lvl) + 1, 0.0);
                }
                level_sum[static_cast<std::size_t>(lvl)] += in.alpha(k);
            }
            double s = 0.0;
            for (std::size_t l = 0; l < level_sum.size(); ++l) {
                s += std::pow(2.0, static_cast<double>(l) / in.p) *
                     std::pow(level_sum[l], in.q / in.p);
            }
            rep.partial = s;
            // log-density display: sum_n (sum_{k: 2^{A_k} >= n} alpha_k)^{q/p} / (n (log n)^{1-1/p})
            double alt = 0.0;
            for (std::int64_t n = 2; n <= horizon; ++n) {
                const double thresh = std::log2(static_cast<double>(n));
                double inner = 0.0;
                for (std::int64_t k = 1; k <= horizon; ++k) {
                    if (in.weight_A(k) >= thresh) inner += in.alpha(k);
                }
                alt += std::pow(inner, in.q / in.p) /
                       (static_cast<double>(n) *
                        std::pow(std::log(static_cast<double>(n)), 1.0 - 1.0 / in.p));
            }
            rep.alt_partial = alt;
            break;
        }
        case SeriesId::Thm45: {
            // inner(n) = sum_{k <= H, gamma_k >= n} alpha_k via a difference array
            std::vector<double> diff(static_cast<std::size_t>(horizon) + 2, 0.0);
            for (std::int64_t k = 1; k <= horizon; ++k) {
                const double g = in.gamma_idx(k);
                if (g < 1.0) continue;
                const std::int64_t hi = std::min<std::int64_t>(horizon, static_cast<std::int64_t>(std::floor(g)));
                diff[1] += in.alpha(k);
                diff[static_cast<std::size_t>(hi) + 1] -= in.alpha(k);
            }
            double inner = 0.0, s = 0.0;
            for (std::int64_t n = 1; n <= horizon; ++n) {
                inner += diff[static_cast<std::size_t>(n)];
                if (n >= 2) {
                    s += std::sqrt(std::max(inner, 0.0)) /
                         (static_cast<double>(n) * std::sqrt(std::log(static_cast<double>(n))));
                }
            }
            rep.partial = s;
            break;
        }
        case SeriesId::Thm51:
        case SeriesId::Thm12: {
            double running = 0.0, s = 0.0;
            for (std::int64_t n = 1; n <= horizon; ++n) {
                running = std::max(running, in.log_arg(n));
                const double arg = std::max(static_cast<double>(n), running);
                s += in.alpha(n) * std::log(arg) *
                     std::pow(std::log(static_cast<double>(n)), 2.0);
            }
            rep.partial = s;
            break;
        }
    }

    if (in.finite_support && *in.finite_support <= horizon) {
        rep.tail_bound = 0.0;
        rep.verdict = Verdict::Converges;
        return rep;
    }
    if (in.term_upper) {
        rep.tail_bound = envelope_tail(*in.term_upper, horizon);
        if (rep.tail_bound) {
            rep.verdict = Verdict::Converges;
            return rep;
        }
    }
    if (in.term_lower && envelope_diverges(*in.term_lower)) {
        rep.verdict = Verdict::Diverges;
        return rep;
    }
    if (in.inner_lower && in.inner_lower->a <= 1.0 && in.inner_lower->c > 0.0) {
        // the inner tail sums already diverge, so every term is infinite
        rep.verdict = Verdict::Diverges;
        return rep;
    }
    rep.verdict = Verdict::Undetermined;
    return rep;
}

double series_maximal_constant(double p, double gamma, double series_value) {
    if (!(p > 1.0)) throw std::invalid_argument("series_maximal_constant: need p > 1");
    if (series_value < 0.0) throw std::invalid_argument("series_maximal_constant: negative series value");
    return 2.0 * std::exp(1.0 / p) * (1.0 + std::pow(p, (p - 1.0) / p) * (p + gamma)) *
           std::pow(series_value, 1.0 / p);
}

TailDiagnostic uniform_tail_diagnostic(const SamplePath& path, const FreqTable& freqs,
                                       const Box& box, const BlockSchedule& schedule,
                                       double tol) {
    if (schedule.kappa.empty()) throw std::invalid_argument("uniform_tail_diagnostic: empty schedule");
    if (static_cast<std::size_t>(schedule.kappa.back()) > path.length()) {
        throw std::invalid_argument("uniform_tail_diagnostic: schedule exceeds path length");
    }

    TailDiagnostic diag;
    // integer 1-d frequencies allow the FFT grid shortcut
    bool integer_1d = freqs.dim == 1;
    if (integer_1d) {
        for (std::size_t k = 0; k < freqs.count() && integer_1d; ++k) {
            const double f = freqs.at(k, 0);
            integer_1d = f == std::floor(f) && f >= 0.0 && f < 1e9;
        }
    }

    std::int64_t start = 1;
    for (std::size_t bi = 0; bi < schedule.kappa.size(); ++bi) {
        const std::int64_t end = schedule.kappa[bi];
        double lower = 0.0, upper = 0.0;
        if (integer_1d) {
            std::size_t maxf = 0;
            for (std::int64_t k = start; k <= end; ++k) {
                maxf = std::max(maxf, static_cast<std::size_t>(freqs.at(static_cast<std::size_t>(k - 1), 0)));
            }
            std::vector<cdouble> by_freq(maxf + 1, cdouble(0, 0));
            for (std::int64_t k = start; k <= end; ++k) {
                by_freq[static_cast<std::size_t>(freqs.at(static_cast<std::size_t>(k - 1), 0))] +=
                    path.at(static_cast<std::size_t>(k));
            }
            CircleSupBracket br = circle_sup_bracket(by_freq, box.half_width);
            while (br.upper - br.lower > tol && br.grid < (std::size_t{1} << 22)) {
                br = circle_sup_bracket(by_freq, box.half_width, 4 * br.grid);
            }
            lower = br.lower;
            upper = br.upper;
            if (upper - lower > tol) diag.status = SupStatus::BudgetExhausted;
        } else {
            std::vector<cdouble> coeffs;
            std::vector<double> fl;
            const std::size_t s = static_cast<std::size_t>(freqs.dim);
            for (std::int64_t k = start; k <= end; ++k) {
                coeffs.push_back(path.at(static_cast<std::size_t>(k)));
                for (std::size_t i = 0; i < s; ++i) {
                    fl.push_back(freqs.at(static_cast<std::size_t>(k - 1), static_cast<int>(i)));
                }
            }
            SupOptions opts;
            opts.tol = tol;
            const SupResult r = certified_sup(ExpSum(std::move(coeffs), std::move(fl), freqs.dim),
                                              box, opts);
            lower = r.bound.lower;
            upper = r.bound.upper;
            if (r.status == SupStatus::BudgetExhausted) diag.status = SupStatus::BudgetExhausted;
        }
        diag.block_lower.push_back(lower);
        diag.block_upper.push_back(upper);
        start = end + 1;
    }

    const std::size_t nb = diag.block_upper.size();
    const std::size_t quart = std::max<std::size_t>(1, nb / 4);
    double head = 0.0, tail = 0.0;
    for (std::size_t i = 0; i < quart; ++i) head += diag.block_upper[i];
    for (std::size_t i = nb - quart; i < nb; ++i) tail += diag.block_upper[i];
    head /= static_cast<double>(quart);
    tail /= static_cast<double>(quart);
    diag.cauchy_consistent = nb >= 4 && tail < head / 4.0;
    return diag;
}

} // namespace aplab
