#include "aplab/ergodic.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "aplab/fft.hpp"
#include "aplab/grid_kernels.hpp"
#include "aplab/inequality.hpp"
#include "aplab/rng.hpp"

namespace aplab {

namespace {
constexpr double kTwoPi = 2.0 * std::numbers::pi;

cdouble unit_phase(double angle) { return {std::cos(angle), std::sin(angle)}; }
} // namespace

TorusRotationSystem::TorusRotationSystem(std::vector<double> a) : alphas(std::move(a)) {
    if (alphas.empty()) throw std::invalid_argument("TorusRotationSystem: need at least one angle");
    for (double x : alphas) {
        if (!(x >= 0.0 && x < 1.0)) {
            throw std::invalid_argument("TorusRotationSystem: angles must lie in [0, 1)");
        }
    }
}

FourierFunction FourierFunction::from_modes(std::vector<std::pair<std::int64_t, cdouble>> entries) {
    std::sort(entries.begin(), entries.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
    FourierFunction f;
    for (const auto& [m, c] : entries) {
        if (!f.modes.empty() && f.modes.back() == m) {
            f.coeff.back() += c;
        } else {
            f.modes.push_back(m);
            f.coeff.push_back(c);
        }
    }
    return f;
}

double FourierFunction::l2_norm() const {
    double s = 0.0;
    for (const auto& c : coeff) s += std::norm(c);
    return std::sqrt(s);
}

cdouble FourierFunction::evaluate(double y) const {
    cdouble acc(0, 0);
    for (std::size_t i = 0; i < modes.size(); ++i) {
        acc += coeff[i] * unit_phase(kTwoPi * std::fmod(static_cast<double>(modes[i]) * y, 1.0));
    }
    return acc;
}

double PowerSchedule::dot_alpha_mod1(const TorusRotationSystem& sys, std::size_t k) const {
    double d = 0.0;
    for (int i = 0; i < dim; ++i) {
        d += std::fmod(static_cast<double>(at(k, i)) * sys.alphas[static_cast<std::size_t>(i)], 1.0);
    }
    return std::fmod(d, 1.0);
}

std::int64_t PowerSchedule::running_max_abs(std::size_t m) const {
    std::int64_t v = 0;
    for (std::size_t k = 0; k < m && k < count(); ++k) {
        for (int i = 0; i < dim; ++i) v = std::max(v, std::abs(at(k, i)));
    }
    return v;
}

void PowerSchedule::validate(int expected_dim) const {
    if (dim != expected_dim) throw std::invalid_argument("PowerSchedule: dimension mismatch");
    for (std::int64_t v : flat) {
        if (v < 0) throw std::invalid_argument("PowerSchedule: powers must be nonnegative");
    }
}

FourierFunction apply_powers(const FourierFunction& f, std::span<const std::int64_t> j,
                             const TorusRotationSystem& sys) {
    if (j.size() != sys.alphas.size()) {
        throw std::invalid_argument("apply_powers: power vector dimension mismatch");
    }
    double d = 0.0;
    for (std::size_t i = 0; i < j.size(); ++i) {
        if (j[i] < 0) throw std::invalid_argument("apply_powers: powers must be nonnegative");
        d += std::fmod(static_cast<double>(j[i]) * sys.alphas[i], 1.0);
    }
    FourierFunction out = f;
    for (std::size_t i = 0; i < out.modes.size(); ++i) {
        const double frac = std::fmod(static_cast<double>(out.modes[i]) * d, 1.0);
        out.coeff[i] *= unit_phase(kTwoPi * frac);
    }
    return out;
}

TransferCheck spectral_transfer_check(const std::vector<cdouble>& coeffs,
                                      const PowerSchedule& sched, const FourierFunction& f,
                                      const TorusRotationSystem& sys, double tol) {
    if (coeffs.size() > sched.count()) {
        throw std::invalid_argument("spectral_transfer_check: schedule shorter than coefficients");
    }
    sched.validate(sys.dim());

    // exact left side through orthonormal characters
    double lhs_sq = 0.0;
    for (std::size_t mi = 0; mi < f.modes.size(); ++mi) {
        cdouble s(0, 0);
        for (std::size_t k = 0; k < coeffs.size(); ++k) {
            const double d = sched.dot_alpha_mod1(sys, k);
            const double frac = std::fmod(static_cast<double>(f.modes[mi]) * d, 1.0);
            s += coeffs[k] * unit_phase(kTwoPi * frac);
        }
        lhs_sq += std::norm(f.coeff[mi]) * std::norm(s);
    }

    TransferCheck out;
    out.lhs = std::sqrt(lhs_sq);

    // schedule polynomial sup over [-pi, pi]^s
    const int s = sched.dim;
    std::vector<cdouble> pc(coeffs);
    std::vector<double> freqs;
    freqs.reserve(coeffs.size() * static_cast<std::size_t>(s));
    for (std::size_t k = 0; k < coeffs.size(); ++k) {
        for (int i = 0; i < s; ++i) freqs.push_back(static_cast<double>(sched.at(k, i)));
    }
    const ExpSum poly(std::move(pc), std::move(freqs), s);
    const Box box(std::numbers::pi, s);
    const GridSpec seed_grid{box, 129, GridKind::Endpoints};
    const double rough = grid_max_abs(poly, seed_grid).value;
    SupOptions opts;
    opts.tol = std::max(0.02 * rough, 1e-9);
    const SupResult sup = certified_sup(poly, box, opts);
    out.status = sup.status;
    out.rhs = f.l2_norm() * sup.bound.upper;
    out.ok = out.lhs <= out.rhs + tol;
    return out;
}

namespace {

SeriesTrajectory series_core(const SamplePath& path, const PowerSchedule& sched,
                             const FourierFunction& f, const TorusRotationSystem& sys,
                             const std::vector<double>& weights,
                             const std::vector<double>& eval_points,
                             const std::vector<std::size_t>& N_grid) {
    if (N_grid.empty()) throw std::invalid_argument("series: empty N grid");
    for (std::size_t i = 1; i < N_grid.size(); ++i) {
        if (N_grid[i] <= N_grid[i - 1]) throw std::invalid_argument("series: N grid must increase");
    }
    const std::size_t n_max = N_grid.back();
    if (n_max > path.length() || n_max > sched.count()) {
        throw std::invalid_argument("series: path or schedule shorter than the N grid");
    }
    sched.validate(sys.dim());

    SeriesTrajectory out;
    out.N_grid = N_grid;
    out.eval_points = eval_points;
    out.values.assign(N_grid.size(), std::vector<cdouble>(eval_points.size(), cdouble(0, 0)));

    // shift fractions per index
    std::vector<double> shift(n_max);
    for (std::size_t k = 0; k < n_max; ++k) shift[k] = sched.dot_alpha_mod1(sys, k);

    // pointwise trajectories
    std::vector<cdouble> acc(eval_points.size(), cdouble(0, 0));
    std::size_t gi = 0;
    for (std::size_t n = 1; n <= n_max; ++n) {
        const cdouble w = path.at(n) * weights[n - 1];
        for (std::size_t yi = 0; yi < eval_points.size(); ++yi) {
            acc[yi] += w * f.evaluate(std::fmod(eval_points[yi] + shift[n - 1], 1.0));
        }
        while (gi < N_grid.size() && N_grid[gi] == n) {
            out.values[gi] = acc;
            ++gi;
        }
    }

    // exact tail norms via per-mode suffix sums; the last grid point has an
    // empty tail by definition
    std::vector<double> tails(N_grid.size(), 0.0);
    std::vector<cdouble> suffix(f.size(), cdouble(0, 0));
    std::ptrdiff_t g = static_cast<std::ptrdiff_t>(N_grid.size()) - 2;
    for (std::size_t n = n_max; n-- > 0;) {
        // add term n+1 to the suffix, then record the tail for N = n
        const cdouble w = path.at(n + 1) * weights[n];
        for (std::size_t mi = 0; mi < f.size(); ++mi) {
            const double frac = std::fmod(static_cast<double>(f.modes[mi]) * shift[n], 1.0);
            suffix[mi] += w * unit_phase(kTwoPi * frac);
        }
        while (g >= 0 && N_grid[static_cast<std::size_t>(g)] == n) {
            double t2 = 0.0;
            for (std::size_t mi = 0; mi < f.size(); ++mi) {
                t2 += std::norm(f.coeff[mi]) * std::norm(suffix[mi]);
            }
            tails[static_cast<std::size_t>(g)] = std::sqrt(t2);
            --g;
        }
    }
    out.tail_l2 = tails;

    out.monotone_tail_from = static_cast<std::ptrdiff_t>(N_grid.size()) - 1;
    for (std::ptrdiff_t i = static_cast<std::ptrdiff_t>(N_grid.size()) - 2; i >= 0; --i) {
        if (out.tail_l2[static_cast<std::size_t>(i)] >=
            out.tail_l2[static_cast<std::size_t>(i) + 1]) {
            out.monotone_tail_from = i;
        } else {
            break;
        }
    }
    return out;
}

} // namespace

SeriesTrajectory weighted_series_partial_sums(const SamplePath& path, const PowerSchedule& sched,
                                              const FourierFunction& f,
                                              const TorusRotationSystem& sys,
                                              const std::vector<double>& eval_points,
                                              const std::vector<std::size_t>& N_grid) {
    std::vector<double> weights(N_grid.empty() ? 0 : N_grid.back(), 1.0);
    return series_core(path, sched, f, sys, weights, eval_points, N_grid);
}

SeriesTrajectory normalized_series(const SamplePath& path, const PowerSchedule& sched,
                                   const FourierFunction& f, const TorusRotationSystem& sys,
                                   double q, const std::vector<double>& eval_points,
                                   const std::vector<std::size_t>& N_grid) {
    if (!(q >= 1.0 && q <= 2.0)) throw std::invalid_argument("normalized_series: need 1 <= q <= 2");
    const double expo = (2.0 - q) / (2.0 * q);
    std::vector<double> weights(N_grid.empty() ? 0 : N_grid.back(), 1.0);
    for (std::size_t n = 1; n <= weights.size(); ++n) {
        weights[n - 1] = std::pow(static_cast<double>(n), -expo);
    }
    return series_core(path, sched, f, sys, weights, eval_points, N_grid);
}

BernoulliWindowFunction::BernoulliWindowFunction(int w, std::vector<double> t)
    : window(w), table(std::move(t)) {
    if (window < 1) throw std::invalid_argument("BernoulliWindowFunction: window must be >= 1");
    if (table.size() != (std::size_t{1} << window)) {
        throw std::invalid_argument("BernoulliWindowFunction: table must have 2^window entries");
    }
    double mean = 0.0;
    for (double v : table) {
        if (!(std::abs(v) <= 1.0 + 1e-15)) {
            throw std::invalid_argument("BernoulliWindowFunction: values must lie in [-1, 1]");
        }
        mean += v;
    }
    if (std::abs(mean) > 1e-12 * static_cast<double>(table.size())) {
        throw std::invalid_argument("BernoulliWindowFunction: table must have exact mean zero");
    }
}

double BernoulliWindowFunction::sup_norm() const {
    double v = 0.0;
    for (double x : table) v = std::max(v, std::abs(x));
    return v;
}

double BernoulliWindowFunction::value(const std::vector<int>& bits, std::size_t offset) const {
    std::size_t idx = 0;
    for (int b = 0; b < window; ++b) {
        idx |= static_cast<std::size_t>(bits[offset + static_cast<std::size_t>(b)] & 1) << b;
    }
    return table[idx];
}

BernoulliWindowFunction cylinder_function(int window, const std::vector<int>& pattern) {
    if (static_cast<int>(pattern.size()) != window) {
        throw std::invalid_argument("cylinder_function: pattern length must equal the window");
    }
    std::size_t pidx = 0;
    for (int b = 0; b < window; ++b) {
        pidx |= static_cast<std::size_t>(pattern[static_cast<std::size_t>(b)] & 1) << b;
    }
    const double prob = std::pow(0.5, window);
    std::vector<double> table(std::size_t{1} << window, -prob);
    table[pidx] = 1.0 - prob;
    return BernoulliWindowFunction(window, std::move(table));
}

double ww_constant(double p) {
    // circle characters on [-pi, pi]: rho1 = 1, rho2 = 1/2, nu(K) = 2 pi
    return orlicz_constants(1.0, 0.5, kTwoPi, 1.0, 1.0, p).c_p;
}

WwEstimate ww_norm(const BernoulliWindowFunction& f, std::size_t n, double p,
                   std::size_t trials, std::uint64_t seed, double tol) {
    if (n < 1) throw std::invalid_argument("ww_norm: n must be >= 1");
    if (!(p >= 1.0)) throw std::invalid_argument("ww_norm: p must be >= 1");
    if (trials < 1) throw std::invalid_argument("ww_norm: trials must be >= 1");
    if (!(tol > 0.0)) throw std::invalid_argument("ww_norm: tol must be positive");

    // oversampling so that the grid-max bias (pi/ov)^2/2 stays below tol
    const double ov = std::clamp(std::ceil(std::numbers::pi / std::sqrt(2.0 * tol)), 8.0, 512.0);
    const std::size_t N = next_pow2(static_cast<std::size_t>(ov * static_cast<double>(n + 1)));
    const std::size_t w = static_cast<std::size_t>(f.window);

    std::vector<double> stats(trials, 0.0);
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t t = 0; t < static_cast<std::ptrdiff_t>(trials); ++t) {
        CounterRng rng(derive_seed(seed, static_cast<std::uint64_t>(t)));
        std::vector<int> bits(n + w);
        for (auto& b : bits) b = rng.next_bit() ? 1 : 0;
        std::vector<cdouble> by_freq(n + 1, cdouble(0, 0));
        for (std::size_t k = 1; k <= n; ++k) by_freq[k] = f.value(bits, k);
        const auto values = eval_on_circle_grid(by_freq, N);
        double sup_sq = 0.0;
        for (const auto& v : values) sup_sq = std::max(sup_sq, std::norm(v));
        stats[static_cast<std::size_t>(t)] =
            std::pow(std::sqrt(sup_sq) / static_cast<double>(n), p);
    }

    double mu = 0.0;
    for (double v : stats) mu += v;
    mu /= static_cast<double>(trials);
    double var = 0.0;
    for (double v : stats) var += (v - mu) * (v - mu);
    const double se_mu = trials > 1
        ? std::sqrt(var / (static_cast<double>(trials) * (static_cast<double>(trials) - 1.0)))
        : 0.0;

    WwEstimate est;
    est.grid = N;
    if (mu > 0.0) {
        est.value = std::pow(mu, 1.0 / p);
        est.stderr_ = se_mu * std::pow(mu, 1.0 / p - 1.0) / p;
    }
    return est;
}

double ww_norm_rhs(const BernoulliWindowFunction& f, std::size_t n, double p) {
    if (n < 2) throw std::invalid_argument("ww_norm_rhs: n must be >= 2");
    const double fsup = f.sup_norm();
    const double nd = static_cast<double>(n);
    const double cross = f.window >= 2 ? nd * static_cast<double>(f.window) * fsup * fsup : 0.0;
    return ww_constant(p) * std::sqrt(std::log(nd)) / nd * std::sqrt(nd * fsup * fsup + cross);
}

ExponentFit ww_exponent_fit(const std::vector<std::size_t>& ns, const std::vector<double>& norms) {
    if (ns.size() != norms.size() || ns.size() < 3) {
        throw std::invalid_argument("ww_exponent_fit: need at least 3 matching grid points");
    }
    const std::size_t m = ns.size();
    std::vector<double> x(m), y(m);
    for (std::size_t i = 0; i < m; ++i) {
        if (!(norms[i] > 0.0)) throw std::invalid_argument("ww_exponent_fit: norms must be positive");
        x[i] = std::log(static_cast<double>(ns[i]));
        y[i] = std::log(norms[i]);
    }
    double xbar = 0.0, ybar = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
        xbar += x[i];
        ybar += y[i];
    }
    xbar /= static_cast<double>(m);
    ybar /= static_cast<double>(m);
    double sxx = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
        sxx += (x[i] - xbar) * (x[i] - xbar);
        sxy += (x[i] - xbar) * (y[i] - ybar);
    }
    if (!(sxx > 0.0)) throw std::invalid_argument("ww_exponent_fit: degenerate grid");
    const double slope = sxy / sxx;

    ExponentFit fit;
    fit.alpha_hat = -slope;
    fit.residuals.resize(m);
    double rss = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
        const double pred = ybar + slope * (x[i] - xbar);
        fit.residuals[i] = y[i] - pred;
        rss += fit.residuals[i] * fit.residuals[i];
    }
    if (m > 2) fit.stderr_ = std::sqrt(rss / (static_cast<double>(m) - 2.0) / sxx);
    return fit;
}

CylinderRatioCheck cylinder_ratio_check(const BernoulliWindowFunction& f, const std::vector<std::size_t>& n_grid,
                         double p, std::size_t trials, std::uint64_t seed) {
    CylinderRatioCheck out;
    out.n_grid = n_grid;
    out.bound = std::sqrt(static_cast<double>(f.window)) * ww_constant(p);
    double worst = 0.0;
    for (std::size_t gi = 0; gi < n_grid.size(); ++gi) {
        const std::size_t n = n_grid[gi];
        const WwEstimate est = ww_norm(f, n, p, trials, derive_seed(seed, gi));
        const double ratio = est.value * static_cast<double>(n) /
                             std::sqrt(static_cast<double>(n) * std::log(static_cast<double>(n) + 1.0));
        out.ratios.push_back(ratio);
        worst = std::max(worst, ratio);
    }
    out.pass = worst <= out.bound;
    out.margin = worst > 0.0 ? out.bound / worst : std::numeric_limits<double>::infinity();
    return out;
}

} // namespace aplab
