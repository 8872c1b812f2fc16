#include "aplab/sigma.hpp"

#include <cmath>
#include <stdexcept>

#include "aplab/grid_kernels.hpp"

namespace aplab {

double FreqTable::abs_running_max(int axis, std::size_t m) const {
    double v = 0.0;
    for (std::size_t k = 0; k < m && k < count(); ++k) v = std::max(v, std::abs(at(k, axis)));
    return v;
}

bool FreqTable::monotone() const {
    const std::size_t s = static_cast<std::size_t>(dim);
    if (count() == 0) return false;
    for (std::size_t i = 0; i < s; ++i) {
        double prev = 0.0;
        for (std::size_t k = 0; k < count(); ++k) {
            const double f = at(k, static_cast<int>(i));
            if (f <= 0.0 || f < prev) return false;
            prev = f;
        }
    }
    return true;
}

double sigma_exponential(const FreqTable& freqs, std::size_t m, bool monotone) {
    if (m < 1 || m > freqs.count()) {
        throw std::invalid_argument("sigma_exponential: need 1 <= m <= frequency count");
    }
    if (monotone && !freqs.monotone()) {
        throw std::invalid_argument("sigma_exponential: frequencies not positive nondecreasing");
    }
    const int s = freqs.dim;
    const double sd = static_cast<double>(s);
    double v = 1.0;
    if (monotone) {
        for (int i = 0; i < s; ++i) v *= freqs.at(m - 1, i) + 1.0;
        return std::pow(4.0 * sd, sd) * v;
    }
    for (int i = 0; i < s; ++i) v *= freqs.abs_running_max(i, m) + 1.0;
    return std::pow(6.0 * sd * static_cast<double>(m), sd) * v;
}

double sigma_uniform(const FreqTable& freqs, std::size_t n, bool monotone) {
    if (n < 1 || n > freqs.count()) {
        throw std::invalid_argument("sigma_uniform: need 1 <= n <= frequency count");
    }
    if (monotone && !freqs.monotone()) {
        throw std::invalid_argument("sigma_uniform: frequencies not positive nondecreasing");
    }
    const int s = freqs.dim;
    double v = 1.0;
    if (monotone) {
        for (int i = 0; i < s; ++i) v *= freqs.at(n - 1, i) + 1.0;
        return v;
    }
    for (int i = 0; i < s; ++i) v *= freqs.abs_running_max(i, n) + 1.0;
    return std::pow(static_cast<double>(n), static_cast<double>(s)) * v;
}

double SigmaSystem::sigma(std::size_t m) const {
    if (family == SigmaFamily::Constant) return 1.0;
    return uniform_variant ? sigma_uniform(freqs, m, monotone)
                           : sigma_exponential(freqs, m, monotone);
}

SigmaSystem SigmaSystem::exponential(FreqTable f, bool mono, double r1, double r2) {
    SigmaSystem s;
    s.family = SigmaFamily::Exponential;
    s.freqs = std::move(f);
    s.monotone = mono;
    s.rho1 = r1;
    s.rho2 = r2;
    return s;
}

SigmaSystem SigmaSystem::exponential_uniform(FreqTable f, bool mono, double r2) {
    SigmaSystem s;
    s.family = SigmaFamily::Exponential;
    s.monotone = mono;
    s.uniform_variant = true;
    s.rho1 = std::pow(6.0 * f.dim, -static_cast<double>(f.dim));
    s.rho2 = r2;
    s.freqs = std::move(f);
    return s;
}

SigmaSystem SigmaSystem::constant(double r1, double r2) {
    SigmaSystem s;
    s.family = SigmaFamily::Constant;
    s.rho1 = r1;
    s.rho2 = r2;
    return s;
}

SigmaReport verify_sigma_property(const SigmaSystem& sys, const std::vector<cdouble>& coeffs,
                                  std::size_t m, const Box& box, std::size_t grid_pts) {
    if (m < 1 || m > coeffs.size()) {
        throw std::invalid_argument("verify_sigma_property: need 1 <= m <= coefficient count");
    }
    if (!(sys.rho1 > 0.0) || !(sys.rho2 > 0.0 && sys.rho2 < 1.0)) {
        throw std::invalid_argument("verify_sigma_property: need rho1 > 0 and rho2 in (0,1)");
    }

    SigmaReport rep;
    rep.required = sys.rho1 / sys.sigma(m);

    if (sys.family == SigmaFamily::Constant) {
        // partial sums are constant in x, so the qualifying set is the box
        double best = 0.0;
        cdouble acc(0, 0);
        for (std::size_t k = 0; k < m; ++k) {
            acc += coeffs[k];
            best = std::max(best, std::abs(acc));
        }
        rep.global_max = best;
        rep.measured = box.volume();
        rep.grid_adequate = true;
        rep.pass = rep.measured >= rep.required;
        return rep;
    }

    if (box.half_width < 1.0) {
        throw std::invalid_argument("verify_sigma_property: exponential systems need T >= 1");
    }
    if (sys.freqs.dim != box.dim) {
        throw std::invalid_argument("verify_sigma_property: box/frequency dimension mismatch");
    }
    if (sys.freqs.count() < m) {
        throw std::invalid_argument("verify_sigma_property: fewer frequencies than coefficients");
    }

    std::vector<cdouble> c(coeffs.begin(), coeffs.begin() + static_cast<std::ptrdiff_t>(m));
    std::vector<double> f(sys.freqs.flat.begin(),
                          sys.freqs.flat.begin() +
                              static_cast<std::ptrdiff_t>(m * static_cast<std::size_t>(sys.freqs.dim)));
    const ExpSum p(std::move(c), std::move(f), sys.freqs.dim);

    const GridSpec grid{box, grid_pts, GridKind::CellCenters};
    const PrefixScan scan = prefix_grid_scan(p, grid, m, /*keep_pointwise=*/true);
    rep.global_max = scan.global_max;

    const std::vector<double> L = p.gradient_bound();
    double slack = 0.0;
    for (double li : L) slack += li * 0.5 * grid.step();
    rep.grid_slack = slack;
    rep.grid_adequate = slack <= 0.25 * (1.0 - sys.rho2) * std::max(rep.global_max, 1e-300);
    if (rep.global_max == 0.0) rep.grid_adequate = true;

    const double threshold = sys.rho2 * rep.global_max;
    const std::int64_t hits = count_at_least(scan.pointwise_running_max, threshold);
    rep.measured = static_cast<double>(hits) * grid.cell_volume();
    rep.pass = rep.measured >= rep.required;
    return rep;
}

} // namespace aplab
