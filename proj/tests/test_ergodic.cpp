#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>

#include "aplab/certified_sup.hpp"
#include "aplab/ergodic.hpp"
#include "aplab/fft.hpp"
#include "aplab/inequality.hpp"
#include "aplab/rng.hpp"

using namespace aplab;

namespace {

FourierFunction random_function(std::size_t modes, std::uint64_t seed) {
    CounterRng rng(seed);
    std::vector<std::pair<std::int64_t, cdouble>> entries;
    for (std::size_t i = 0; i < modes; ++i) {
        entries.emplace_back(static_cast<std::int64_t>(rng.next_u64() % 9) - 4, rng.next_cgauss());
    }
    return FourierFunction::from_modes(std::move(entries));
}

PowerSchedule random_schedule(std::size_t n, int dim, std::uint64_t seed, std::int64_t cap) {
    PowerSchedule s;
    s.dim = dim;
    CounterRng rng(seed);
    for (std::size_t k = 0; k < n * static_cast<std::size_t>(dim); ++k) {
        s.flat.push_back(static_cast<std::int64_t>(rng.next_u64() % static_cast<std::uint64_t>(cap)));
    }
    return s;
}

} // namespace

TEST_CASE("zero powers act as the identity") {
    const TorusRotationSystem sys{{0.123, 0.456}};
    const FourierFunction f = random_function(5, 1);
    const std::int64_t j[2] = {0, 0};
    const FourierFunction g = apply_powers(f, std::span(j, 2), sys);
    for (std::size_t i = 0; i < f.size(); ++i) CHECK(g.coeff[i] == f.coeff[i]);
}

TEST_CASE("a quarter rotation multiplies the first mode by i") {
    const TorusRotationSystem sys{{0.25}};
    const FourierFunction f = FourierFunction::from_modes({{1, cdouble(1, 0)}});
    const std::int64_t j = 1;
    const FourierFunction g = apply_powers(f, std::span(&j, 1), sys);
    CHECK(std::abs(g.coeff[0] - cdouble(0, 1)) < 1e-14);
}

TEST_CASE("the action preserves the l2 norm and is additive in j") {
    const TorusRotationSystem sys{{std::numbers::sqrt2 - 1.0, std::numbers::sqrt3 - 1.0}};
    for (std::uint64_t seed = 2; seed < 12; ++seed) {
        const FourierFunction f = random_function(5, seed);
        CounterRng rng(100 + seed);
        std::int64_t j1[2] = {static_cast<std::int64_t>(rng.next_u64() % 32),
                              static_cast<std::int64_t>(rng.next_u64() % 32)};
        std::int64_t j2[2] = {static_cast<std::int64_t>(rng.next_u64() % 32),
                              static_cast<std::int64_t>(rng.next_u64() % 32)};
        std::int64_t jsum[2] = {j1[0] + j2[0], j1[1] + j2[1]};
        const FourierFunction a = apply_powers(apply_powers(f, std::span(j1, 2), sys),
                                               std::span(j2, 2), sys);
        const FourierFunction b = apply_powers(f, std::span(jsum, 2), sys);
        CHECK(a.l2_norm() == doctest::Approx(f.l2_norm()).epsilon(1e-13));
        for (std::size_t i = 0; i < f.size(); ++i) {
            CHECK(std::abs(a.coeff[i] - b.coeff[i]) < 1e-12);
        }
    }
}

TEST_CASE("transfer check: zero coefficients") {
    const TorusRotationSystem sys{{0.3}};
    const FourierFunction f = random_function(4, 3);
    const PowerSchedule sched = random_schedule(6, 1, 4, 16);
    const TransferCheck tc =
        spectral_transfer_check(std::vector<cdouble>(6, cdouble(0, 0)), sched, f, sys, 1e-9);
    CHECK(tc.lhs == 0.0);
    CHECK(tc.ok);
}

TEST_CASE("transfer check: single mode is a point evaluation") {
    const TorusRotationSystem sys{{std::numbers::sqrt2 - 1.0}};
    const FourierFunction f = FourierFunction::from_modes({{2, cdouble(0.5, 0.25)}});
    const PowerSchedule sched = random_schedule(8, 1, 7, 24);
    CounterRng rng(8);
    std::vector<cdouble> coeffs(8);
    for (auto& c : coeffs) c = rng.next_cgauss();
    const TransferCheck tc = spectral_transfer_check(coeffs, sched, f, sys, 1e-9);
    // the left side is |P(2 pi m alpha)| |c_m| for the schedule polynomial P
    cdouble point(0, 0);
    for (std::size_t k = 0; k < 8; ++k) {
        const double arg =
            2.0 * std::numbers::pi * 2.0 * static_cast<double>(sched.at(k, 0)) * sys.alphas[0];
        point += coeffs[k] * cdouble(std::cos(arg), std::sin(arg));
    }
    CHECK(tc.lhs == doctest::Approx(std::abs(point) * std::abs(f.coeff[0])).epsilon(1e-9));
    CHECK(tc.ok);
}

TEST_CASE("transfer inequality holds on random cases") {
    const TorusRotationSystem sys1{{std::numbers::sqrt2 - 1.0}};
    const TorusRotationSystem sys2{{std::numbers::sqrt2 - 1.0, std::numbers::sqrt3 - 1.0}};
    for (std::uint64_t c = 0; c < 300; ++c) {
        const bool two = c % 3 == 0;
        const TorusRotationSystem& sys = two ? sys2 : sys1;
        const FourierFunction f = random_function(5, 1000 + c);
        const PowerSchedule sched = random_schedule(10, sys.dim(), 2000 + c, 48);
        CounterRng rng(3000 + c);
        std::vector<cdouble> coeffs(10);
        for (auto& a : coeffs) a = rng.next_cgauss();
        const TransferCheck tc = spectral_transfer_check(coeffs, sched, f, sys, 1e-9);
        CHECK(tc.ok);
    }
}

TEST_CASE("weighted series of the zero function vanishes") {
    const TorusRotationSystem sys{{0.3}};
    const FourierFunction f; // no modes
    ProcessSpec spec;
    spec.family = Family::Rademacher;
    const SamplePath path = sample_path(spec, 16, 2);
    const PowerSchedule sched = random_schedule(16, 1, 3, 8);
    const SeriesTrajectory traj =
        weighted_series_partial_sums(path, sched, f, sys, {0.0, 0.25}, {4, 8, 16});
    for (const auto& row : traj.values) {
        for (const auto& v : row) CHECK(std::abs(v) == 0.0);
    }
    for (double t : traj.tail_l2) CHECK(t == 0.0);
}

TEST_CASE("trajectories freeze once the coefficients vanish") {
    const TorusRotationSystem sys{{0.17}};
    const FourierFunction f = random_function(4, 9);
    ProcessSpec spec;
    spec.family = Family::SignedMagnitudes;
    spec.magnitudes = {1.0, 0, 0, 0, 0, 0, 0, 0};
    const SamplePath path = sample_path(spec, 8, 5);
    const PowerSchedule sched = random_schedule(8, 1, 6, 8);
    const SeriesTrajectory traj =
        weighted_series_partial_sums(path, sched, f, sys, {0.1}, {1, 2, 4, 8});
    for (std::size_t gi = 1; gi < traj.N_grid.size(); ++gi) {
        CHECK(std::abs(traj.values[gi][0] - traj.values[0][0]) < 1e-14);
    }
    // and the tail past N = 1 is exactly zero
    CHECK(traj.tail_l2[0] == 0.0);
}

TEST_CASE("decaying gaussian weights give eventually monotone tails") {
    const TorusRotationSystem sys{{std::numbers::sqrt2 - 1.0}};
    const FourierFunction f = random_function(5, 11);
    const std::size_t n = 4096;
    ProcessSpec spec;
    spec.family = Family::GaussianCentered;
    spec.magnitudes.resize(n);
    for (std::size_t k = 1; k <= n; ++k) {
        spec.magnitudes[k - 1] = std::pow(static_cast<double>(k), -0.9);
    }
    const SamplePath path = sample_path(spec, n, 13);
    PowerSchedule sched;
    sched.dim = 1;
    for (std::size_t k = 1; k <= n; ++k) sched.flat.push_back(static_cast<std::int64_t>(k));
    std::vector<std::size_t> grid;
    for (std::size_t N = 16; N <= n; N *= 2) grid.push_back(N);
    const SeriesTrajectory traj = weighted_series_partial_sums(path, sched, f, sys, {0.0}, grid);
    CHECK(traj.monotone_tail_from >= 0);
    CHECK(traj.monotone_tail_from < static_cast<std::ptrdiff_t>(grid.size()) - 1);
}

TEST_CASE("normalized series agrees with the plain one at q = 2") {
    const TorusRotationSystem sys{{0.31}};
    const FourierFunction f = random_function(4, 15);
    ProcessSpec spec;
    spec.family = Family::Rademacher;
    const SamplePath path = sample_path(spec, 32, 16);
    const PowerSchedule sched = random_schedule(32, 1, 17, 16);
    const std::vector<double> pts = {0.0, 0.4};
    const std::vector<std::size_t> grid = {8, 16, 32};
    const SeriesTrajectory a = weighted_series_partial_sums(path, sched, f, sys, pts, grid);
    const SeriesTrajectory b = normalized_series(path, sched, f, sys, 2.0, pts, grid);
    for (std::size_t gi = 0; gi < grid.size(); ++gi) {
        for (std::size_t yi = 0; yi < pts.size(); ++yi) {
            CHECK(a.values[gi][yi] == b.values[gi][yi]);
        }
        CHECK(a.tail_l2[gi] == b.tail_l2[gi]);
    }
}

TEST_CASE("q = 1 weights are inverse square roots") {
    const TorusRotationSystem sys{{0.11}};
    const FourierFunction f = FourierFunction::from_modes({{1, cdouble(1, 0)}});
    ProcessSpec spec;
    spec.family = Family::Rademacher;
    const SamplePath path = sample_path(spec, 4, 21);
    PowerSchedule sched;
    sched.dim = 1;
    sched.flat = {0, 0, 0, 0};
    // with j = 0 and a single unit mode, S_N(0) = sum X_n w_n
    const SeriesTrajectory traj = normalized_series(path, sched, f, sys, 1.0, {0.0}, {1, 2, 3, 4});
    cdouble manual(0, 0);
    for (std::size_t n = 1; n <= 4; ++n) {
        manual += path.at(n) / std::sqrt(static_cast<double>(n));
        CHECK(std::abs(traj.values[n - 1][0] - manual) < 1e-13);
    }
}

TEST_CASE("intermediate q is dominated termwise by q = 2") {
    const TorusRotationSystem sys{{0.37}};
    const FourierFunction f = random_function(5, 23);
    ProcessSpec spec;
    spec.family = Family::GaussianCentered;
    const SamplePath path = sample_path(spec, 16, 25);
    const PowerSchedule sched = random_schedule(16, 1, 26, 12);
    std::vector<std::size_t> grid(16);
    for (std::size_t i = 0; i < 16; ++i) grid[i] = i + 1;
    const std::vector<double> pts = {0.2};
    const SeriesTrajectory q2 = normalized_series(path, sched, f, sys, 2.0, pts, grid);
    const SeriesTrajectory q15 = normalized_series(path, sched, f, sys, 1.5, pts, grid);
    for (std::size_t gi = 1; gi < grid.size(); ++gi) {
        const double step2 = std::abs(q2.values[gi][0] - q2.values[gi - 1][0]);
        const double step15 = std::abs(q15.values[gi][0] - q15.values[gi - 1][0]);
        CHECK(step15 <= step2 + 1e-14);
    }
}

TEST_CASE("q outside [1, 2] is rejected") {
    const TorusRotationSystem sys{{0.1}};
    const FourierFunction f = random_function(2, 29);
    ProcessSpec spec;
    spec.family = Family::Rademacher;
    const SamplePath path = sample_path(spec, 4, 30);
    PowerSchedule sched;
    sched.dim = 1;
    sched.flat = {1, 2, 3, 4};
    CHECK_THROWS_AS(normalized_series(path, sched, f, sys, 0.5, {0.0}, {4}),
                    std::invalid_argument);
}

// ---------------------------------------------------------------------
// Wiener-Wintner machinery
// ---------------------------------------------------------------------

TEST_CASE("zero window function has zero norm") {
    const BernoulliWindowFunction f(1, {0.0, 0.0});
    const WwEstimate est = ww_norm(f, 16, 2.0, 10, 1);
    CHECK(est.value == 0.0);
}

TEST_CASE("two-step digit norm is exactly one") {
    // (1/2) max_t |eps_1 e^{it} + eps_2 e^{2it}| = 1 for every bit pattern
    const BernoulliWindowFunction digit(1, {-1.0, 1.0});
    const WwEstimate est = ww_norm(digit, 2, 2.0, 8, 3, 1e-4);
    CHECK(est.value == doctest::Approx(1.0).epsilon(2e-4));
    CHECK(est.stderr_ < 1e-12); // the statistic is constant over patterns
}

TEST_CASE("digit norms decay like sqrt(log n / n) and respect the bound") {
    const BernoulliWindowFunction digit(1, {-1.0, 1.0});
    for (std::size_t n : {256u, 1024u, 4096u}) {
        const WwEstimate est = ww_norm(digit, n, 2.0, 40, 5);
        const double shape = std::sqrt(std::log(static_cast<double>(n)) / static_cast<double>(n));
        CHECK(est.value / shape > 0.3);
        CHECK(est.value / shape < 3.0);
        CHECK(est.value <= ww_norm_rhs(digit, n, 2.0));
    }
}

TEST_CASE("window-one right side has the closed form") {
    const BernoulliWindowFunction digit(1, {-1.0, 1.0});
    const std::size_t n = 64;
    const double expect = ww_constant(2.0) * std::sqrt(std::log(64.0)) / 8.0;
    CHECK(ww_norm_rhs(digit, n, 2.0) == doctest::Approx(expect));
}

TEST_CASE("right side grows with the window") {
    const BernoulliWindowFunction w1 = cylinder_function(1, {1});
    const BernoulliWindowFunction w2 = cylinder_function(2, {1, 0});
    const BernoulliWindowFunction w3 = cylinder_function(3, {1, 0, 1});
    // compare at equal sup norms by rescaling: the cross term adds n*k
    const double r1 = ww_norm_rhs(w1, 128, 2.0) / w1.sup_norm();
    const double r2 = ww_norm_rhs(w2, 128, 2.0) / w2.sup_norm();
    const double r3 = ww_norm_rhs(w3, 128, 2.0) / w3.sup_norm();
    CHECK(r1 < r2);
    CHECK(r2 < r3);
}

TEST_CASE("exponent fit recovers exact power laws") {
    std::vector<std::size_t> ns = {256, 512, 1024, 2048, 4096};
    std::vector<double> half, constant, loghalf;
    for (std::size_t n : ns) {
        half.push_back(3.0 / std::sqrt(static_cast<double>(n)));
        constant.push_back(0.7);
        loghalf.push_back(2.0 * std::sqrt(std::log(static_cast<double>(n))) /
                          std::sqrt(static_cast<double>(n)));
    }
    const ExponentFit f1 = ww_exponent_fit(ns, half);
    CHECK(f1.alpha_hat == doctest::Approx(0.5).epsilon(1e-12));
    for (double r : f1.residuals) CHECK(std::abs(r) < 1e-12);
    const ExponentFit f2 = ww_exponent_fit(ns, constant);
    CHECK(f2.alpha_hat == doctest::Approx(0.0));
    const ExponentFit f3 = ww_exponent_fit(ns, loghalf);
    CHECK(f3.alpha_hat > 0.40);
    CHECK(f3.alpha_hat < 0.50);
}

TEST_CASE("cylinder functions are centered with the right values") {
    const BernoulliWindowFunction f = cylinder_function(1, {1});
    CHECK(f.table[0] == doctest::Approx(-0.5));
    CHECK(f.table[1] == doctest::Approx(0.5));
    for (int k = 1; k <= 4; ++k) {
        std::vector<int> pattern;
        for (int b = 0; b < k; ++b) pattern.push_back(b % 2);
        const BernoulliWindowFunction g = cylinder_function(k, pattern);
        double mean = 0.0;
        for (double v : g.table) mean += v;
        CHECK(mean == 0.0);
        CHECK(g.sup_norm() <= 1.0);
    }
}

TEST_CASE("cylinder evaluations decorrelate beyond the window") {
    const BernoulliWindowFunction f = cylinder_function(2, {1, 1});
    CounterRng rng(31);
    const std::size_t trials = 20000;
    double corr = 0.0;
    for (std::size_t t = 0; t < trials; ++t) {
        std::vector<int> bits(8);
        for (auto& b : bits) b = rng.next_bit() ? 1 : 0;
        corr += f.value(bits, 0) * f.value(bits, 3); // lag 3 >= window + 1
    }
    corr /= static_cast<double>(trials);
    CHECK(std::abs(corr) <= 5.0 * 0.25 / std::sqrt(static_cast<double>(trials)));
}

TEST_CASE("norm is invariant under a global sign flip") {
    const BernoulliWindowFunction f = cylinder_function(2, {0, 1});
    std::vector<double> neg(f.table);
    for (double& v : neg) v = -v;
    const BernoulliWindowFunction g(2, std::move(neg));
    const WwEstimate a = ww_norm(f, 64, 2.0, 20, 9);
    const WwEstimate b = ww_norm(g, 64, 2.0, 20, 9);
    CHECK(a.value == b.value);
}

TEST_CASE("cylinder ratio check passes with margin") {
    const BernoulliWindowFunction f = cylinder_function(1, {1});
    const CylinderRatioCheck chk = cylinder_ratio_check(f, {64, 256, 1024}, 2.0, 40, 13);
    CHECK(chk.pass);
    CHECK(chk.margin > 10.0);
}

TEST_CASE("grid supremum agrees with the certified bracket at small n") {
    const BernoulliWindowFunction f = cylinder_function(2, {1, 0});
    CounterRng rng(17);
    for (int trial = 0; trial < 5; ++trial) {
        const std::size_t n = 48;
        std::vector<int> bits(n + 2);
        for (auto& b : bits) b = rng.next_bit() ? 1 : 0;
        std::vector<cdouble> coeffs(n);
        std::vector<double> freqs(n);
        for (std::size_t k = 1; k <= n; ++k) {
            coeffs[k - 1] = f.value(bits, k);
            freqs[k - 1] = static_cast<double>(k);
        }
        std::vector<cdouble> by_freq(n + 1, cdouble(0, 0));
        for (std::size_t k = 1; k <= n; ++k) by_freq[k] = coeffs[k - 1];
        const auto values = eval_on_circle_grid(by_freq, next_pow2(32 * n));
        double grid_sup = 0.0;
        for (const auto& v : values) grid_sup = std::max(grid_sup, std::abs(v));
        SupOptions opts;
        opts.tol = 1e-5;
        const SupResult cert =
            certified_sup(ExpSum(std::move(coeffs), std::move(freqs), 1),
                          Box(std::numbers::pi, 1), opts);
        CHECK(grid_sup <= cert.bound.upper + 1e-9);
        CHECK(grid_sup >= cert.bound.lower * (1.0 - 5e-3));
    }
}
