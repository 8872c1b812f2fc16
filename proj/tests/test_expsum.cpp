#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>
#include <sstream>

#include "aplab/expsum.hpp"
#include "aplab/rng.hpp"

using namespace aplab;

namespace {

ExpSum random_sum(std::size_t n, int dim, std::uint64_t seed) {
    CounterRng rng(seed);
    std::vector<cdouble> coeffs(n);
    std::vector<double> freqs(n * static_cast<std::size_t>(dim));
    for (auto& c : coeffs) c = rng.next_cgauss();
    for (auto& f : freqs) f = rng.next_uniform(-5.0, 5.0);
    return ExpSum(std::move(coeffs), std::move(freqs), dim);
}

// independent oracle: per-term values summed in reversed order
cdouble reversed_eval(const ExpSum& p, std::span<const double> t) {
    cdouble acc(0, 0);
    for (std::size_t k = p.size(); k-- > 0;) {
        double phase = 0.0;
        for (int i = 0; i < p.dim(); ++i) phase += p.freq(k, i) * t[static_cast<std::size_t>(i)];
        acc += p.coeff(k) * cdouble(std::cos(phase), std::sin(phase));
    }
    return acc;
}

} // namespace

TEST_CASE("constant term evaluates to its coefficient") {
    const ExpSum p = ExpSum::one_dim({cdouble(1, 0)}, {0.0});
    for (double t : {-2.0, 0.0, 0.7}) {
        CHECK(std::abs(p.evaluate(std::span(&t, 1)) - cdouble(1, 0)) < 1e-15);
    }
}

TEST_CASE("phases vanish at the origin") {
    const ExpSum p = ExpSum::one_dim({cdouble(1, 0), cdouble(0, 1)}, {1.0, 2.0});
    const double t = 0.0;
    CHECK(std::abs(p.evaluate(std::span(&t, 1)) - cdouble(1, 1)) < 1e-15);
}

TEST_CASE("evaluation agrees with reversed re-summation at random points") {
    const ExpSum p = random_sum(16, 2, 5);
    CounterRng rng(6);
    for (int q = 0; q < 64; ++q) {
        const double t[2] = {rng.next_uniform(-3.0, 3.0), rng.next_uniform(-3.0, 3.0)};
        const cdouble a = p.evaluate(std::span(t, 2));
        const cdouble b = reversed_eval(p, std::span(t, 2));
        CHECK(std::abs(a - b) <= 1e-12);
    }
}

TEST_CASE("evaluate rejects dimension mismatches") {
    const ExpSum p = random_sum(4, 2, 9);
    const double t = 0.5;
    CHECK_THROWS_AS((void)p.evaluate(std::span(&t, 1)), std::invalid_argument);
}

TEST_CASE("gradient bound is zero for zero frequencies") {
    const ExpSum p = ExpSum::one_dim({cdouble(2, 1), cdouble(0, -3)}, {0.0, 0.0});
    CHECK(p.gradient_bound()[0] == 0.0);
}

TEST_CASE("gradient bound sums |a_k||lambda_k|") {
    const ExpSum p = ExpSum::one_dim({cdouble(1, 0), cdouble(1, 0)}, {1.0, 2.0});
    CHECK(p.gradient_bound()[0] == doctest::Approx(3.0));
}

TEST_CASE("finite differences never exceed the gradient bound") {
    const ExpSum p = random_sum(12, 2, 8);
    const auto L = p.gradient_bound();
    CounterRng rng(18);
    const double h = 1e-6;
    for (int q = 0; q < 100; ++q) {
        double t[2] = {rng.next_uniform(-2.0, 2.0), rng.next_uniform(-2.0, 2.0)};
        for (int i = 0; i < 2; ++i) {
            double tp[2] = {t[0], t[1]};
            double tm[2] = {t[0], t[1]};
            tp[i] += h;
            tm[i] -= h;
            const cdouble d = (p.evaluate(std::span(tp, 2)) - p.evaluate(std::span(tm, 2))) / (2.0 * h);
            CHECK(std::abs(d) <= L[static_cast<std::size_t>(i)] + 1e-6);
        }
    }
}

TEST_CASE("gradient from evaluate_with_gradient matches finite differences") {
    const ExpSum p = random_sum(10, 2, 12);
    const double t[2] = {0.3, -1.2};
    std::vector<cdouble> grad(2);
    const cdouble v = p.evaluate_with_gradient(std::span(t, 2), grad);
    CHECK(std::abs(v - p.evaluate(std::span(t, 2))) < 1e-14);
    const double h = 1e-6;
    for (int i = 0; i < 2; ++i) {
        double tp[2] = {t[0], t[1]};
        double tm[2] = {t[0], t[1]};
        tp[i] += h;
        tm[i] -= h;
        const cdouble fd = (p.evaluate(std::span(tp, 2)) - p.evaluate(std::span(tm, 2))) / (2.0 * h);
        CHECK(std::abs(fd - grad[static_cast<std::size_t>(i)]) < 1e-6);
    }
}

TEST_CASE("construction validates input") {
    CHECK_THROWS_AS(ExpSum({cdouble(1, 0)}, {1.0, 2.0}, 1), std::invalid_argument);
    CHECK_THROWS_AS(ExpSum({cdouble(1.0 / 0.0, 0)}, {1.0}, 1), std::invalid_argument);
    CHECK_THROWS_AS(Box(0.0, 1), std::invalid_argument);
    CHECK_THROWS_AS(Box(1.0, 0), std::invalid_argument);
}

TEST_CASE("text record round trip") {
    const ExpSum p = random_sum(7, 2, 31);
    std::ostringstream os;
    write_expsum(os, p);
    std::istringstream is(os.str());
    const ExpSum q = read_expsum(is);
    REQUIRE(q.size() == p.size());
    REQUIRE(q.dim() == p.dim());
    for (std::size_t k = 0; k < p.size(); ++k) {
        CHECK(q.coeff(k) == p.coeff(k));
        for (int i = 0; i < p.dim(); ++i) CHECK(q.freq(k, i) == p.freq(k, i));
    }
}

TEST_CASE("text record tolerates comments and requires the header") {
    std::istringstream ok("# comment\ns 1\n1.0 0.0 2.5\n");
    const ExpSum p = read_expsum(ok);
    CHECK(p.size() == 1);
    CHECK(p.freq(0, 0) == 2.5);
    std::istringstream bad("1.0 0.0 2.5\n");
    CHECK_THROWS(read_expsum(bad));
}

TEST_CASE("monotone frequency detection") {
    CHECK(ExpSum::one_dim({cdouble(1, 0), cdouble(1, 0)}, {1.0, 2.0}).monotone_frequencies());
    CHECK_FALSE(ExpSum::one_dim({cdouble(1, 0), cdouble(1, 0)}, {2.0, 1.0}).monotone_frequencies());
    CHECK_FALSE(ExpSum::one_dim({cdouble(1, 0)}, {0.0}).monotone_frequencies());
}

TEST_CASE("rectangle area is clipped to the box") {
    Rectangle r;
    r.center = {3.0};
    r.half_widths = {1.0};
    const Box box(std::numbers::pi, 1);
    // only [2, pi] survives
    CHECK(r.clipped_area(box) == doctest::Approx(std::numbers::pi - 2.0));
}
