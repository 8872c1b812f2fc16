#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>

#include "aplab/expsum.hpp"
#include "aplab/fft.hpp"
#include "aplab/grid_kernels.hpp"
#include "aplab/rng.hpp"

using namespace aplab;

namespace {

ExpSum random_sum(std::size_t n, int dim, std::uint64_t seed, double freq_range = 8.0) {
    CounterRng rng(seed);
    std::vector<cdouble> coeffs(n);
    std::vector<double> freqs(n * static_cast<std::size_t>(dim));
    for (auto& c : coeffs) c = rng.next_cgauss();
    for (auto& f : freqs) f = rng.next_uniform(-freq_range, freq_range);
    return ExpSum(std::move(coeffs), std::move(freqs), dim);
}

} // namespace

TEST_CASE("fft matches a naive dft") {
    CounterRng rng(21);
    const std::size_t n = 64;
    std::vector<cdouble> a(n);
    for (auto& c : a) c = rng.next_cgauss();
    auto fast = a;
    fft_radix2(fast, false);
    for (std::size_t j = 0; j < n; ++j) {
        cdouble slow(0, 0);
        for (std::size_t k = 0; k < n; ++k) {
            const double ang = 2.0 * std::numbers::pi * static_cast<double>(j * k) / static_cast<double>(n);
            slow += a[k] * cdouble(std::cos(ang), std::sin(ang));
        }
        CHECK(std::abs(fast[j] - slow) < 1e-9);
    }
}

TEST_CASE("fft round trip") {
    CounterRng rng(22);
    std::vector<cdouble> a(128);
    for (auto& c : a) c = rng.next_cgauss();
    auto b = a;
    fft_radix2(b, true);
    fft_radix2(b, false);
    for (std::size_t j = 0; j < a.size(); ++j) {
        CHECK(std::abs(b[j] / static_cast<double>(a.size()) - a[j]) < 1e-12);
    }
}

TEST_CASE("serial and omp grid maxima agree exactly") {
    for (std::uint64_t seed = 1; seed <= 6; ++seed) {
        const int dim = seed % 2 == 0 ? 2 : 1;
        const ExpSum p = random_sum(24, dim, seed);
        const std::size_t pts = dim == 1 ? 30000 : 173;
        const GridSpec g{Box(std::numbers::pi, dim), pts, GridKind::Endpoints};
        const GridMax a = grid_max_abs_serial(p, g);
        const GridMax b = grid_max_abs_omp(p, g);
        CHECK(a.value == b.value);
        CHECK(a.arg_index == b.arg_index);
    }
}

TEST_CASE("serial and omp prefix scans agree exactly") {
    for (std::uint64_t seed = 11; seed <= 14; ++seed) {
        const int dim = seed % 2 == 0 ? 2 : 1;
        const ExpSum p = random_sum(16, dim, seed);
        const std::size_t pts = dim == 1 ? 9001 : 101;
        const GridSpec g{Box(1.5, dim), pts, GridKind::CellCenters};
        const PrefixScan a = prefix_grid_scan_serial(p, g, 16, true);
        const PrefixScan b = prefix_grid_scan_omp(p, g, 16, true);
        CHECK(a.global_max == b.global_max);
        CHECK(a.arg_prefix == b.arg_prefix);
        CHECK(a.arg_index == b.arg_index);
        for (std::size_t k = 0; k < 16; ++k) CHECK(a.prefix_max[k] == b.prefix_max[k]);
        REQUIRE(a.pointwise_running_max.size() == b.pointwise_running_max.size());
        for (std::size_t j = 0; j < a.pointwise_running_max.size(); ++j) {
            CHECK(a.pointwise_running_max[j] == b.pointwise_running_max[j]);
        }
    }
}

TEST_CASE("prefix scan matches direct evaluation") {
    const ExpSum p = random_sum(10, 1, 33);
    const GridSpec g{Box(2.0, 1), 512, GridKind::Endpoints};
    const PrefixScan scan = prefix_grid_scan(p, g, 10);
    for (std::size_t l = 1; l <= 10; ++l) {
        const ExpSum pl = p.prefix(l);
        double direct = 0.0;
        for (std::size_t j = 0; j < 512; ++j) {
            const double t = g.coord(j);
            direct = std::max(direct, std::abs(pl.evaluate(std::span(&t, 1))));
        }
        CHECK(scan.prefix_max[l - 1] == doctest::Approx(direct).epsilon(1e-12));
    }
}

TEST_CASE("prefix bracket really brackets") {
    const ExpSum p = random_sum(12, 1, 44);
    const GridSpec coarse{Box(std::numbers::pi, 1), 256, GridKind::Endpoints};
    const PrefixBracket br = prefix_grid_bracket(p, coarse, 12);
    // a much denser grid must stay below the slack-padded upper bound
    const GridSpec fine{Box(std::numbers::pi, 1), 100001, GridKind::Endpoints};
    const PrefixScan scan = prefix_grid_scan(p, fine, 12);
    for (std::size_t l = 0; l < 12; ++l) {
        CHECK(scan.prefix_max[l] <= br.upper[l] + 1e-12);
        CHECK(br.lower[l] <= scan.prefix_max[l] + 1e-12);
    }
}

TEST_CASE("circle sup bracket contains the dense maximum") {
    CounterRng rng(55);
    std::vector<cdouble> by_freq(33, cdouble(0, 0));
    for (auto& c : by_freq) c = rng.next_cgauss();
    const CircleSupBracket br = circle_sup_bracket(by_freq, std::numbers::pi);
    std::vector<double> freqs(33);
    std::vector<cdouble> coeffs(by_freq);
    for (std::size_t k = 0; k < 33; ++k) freqs[k] = static_cast<double>(k);
    const ExpSum p(std::move(coeffs), std::move(freqs), 1);
    const GridSpec fine{Box(std::numbers::pi, 1), 200001, GridKind::Endpoints};
    const double dense = grid_max_abs(p, fine).value;
    CHECK(br.lower <= dense + 1e-12);
    CHECK(dense <= br.upper + 1e-12);
}

TEST_CASE("cell-center grid measures the box") {
    const GridSpec g{Box(2.0, 2), 10, GridKind::CellCenters};
    CHECK(g.total_points() == 100);
    CHECK(g.cell_volume() == doctest::Approx(16.0 / 100.0));
    CHECK(g.coord(0) == doctest::Approx(-2.0 + 0.2));
    CHECK(g.coord(9) == doctest::Approx(2.0 - 0.2));
}
