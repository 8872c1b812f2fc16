// Timings for the data-parallel kernels, serial reference vs OpenMP.
// Run:  ./aplab-bench [terms] [grid]

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <numbers>
#include <omp.h>

#include "aplab/certified_sup.hpp"
#include "aplab/expsum.hpp"
#include "aplab/grid_kernels.hpp"
#include "aplab/inequality.hpp"
#include "aplab/rng.hpp"

using namespace aplab;

namespace {

template <typename F>
double time_it(F&& f, int reps = 3) {
    double best = 1e300;
    for (int r = 0; r < reps; ++r) {
        const auto t0 = std::chrono::steady_clock::now();
        f();
        const auto t1 = std::chrono::steady_clock::now();
        best = std::min(best, std::chrono::duration<double>(t1 - t0).count());
    }
    return best;
}

ExpSum random_sum(std::size_t n, int dim, std::uint64_t seed) {
    CounterRng rng(seed);
    std::vector<cdouble> coeffs(n);
    std::vector<double> freqs(n * static_cast<std::size_t>(dim));
    for (auto& c : coeffs) c = rng.next_cgauss();
    for (auto& f : freqs) f = rng.next_uniform(-8.0, 8.0);
    return ExpSum(std::move(coeffs), std::move(freqs), dim);
}

} // namespace

int main(int argc, char** argv) {
    const std::size_t terms = argc > 1 ? std::strtoull(argv[1], nullptr, 10) : 48;
    const std::size_t grid1d = argc > 2 ? std::strtoull(argv[2], nullptr, 10) : 1000000;

    std::printf("threads: %d\n", omp_get_max_threads());

    {
        const ExpSum p = random_sum(terms, 1, 7);
        const GridSpec g{Box(std::numbers::pi, 1), grid1d, GridKind::Endpoints};
        GridMax a, b;
        const double ts = time_it([&] { a = grid_max_abs_serial(p, g); });
        const double tp = time_it([&] { b = grid_max_abs_omp(p, g); });
        std::printf("grid max 1d   n=%zu pts=%zu   serial %.3fs  omp %.3fs  speedup %.2fx  equal=%d\n",
                    terms, grid1d, ts, tp, ts / tp, a.value == b.value && a.arg_index == b.arg_index);
    }
    {
        const ExpSum p = random_sum(terms, 2, 8);
        const std::size_t pts = 1000;
        const GridSpec g{Box(std::numbers::pi, 2), pts, GridKind::Endpoints};
        GridMax a, b;
        const double ts = time_it([&] { a = grid_max_abs_serial(p, g); });
        const double tp = time_it([&] { b = grid_max_abs_omp(p, g); });
        std::printf("grid max 2d   n=%zu pts=%zux%zu serial %.3fs  omp %.3fs  speedup %.2fx  equal=%d\n",
                    terms, pts, pts, ts, tp, ts / tp, a.value == b.value && a.arg_index == b.arg_index);
    }
    {
        const ExpSum p = random_sum(terms, 1, 9);
        const GridSpec g{Box(std::numbers::pi, 1), 65536, GridKind::Endpoints};
        PrefixScan a, b;
        const double ts = time_it([&] { a = prefix_grid_scan_serial(p, g, terms); });
        const double tp = time_it([&] { b = prefix_grid_scan_omp(p, g, terms); });
        std::printf("prefix scan   n=%zu pts=65536  serial %.3fs  omp %.3fs  speedup %.2fx  equal=%d\n",
                    terms, ts, tp, ts / tp,
                    a.global_max == b.global_max && a.arg_index == b.arg_index);
    }
    {
        const ExpSum p = random_sum(terms, 1, 10);
        SupOptions opts;
        opts.tol = 1e-4;
        SupResult r;
        const double t = time_it([&] { r = certified_sup(p, Box(std::numbers::pi, 1), opts); });
        std::printf("certified sup n=%zu tol=1e-4  %.3fs  evals=%llu  width=%.2e\n", terms, t,
                    static_cast<unsigned long long>(r.evals), r.bound.width());
    }
    {
        BoundCheckConfig cfg;
        cfg.id = BoundId::Thm31Orlicz;
        cfg.process.family = Family::Rademacher;
        cfg.freqs.dim = 1;
        for (std::size_t k = 1; k <= 32; ++k) cfg.freqs.flat.push_back(static_cast<double>(k));
        cfg.n = 0;
        cfg.m = 32;
        cfg.T = std::numbers::pi;
        cfg.trials = 2000;
        cfg.seed = 11;
        cfg.grid_pts = 1024;
        BoundReport rep;
        const double t = time_it([&] { rep = check_bound(cfg); }, 1);
        std::printf("bound trials  m=32 trials=2000  %.3fs  margin=%.1f\n", t, rep.margin);
    }
    return 0;
}
