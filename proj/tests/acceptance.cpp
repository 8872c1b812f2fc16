// Acceptance suite: one pass/fail line per criterion, nonzero exit on any
// failure.  An optional argv[1] selects a single criterion.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include "aplab/certified_sup.hpp"
#include "aplab/convergence.hpp"
#include "aplab/ergodic.hpp"
#include "aplab/expsum.hpp"
#include "aplab/grid_kernels.hpp"
#include "aplab/inequality.hpp"
#include "aplab/process.hpp"
#include "aplab/rng.hpp"
#include "aplab/sigma.hpp"

using namespace aplab;
namespace fs = std::filesystem;

namespace {

int failures = 0;

void report(int idx, bool ok, const std::string& what, const std::string& detail) {
    std::printf("[%s] criterion %d: %s%s%s\n", ok ? "PASS" : "FAIL", idx, what.c_str(),
                detail.empty() ? "" : " -- ", detail.c_str());
    std::fflush(stdout);
    if (!ok) ++failures;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

ExpSum random_instance(CounterRng& rng, std::size_t n, int dim, double freq_range,
                       bool rademacher) {
    std::vector<cdouble> coeffs(n);
    std::vector<double> freqs(n * static_cast<std::size_t>(dim));
    for (auto& c : coeffs) c = rademacher ? cdouble(rng.next_sign(), 0.0) : rng.next_cgauss();
    for (auto& f : freqs) f = rng.next_uniform(-freq_range, freq_range);
    return ExpSum(std::move(coeffs), std::move(freqs), dim);
}

// -------------------------------------------------------------------
// 1. certified maximization vs dense grids
// -------------------------------------------------------------------
void criterion1() {
    const auto t0 = std::chrono::steady_clock::now();
    bool ok = true;
    std::string detail;
    for (int i = 0; i < 100 && ok; ++i) {
        CounterRng rng(derive_seed(101, static_cast<std::uint64_t>(i)));
        const int dim = (i % 2) + 1;
        const std::size_t n = 1 + rng.next_u64() % 64;
        const ExpSum p = random_instance(rng, n, dim, dim == 1 ? 32.0 : 4.0, i % 3 == 0);
        const Box box(std::numbers::pi, dim);
        SupOptions opts;
        opts.tol = 1e-3;
        const SupResult r = certified_sup(p, box, opts);
        const std::size_t pts = dim == 1 ? 1000000 : 1000; // 10^6 points total
        const GridSpec grid{box, pts, GridKind::Endpoints};
        const double g = grid_max_abs(p, grid).value;
        // The search may land closer to a peak than any oracle grid point, so
        // the lower endpoint is compared against the grid max plus the grid's
        // own Lipschitz resolution slack (g + slack is a certified upper bound
        // of the true sup, hence of the lower endpoint).
        double grid_slack = 0.0;
        for (double li : p.gradient_bound()) grid_slack += li * 0.5 * grid.step();
        const bool contains = g <= r.bound.upper + 1e-12 &&
                              r.bound.lower <= g + grid_slack;
        const bool inst_ok = r.status == SupStatus::Converged && r.bound.width() <= 1e-3 &&
                             contains;
        if (!inst_ok) {
            ok = false;
            std::ostringstream os;
            os << "instance " << i << " n=" << n << " s=" << dim << " width=" << r.bound.width()
               << " lower=" << r.bound.lower << " grid=" << g << " upper=" << r.bound.upper;
            detail = os.str();
        }
    }
    const double dt = seconds_since(t0);
    if (dt > 300.0) {
        ok = false;
        detail += " runtime over budget";
    }
    std::ostringstream os;
    os << "100 brackets contain their 1e6-point grid maxima at width 1e-3 ("
       << static_cast<int>(dt) << "s)";
    report(1, ok, os.str(), detail);
}

// -------------------------------------------------------------------
// 2. derivative bounds and witness rectangles on 1000 instances
// -------------------------------------------------------------------
void criterion2() {
    bool ok = true;
    std::string detail;
    for (int i = 0; i < 1000 && ok; ++i) {
        CounterRng rng(derive_seed(202, static_cast<std::uint64_t>(i)));
        const int dim = i % 3 == 0 ? 2 : 1; // derivative bounds live in one dimension
        const std::size_t n = 2 + rng.next_u64() % 10;
        const bool monotone = dim == 1 && i % 4 == 0;
        ExpSum p = [&] {
            if (!monotone) return random_instance(rng, n, dim, 6.0, i % 5 == 0);
            std::vector<cdouble> coeffs(n);
            std::vector<double> freqs(n);
            double acc = 0.0;
            for (std::size_t k = 0; k < n; ++k) {
                coeffs[k] = rng.next_sign();
                acc += rng.next_uniform(0.1, 2.0);
                freqs[k] = acc;
            }
            return ExpSum(std::move(coeffs), std::move(freqs), 1);
        }();
        const std::size_t m = 1 + rng.next_u64() % n;
        const Box box(std::numbers::pi, dim);

        if (dim == 1) {
            const DerivativeBound db = derivative_sup_bound(p, m, box, monotone, 1e-4);
            const double sampled = sampled_derivative_max(p, m, box, 20001);
            if (sampled > db.bound * (1.0 + 1e-9) + 1e-9) {
                ok = false;
                detail = "derivative bound violated at instance " + std::to_string(i);
                break;
            }
        }

        // one certified run feeds both the rectangle and the half-max check
        const GridSpec coarse{box, 257, GridKind::Endpoints};
        const double rough = prefix_grid_scan(p, coarse, m).global_max;
        SupOptions sup_opts;
        sup_opts.tol = std::max(1e-3 * rough * 0.5, 1e-12);
        const RunningMaxResult run = running_partial_max(p, m, box, sup_opts);
        const Rectangle rect = witness_rectangle_from(p, m, box, run, monotone);
        const WitnessCheck chk = witness_halfmax_check(p, m, box, rect, 1e-3, 200,
                                                       derive_seed(203, static_cast<std::uint64_t>(i)),
                                                       run.bound.lower);
        double area_bound = 1.0;
        for (int ax = 0; ax < dim; ++ax) {
            const double denom = monotone
                ? 4.0 * dim * p.freq(m - 1, ax)
                : 6.0 * dim * static_cast<double>(m) * p.freq_abs_running_max(ax, m);
            area_bound *= denom > 0.0 ? std::min(1.0 / denom, box.half_width) : box.half_width;
        }
        if (!chk.ok || rect.clipped_area(box) < area_bound * (1.0 - 1e-12)) {
            ok = false;
            std::ostringstream os;
            os << "witness failed at instance " << i << " min_ratio=" << chk.min_ratio
               << " area=" << rect.clipped_area(box) << " bound=" << area_bound;
            detail = os.str();
        }
    }
    report(2, ok, "derivative bounds and half-max witnesses on 1000 instances", detail);
}

// -------------------------------------------------------------------
// 3. sigma-system verification on 500 draws
// -------------------------------------------------------------------
void criterion3() {
    bool ok = true;
    std::string detail;
    for (int i = 0; i < 500 && ok; ++i) {
        CounterRng rng(derive_seed(303, static_cast<std::uint64_t>(i)));
        const int dim = (i % 2) + 1;
        const std::size_t m = 2 + rng.next_u64() % 31; // m <= 32
        FreqTable freqs;
        freqs.dim = dim;
        const double range = dim == 1 ? 8.0 : 2.0;
        for (std::size_t k = 0; k < m * static_cast<std::size_t>(dim); ++k) {
            freqs.flat.push_back(rng.next_uniform(-range, range));
        }
        const SigmaSystem sys = SigmaSystem::exponential(freqs, false, 1.0, 0.5);
        ProcessSpec spec;
        spec.family = Family::Rademacher;
        spec.complex_phases = i % 4 == 0;
        const SamplePath path = sample_path(spec, m, derive_seed(304, static_cast<std::uint64_t>(i)));
        const double T = dim == 1 ? std::numbers::pi : 1.0;
        const std::size_t grid = dim == 1 ? 8192 : 320;
        const SigmaReport rep = verify_sigma_property(sys, path.values, m, Box(T, dim), grid);
        if (!rep.grid_adequate || !rep.pass) {
            ok = false;
            std::ostringstream os;
            os << "draw " << i << " s=" << dim << " m=" << m << " adequate=" << rep.grid_adequate
               << " measured=" << rep.measured << " required=" << rep.required;
            detail = os.str();
        }
    }
    report(3, ok, "derived sigma constants verified on 500 coefficient draws", detail);
}

// -------------------------------------------------------------------
// 4. Orlicz bound at 10^4 trials
// -------------------------------------------------------------------
void criterion4() {
    BoundCheckConfig cfg;
    cfg.id = BoundId::Thm31Orlicz;
    cfg.process.family = Family::Rademacher;
    cfg.freqs.dim = 1;
    for (std::size_t k = 1; k <= 32; ++k) cfg.freqs.flat.push_back(static_cast<double>(k));
    cfg.n = 0;
    cfg.m = 32;
    cfg.T = std::numbers::pi;
    cfg.trials = 10000;
    cfg.seed = 404;
    cfg.grid_pts = 1024;
    const BoundReport rep = check_bound(cfg);
    std::ostringstream os;
    os << "lhs=" << rep.lhs << " rhs=" << rep.rhs << " margin=" << rep.margin;
    report(4, rep.pass && rep.margin > 10.0,
           "exponential-moment bound with 1e4 trials and margin > 10", os.str());
}

// -------------------------------------------------------------------
// 5. exhaustive maximal-inequality check on short sign sequences
// -------------------------------------------------------------------
void criterion5() {
    bool ok = true;
    std::string detail;
    for (std::size_t len = 1; len <= 6 && ok; ++len) {
        for (unsigned mask = 0; mask < (1u << len) && ok; ++mask) {
            std::vector<double> x(len);
            for (std::size_t k = 0; k < len; ++k) x[k] = (mask >> k) & 1u ? 1.0 : -1.0;
            const double p = 4.0, q = 2.0;
            double c_q1 = 0.0, c_q2 = 0.0;
            for (std::size_t j = 0; j < len; ++j) {
                double s = 0.0;
                for (std::size_t l = j; l < len; ++l) {
                    s += x[l];
                    const double w = static_cast<double>(l - j + 1);
                    c_q1 = std::max(c_q1, std::pow(std::abs(s), p) / w);
                    c_q2 = std::max(c_q2, std::pow(std::abs(s), p) / std::pow(w, q));
                }
            }
            for (std::size_t nn = 0; nn < len && ok; ++nn) {
                double s = 0.0, best = 0.0;
                for (std::size_t mm = nn; mm < len; ++mm) {
                    s += x[mm];
                    best = std::max(best, std::pow(std::abs(s), p));
                    const double w = static_cast<double>(mm - nn + 1);
                    const bool ok26 = best <= moricz_constant(c_q2, p, q) * std::pow(w, q) * (1 + 1e-12);
                    const bool ok5 = best <= moricz_log_bound(c_q1, p, mm + 1, w) * (1 + 1e-12);
                    if (!ok26 || !ok5) {
                        ok = false;
                        detail = "violated for mask " + std::to_string(mask) + " len " +
                                 std::to_string(len);
                    }
                }
            }
        }
    }
    report(5, ok, "exhaustive +-1 sequences obey both maximal bounds exactly", detail);
}

// -------------------------------------------------------------------
// 6. block-construction properties on 50 random weight sequences
// -------------------------------------------------------------------
void criterion6() {
    bool ok = true;
    std::string detail;
    for (int trial = 0; trial < 50 && ok; ++trial) {
        CounterRng rng(derive_seed(606, static_cast<std::uint64_t>(trial)));
        const double a = rng.next_uniform(0.0, 2.4);
        const double b = rng.next_uniform(0.0, 1.5);
        const double c0 = rng.next_uniform(0.05, 0.9);
        const double gamma = std::min(3.0, a + 0.37 * b + 0.05);
        WeightSequence A;
        const auto base = [a, b, c0](std::int64_t n) {
            const double nd = static_cast<double>(n);
            return c0 * std::pow(nd, a) * std::pow(std::log(nd + 1.0), b) + 1.0;
        };
        double C = 0.0;
        for (std::int64_t n = 1; n <= 100000; n = n < 64 ? n + 1 : n + 977) {
            C = std::max(C, base(n) / std::pow(static_cast<double>(n), gamma));
        }
        A.eval = [base, C](std::int64_t n) { return base(n) / C; };
        A.cap = GrowthCap{1.0, gamma};
        const double p = rng.next_uniform(1.1, 3.0);
        const BlockSchedule s = kappa_blocks(A, p, 100000);
        const KappaPropertyReport rep = kappa_properties_check(A, p, gamma, s);
        if (!rep.ok()) {
            ok = false;
            std::ostringstream os;
            os << "trial " << trial << " a=" << a << " b=" << b << " p=" << p
               << " worst_slack=" << rep.worst_slack;
            detail = os.str();
        }
    }
    report(6, ok, "block-construction properties (i)-(iii) up to horizon 1e5", detail);
}

// -------------------------------------------------------------------
// 7. spectral transfer on 1000 random cases
// -------------------------------------------------------------------
void criterion7() {
    bool ok = true;
    std::string detail;
    const TorusRotationSystem sys1{{std::numbers::sqrt2 - 1.0}};
    const TorusRotationSystem sys2{{std::numbers::sqrt2 - 1.0, std::numbers::sqrt3 - 1.0}};
    for (int c = 0; c < 1000 && ok; ++c) {
        CounterRng rng(derive_seed(707, static_cast<std::uint64_t>(c)));
        const TorusRotationSystem& sys = c % 6 == 0 ? sys2 : sys1;
        std::vector<std::pair<std::int64_t, cdouble>> entries;
        for (int i = 0; i < 5; ++i) {
            entries.emplace_back(static_cast<std::int64_t>(rng.next_u64() % 11) - 5,
                                 rng.next_cgauss());
        }
        const FourierFunction f = FourierFunction::from_modes(std::move(entries));
        const std::size_t n = 4 + rng.next_u64() % 13;
        PowerSchedule sched;
        sched.dim = sys.dim();
        for (std::size_t k = 0; k < n * static_cast<std::size_t>(sys.dim()); ++k) {
            sched.flat.push_back(static_cast<std::int64_t>(rng.next_u64() % 48));
        }
        std::vector<cdouble> coeffs(n);
        for (auto& a : coeffs) a = rng.next_cgauss();
        const TransferCheck tc = spectral_transfer_check(coeffs, sched, f, sys, 1e-9);
        if (!tc.ok) {
            ok = false;
            std::ostringstream os;
            os << "case " << c << " lhs=" << tc.lhs << " rhs=" << tc.rhs;
            detail = os.str();
        }
    }
    report(7, ok, "spectral transfer lhs <= rhs + 1e-9 on 1000 cases", detail);
}

// -------------------------------------------------------------------
// 8. growth ratios of the random sup
// -------------------------------------------------------------------
void criterion8() {
    std::vector<std::size_t> grid;
    for (std::size_t n = 64; n <= 4096; n *= 2) grid.push_back(n);
    const auto rows = salem_zygmund_growth(grid, 200, 808);
    bool ok = true;
    std::string detail;
    for (const auto& row : rows) {
        if (!(row.ratio >= 0.5 && row.ratio <= 3.0)) {
            ok = false;
            detail = "ratio out of band at n=" + std::to_string(row.n);
        }
    }
    const std::size_t top = rows.size();
    double lo = 1e300, hi = 0.0;
    for (std::size_t i = top - 3; i < top; ++i) {
        lo = std::min(lo, rows[i].ratio);
        hi = std::max(hi, rows[i].ratio);
    }
    if ((hi - lo) / lo >= 0.25) {
        ok = false;
        detail += " top-three variation too large";
    }
    std::ostringstream os;
    os << "ratios";
    for (const auto& row : rows) os << " " << row.ratio;
    report(8, ok, "growth ratios in [0.5, 3] with stable top three", os.str() + " " + detail);
}

// -------------------------------------------------------------------
// 9. Wiener-Wintner exponent and cylinder ratios
// -------------------------------------------------------------------
void criterion9() {
    const BernoulliWindowFunction digit(1, {-1.0, 1.0});
    std::vector<std::size_t> grid;
    for (std::size_t n = 256; n <= 16384; n *= 2) grid.push_back(n);
    std::vector<double> norms;
    for (std::size_t gi = 0; gi < grid.size(); ++gi) {
        norms.push_back(ww_norm(digit, grid[gi], 2.0, 100, derive_seed(909, gi)).value);
    }
    const ExponentFit fit = ww_exponent_fit(grid, norms);
    bool ok = fit.alpha_hat >= 0.40 && fit.alpha_hat <= 0.50;
    std::ostringstream os;
    os << "alpha_hat=" << fit.alpha_hat;

    for (int k = 1; k <= 3; ++k) {
        std::vector<int> pattern;
        for (int b = 0; b < k; ++b) pattern.push_back(1);
        const BernoulliWindowFunction f = cylinder_function(k, pattern);
        const CylinderRatioCheck chk =
            cylinder_ratio_check(f, {64, 256, 1024, 4096}, 2.0, 100, derive_seed(910, static_cast<std::uint64_t>(k)));
        os << " margin_k" << k << "=" << chk.margin;
        ok = ok && chk.pass && chk.margin > 2.0;
    }
    report(9, ok, "exponent fit in [0.40, 0.50]; cylinder ratios under sqrt(k) C_p", os.str());
}

// -------------------------------------------------------------------
// 10. byte-identical CLI output across thread counts
// -------------------------------------------------------------------
std::string slurp(const fs::path& p) {
    std::ifstream in(p);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void criterion10() {
    const fs::path dir = fs::temp_directory_path() / "aplab_acceptance_det";
    fs::remove_all(dir);
    fs::create_directories(dir);
    const char* configs[2] = {
        R"({"command": "check-bound", "seed": 19, "bound": {"id": "COR37_SUP"},
            "process": {"family": "rademacher"},
            "freqs": {"kind": "linear", "dim": 1},
            "truncation": {"ranges": [[0, 8], [0, 32]], "T": [1.0, 2.0, 4.0]},
            "trials": 200, "grid": 512})",
        R"({"command": "ww", "seed": 23, "window": 1, "table": [-1.0, 1.0],
            "p": 2.0, "n_grid": [64, 128, 256], "trials": 30, "fit": true})"};
    bool ok = true;
    std::string detail;
    for (int ci = 0; ci < 2 && ok; ++ci) {
        const fs::path cfg = dir / ("config" + std::to_string(ci) + ".json");
        {
            std::ofstream out(cfg);
            out << configs[ci];
        }
        const fs::path out1 = dir / ("t1_" + std::to_string(ci));
        const fs::path out4 = dir / ("t4_" + std::to_string(ci));
        const std::string base = std::string(APLAB_CLI_PATH) + " --config " + cfg.string();
        if (std::system((base + " --out " + out1.string() + " --threads 1").c_str()) != 0 ||
            std::system((base + " --out " + out4.string() + " --threads 4").c_str()) != 0) {
            ok = false;
            detail = "cli run failed";
            break;
        }
        for (const auto& entry : fs::directory_iterator(out1)) {
            const fs::path other = out4 / entry.path().filename();
            if (!fs::exists(other) || slurp(entry.path()) != slurp(other)) {
                ok = false;
                detail = "mismatch in " + entry.path().filename().string();
            }
        }
    }
    report(10, ok, "CLI output is byte-identical across --threads", detail);
}

} // namespace

int main(int argc, char** argv) {
    const int only = argc > 1 ? std::atoi(argv[1]) : 0;
    using Fn = void (*)();
    const Fn crits[] = {criterion1, criterion2, criterion3, criterion4, criterion5,
                        criterion6, criterion7, criterion8, criterion9, criterion10};
    for (int i = 0; i < 10; ++i) {
        if (only == 0 || only == i + 1) crits[i]();
    }
    if (failures == 0) {
        std::printf("acceptance: all criteria passed\n");
    } else {
        std::printf("acceptance: %d criterion(s) failed\n", failures);
    }
    return failures == 0 ? 0 : 1;
}
