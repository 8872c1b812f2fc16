#include "aplab/cli.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <numbers>
#include <omp.h>
#include <sstream>

#include <json.hpp>

#include "aplab/certified_sup.hpp"
#include "aplab/convergence.hpp"
#include "aplab/csv.hpp"
#include "aplab/ergodic.hpp"
#include "aplab/expsum.hpp"
#include "aplab/grid_kernels.hpp"
#include "aplab/inequality.hpp"
#include "aplab/process.hpp"
#include "aplab/rng.hpp"
#include "aplab/sigma.hpp"
#include "aplab/version.hpp"

namespace aplab {
namespace {

using nlohmann::json;

struct validation_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

std::uint64_t derive_named(std::uint64_t seed, const std::string& name) {
    return derive_seed(seed, fnv1a(name));
}

// ---------------------------------------------------------------------
// config pieces
// ---------------------------------------------------------------------

json require(const json& j, const char* key) {
    if (!j.contains(key)) throw validation_error(std::string("config: missing key '") + key + "'");
    return j.at(key);
}

// sequence spec: {"kind":"ones"} | {"kind":"explicit","values":[...]}
//              | {"kind":"powerlog","c":1,"a":0,"b":0}  ->  c k^a (log(k+1))^b
std::function<double(std::int64_t)> parse_sequence(const json& j) {
    const std::string kind = require(j, "kind").get<std::string>();
    if (kind == "ones") {
        return [](std::int64_t) { return 1.0; };
    }
    if (kind == "explicit") {
        auto values = require(j, "values").get<std::vector<double>>();
        return [values](std::int64_t k) {
            if (k < 1 || static_cast<std::size_t>(k) > values.size()) {
                throw validation_error("sequence: index outside the explicit table");
            }
            return values[static_cast<std::size_t>(k - 1)];
        };
    }
    if (kind == "powerlog") {
        const double c = j.value("c", 1.0);
        const double a = j.value("a", 0.0);
        const double b = j.value("b", 0.0);
        return [c, a, b](std::int64_t k) {
            const double kd = static_cast<double>(k);
            return c * std::pow(kd, a) * std::pow(std::log(kd + 1.0), b);
        };
    }
    throw validation_error("sequence: unknown kind '" + kind + "'");
}

std::vector<double> materialize(const std::function<double(std::int64_t)>& f, std::size_t n) {
    std::vector<double> v(n);
    for (std::size_t k = 1; k <= n; ++k) v[k - 1] = f(static_cast<std::int64_t>(k));
    return v;
}

// frequency spec: linear (lambda_k^i = scale_i k), explicit rows, uniform
// draws in [low, high], or zero
FreqTable parse_freqs(const json& j, std::size_t count_hint, std::uint64_t seed) {
    FreqTable t;
    const std::string kind = require(j, "kind").get<std::string>();
    t.dim = j.value("dim", 1);
    if (t.dim < 1) throw validation_error("freqs: dim must be >= 1");
    std::size_t count = j.value("count", count_hint);
    if (kind == "explicit") {
        const auto rows = require(j, "rows").get<std::vector<std::vector<double>>>();
        for (const auto& r : rows) {
            if (static_cast<int>(r.size()) != t.dim) {
                throw validation_error("freqs: explicit row width must equal dim");
            }
            t.flat.insert(t.flat.end(), r.begin(), r.end());
        }
        return t;
    }
    if (count == 0) throw validation_error("freqs: count required");
    if (kind == "linear") {
        std::vector<double> scale(static_cast<std::size_t>(t.dim), 1.0);
        if (j.contains("scale")) {
            scale = j.at("scale").get<std::vector<double>>();
            if (scale.size() != static_cast<std::size_t>(t.dim)) {
                throw validation_error("freqs: scale width must equal dim");
            }
        }
        for (std::size_t k = 1; k <= count; ++k) {
            for (int i = 0; i < t.dim; ++i) {
                t.flat.push_back(scale[static_cast<std::size_t>(i)] * static_cast<double>(k));
            }
        }
        return t;
    }
    if (kind == "uniform") {
        const double lo = require(j, "low").get<double>();
        const double hi = require(j, "high").get<double>();
        CounterRng rng(derive_named(seed, "freqs"));
        for (std::size_t k = 0; k < count * static_cast<std::size_t>(t.dim); ++k) {
            t.flat.push_back(rng.next_uniform(lo, hi));
        }
        return t;
    }
    if (kind == "zero") {
        t.flat.assign(count * static_cast<std::size_t>(t.dim), 0.0);
        return t;
    }
    throw validation_error("freqs: unknown kind '" + kind + "'");
}

ProcessSpec parse_process(const json& j, std::uint64_t seed) {
    ProcessSpec spec;
    const std::string fam = require(j, "family").get<std::string>();
    const auto parsed = family_from_name(fam);
    if (!parsed) throw validation_error("process: unknown family '" + fam + "'");
    spec.family = *parsed;
    if (j.contains("magnitudes")) {
        const std::size_t n = j.value("n", std::size_t{0});
        if (n == 0) throw validation_error("process: magnitudes need an 'n' length");
        spec.magnitudes = materialize(parse_sequence(j.at("magnitudes")), n);
    }
    spec.bound = j.value("bound", 1.0);
    spec.window = j.value("window", 0);
    spec.complex_phases = j.value("phases", false);
    spec.seed = derive_named(seed, "process");
    spec.validate();
    return spec;
}

ExpSum parse_expsum(const json& j) {
    if (j.contains("expsum_file")) {
        return read_expsum_file(j.at("expsum_file").get<std::string>());
    }
    if (!j.contains("expsum")) throw validation_error("sup: need 'expsum' or 'expsum_file'");
    const json& e = j.at("expsum");
    const int dim = require(e, "s").get<int>();
    std::vector<cdouble> coeffs;
    std::vector<double> freqs;
    for (const auto& row : require(e, "terms")) {
        const auto r = row.get<std::vector<double>>();
        if (static_cast<int>(r.size()) != dim + 2) {
            throw validation_error("sup: each term row is [re, im, lambda_1..lambda_s]");
        }
        coeffs.emplace_back(r[0], r[1]);
        for (int i = 0; i < dim; ++i) freqs.push_back(r[static_cast<std::size_t>(i) + 2]);
    }
    return ExpSum(std::move(coeffs), std::move(freqs), dim);
}

std::string join_axes(const std::vector<double>& v) {
    std::string s;
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (i) s += ';';
        s += fmt_g(v[i]);
    }
    return s;
}

// ---------------------------------------------------------------------
// subcommands
// ---------------------------------------------------------------------

int cmd_sup(const json& cfg, const std::filesystem::path& out, std::uint64_t seed) {
    const ExpSum p = parse_expsum(cfg);
    const Box box(cfg.value("T", std::numbers::pi), p.dim());
    SupOptions opts;
    opts.tol = cfg.value("tol", 1e-3);
    opts.max_evals = cfg.value("budget", std::uint64_t{1000000});
    // validate the witness request before any table is written
    std::optional<std::pair<std::size_t, std::pair<bool, double>>> witness;
    if (cfg.contains("witness")) {
        const json& w = cfg.at("witness");
        const std::size_t m = require(w, "m").get<std::size_t>();
        if (m < 1 || m > p.size()) throw validation_error("sup: witness m out of range");
        witness = {m, {w.value("monotone", false), w.value("tol", 1e-3)}};
    }
    const SupResult r = certified_sup(p, box, opts);

    CsvWriter csv((out / "sup.csv").string(),
                  {"experiment", "dim", "terms", "T", "tol", "lower", "upper", "width", "status",
                   "evals", "argmax"});
    csv.row({"sup", std::to_string(p.dim()), std::to_string(p.size()), fmt_g(box.half_width),
             fmt_g(opts.tol), fmt_full(r.bound.lower), fmt_full(r.bound.upper),
             fmt_full(r.bound.width()),
             r.status == SupStatus::Converged ? "converged" : "budget_exhausted",
             std::to_string(r.evals), join_axes(r.argmax)});

    int rc = r.status == SupStatus::BudgetExhausted ? 3 : 0;
    if (witness) {
        const std::size_t m = witness->first;
        const bool monotone = witness->second.first;
        const double tol = witness->second.second;
        const Rectangle rect = witness_rectangle(p, m, box, tol, monotone);
        const WitnessCheck chk = witness_halfmax_check(p, m, box, rect, tol, 200,
                                                       derive_named(seed, "witness"));
        double area_bound = 1.0;
        for (int i = 0; i < p.dim(); ++i) {
            const double lam = p.freq_abs_running_max(i, m);
            const double denom = monotone ? 4.0 * p.dim() * p.freq(m - 1, i)
                                          : 6.0 * p.dim() * static_cast<double>(m) * lam;
            area_bound *= denom > 0.0 ? std::min(1.0 / denom, box.half_width) : box.half_width;
        }
        CsvWriter wcsv((out / "witness.csv").string(),
                       {"experiment", "m", "monotone", "center", "half_widths", "clipped_area",
                        "area_lower_bound", "min_ratio", "half_max_ok"});
        wcsv.row({"witness", std::to_string(m), monotone ? "1" : "0", join_axes(rect.center),
                  join_axes(rect.half_widths), fmt_full(rect.clipped_area(box)),
                  fmt_full(area_bound), fmt_full(chk.min_ratio), chk.ok ? "1" : "0"});
        if (!chk.ok) rc = std::max(rc, 2);
    }
    return rc;
}

int cmd_verify_sigma(const json& cfg, const std::filesystem::path& out, std::uint64_t seed) {
    const std::size_t m = require(cfg, "m").get<std::size_t>();
    const std::string family = cfg.value("family", std::string("exponential"));
    const double T = cfg.value("T", std::numbers::pi);

    SigmaSystem sys = SigmaSystem::constant();
    int dim = 1;
    if (family == "exponential") {
        FreqTable freqs = parse_freqs(require(cfg, "freqs"), m, seed);
        dim = freqs.dim;
        const bool monotone = cfg.value("monotone", false);
        if (cfg.value("uniform_variant", false)) {
            sys = SigmaSystem::exponential_uniform(std::move(freqs), monotone,
                                                   cfg.value("rho2", 0.5));
        } else {
            sys = SigmaSystem::exponential(std::move(freqs), monotone, cfg.value("rho1", 1.0),
                                           cfg.value("rho2", 0.5));
        }
    } else if (family == "constant") {
        sys = SigmaSystem::constant(cfg.value("rho1", 1.0), cfg.value("rho2", 0.5));
    } else {
        throw validation_error("verify-sigma: unknown family '" + family + "'");
    }

    const ProcessSpec proc = parse_process(require(cfg, "process"), seed);
    const SamplePath path = sample_path(proc, m, derive_named(seed, "coeffs"));
    if (cfg.value("dump_path", false)) {
        write_path_csv((out / "path.csv").string(), path);
    }
    const Box box(T, dim);
    const std::size_t grid = cfg.value("grid", std::size_t{1024});
    const SigmaReport rep = verify_sigma_property(sys, path.values, m, box, grid);

    CsvWriter csv((out / "sigma.csv").string(),
                  {"experiment", "family", "m", "T", "grid", "sigma_m", "rho1", "rho2", "measured",
                   "required", "global_max", "grid_slack", "grid_adequate", "pass"});
    csv.row({"verify-sigma", family, std::to_string(m), fmt_g(T), std::to_string(grid),
             fmt_full(sys.sigma(m)), fmt_g(sys.rho1), fmt_g(sys.rho2), fmt_full(rep.measured),
             fmt_full(rep.required), fmt_full(rep.global_max), fmt_full(rep.grid_slack),
             rep.grid_adequate ? "1" : "0", rep.pass ? "1" : "0"});
    if (!rep.grid_adequate) return 1;
    return rep.pass ? 0 : 2;
}

int cmd_check_bound(const json& cfg, const std::filesystem::path& out, std::uint64_t seed) {
    BoundCheckConfig bc;
    const json& b = require(cfg, "bound");
    const std::string idname = require(b, "id").get<std::string>();
    const auto id = bound_id_from_name(idname);
    if (!id) throw validation_error("check-bound: unknown bound id '" + idname + "'");
    bc.id = *id;
    bc.p = b.value("p", 2.0);
    bc.trials = require(cfg, "trials").get<std::size_t>();
    bc.seed = derive_named(seed, "trials");
    bc.grid_pts = cfg.value("grid", std::size_t{2048});
    bc.T = cfg.value("T", 1.0);
    bc.family = cfg.value("family", std::string("exponential")) == "constant"
        ? SigmaFamily::Constant
        : SigmaFamily::Exponential;

    std::size_t count_hint = 0;
    if (cfg.contains("range")) {
        bc.n = require(cfg.at("range"), "n").get<std::size_t>();
        bc.m = require(cfg.at("range"), "m").get<std::size_t>();
        count_hint = bc.m;
    }
    if (cfg.contains("truncation")) {
        const json& tr = cfg.at("truncation");
        for (const auto& r : require(tr, "ranges")) {
            const auto pr = r.get<std::vector<std::size_t>>();
            if (pr.size() != 2) throw validation_error("truncation ranges are [n, m] pairs");
            bc.truncation.ranges.emplace_back(pr[0], pr[1]);
            count_hint = std::max(count_hint, pr[1]);
        }
        bc.truncation.T_values = require(tr, "T").get<std::vector<double>>();
    }
    if (bc.family == SigmaFamily::Exponential) {
        bc.freqs = parse_freqs(require(cfg, "freqs"), count_hint, seed);
    } else {
        bc.freqs.dim = 1;
    }
    json pj = require(cfg, "process");
    if (!pj.contains("n") && pj.contains("magnitudes")) pj["n"] = count_hint;
    bc.process = parse_process(pj, seed);

    const BoundReport rep = check_bound(bc);

    CsvWriter csv((out / "bound.csv").string(),
                  {"bound_id", "family", "p", "n", "m", "T", "trials", "seed", "grid", "lhs",
                   "stderr", "rhs", "margin", "pass", "truncation", "note"});
    csv.row({rep.bound_id, family_name(bc.process.family), fmt_g(bc.p), std::to_string(bc.n),
             std::to_string(bc.m), fmt_g(bc.T), std::to_string(rep.trials),
             std::to_string(rep.seed), std::to_string(bc.grid_pts), fmt_full(rep.lhs),
             fmt_full(rep.stderr_), fmt_full(rep.rhs), fmt_full(rep.margin),
             rep.pass ? "1" : "0", rep.truncation, rep.note});

    std::ofstream rec(out / "bound.txt");
    rec << "bound_id: " << rep.bound_id << "\n"
        << "family: " << family_name(bc.process.family) << "\n"
        << "trials: " << rep.trials << "\n"
        << "seed: " << rep.seed << "\n"
        << "lhs: " << fmt_full(rep.lhs) << "\n"
        << "stderr: " << fmt_full(rep.stderr_) << "\n"
        << "rhs: " << fmt_full(rep.rhs) << "\n"
        << "margin: " << fmt_full(rep.margin) << "\n"
        << "pass: " << (rep.pass ? "true" : "false") << "\n";
    if (!rep.truncation.empty()) rec << "truncation: " << rep.truncation << "\n";
    if (!rep.note.empty()) rec << "note: " << rep.note << "\n";

    return rep.pass ? 0 : 2;
}

int cmd_blocks(const json& cfg, const std::filesystem::path& out, std::uint64_t) {
    const std::string kind = cfg.value("kind", std::string("kappa"));
    const std::int64_t horizon = require(cfg, "horizon").get<std::int64_t>();
    WeightSequence A;
    A.eval = parse_sequence(require(cfg, "weights"));
    if (cfg.contains("gamma")) {
        A.cap = GrowthCap{cfg.value("C", 1.0), cfg.at("gamma").get<double>()};
    }
    A.check_prefix(std::min<std::int64_t>(horizon, 4096));

    BlockSchedule sched;
    KappaPropertyReport props;
    double p = cfg.value("p", 2.0);
    if (kind == "kappa") {
        sched = kappa_blocks(A, p, horizon);
        if (A.cap) props = kappa_properties_check(A, p, A.cap->gamma, sched);
    } else if (kind == "dyadic") {
        sched = dyadic_blocks(A, horizon);
    } else {
        throw validation_error("blocks: kind must be 'kappa' or 'dyadic'");
    }

    CsvWriter csv((out / "blocks.csv").string(), {"experiment", "index", "kappa", "level", "A_kappa"});
    csv.comment(std::string("construction=") + kind + " horizon=" + std::to_string(horizon) +
                (sched.truncated ? " truncated=1" : " truncated=0"));
    if (kind == "kappa" && A.cap) {
        csv.comment(std::string("properties ok_i=") + (props.ok_i ? "1" : "0") +
                    " ok_ii=" + (props.ok_ii ? "1" : "0") + " ok_iii=" + (props.ok_iii ? "1" : "0"));
    }
    for (std::size_t i = 0; i < sched.kappa.size(); ++i) {
        csv.row({kind, std::to_string(i + 1), std::to_string(sched.kappa[i]),
                 i < sched.levels.size() ? std::to_string(sched.levels[i]) : "",
                 fmt_full(A.at(sched.kappa[i]))});
    }
    return 0;
}

int cmd_series(const json& cfg, const std::filesystem::path& out, std::uint64_t seed) {
    const std::string idname = require(cfg, "id").get<std::string>();
    const std::int64_t horizon = require(cfg, "horizon").get<std::int64_t>();

    if (idname == "UNIFORM_TAIL") {
        const ProcessSpec proc = parse_process(require(cfg, "process"), seed);
        const std::size_t n = static_cast<std::size_t>(horizon);
        const SamplePath path = sample_path(proc, n, derive_named(seed, "path"));
        FreqTable freqs = parse_freqs(require(cfg, "freqs"), n, seed);
        WeightSequence A;
        A.eval = [](std::int64_t k) { return static_cast<double>(k); };
        const BlockSchedule sched = dyadic_blocks(A, horizon);
        const Box box(cfg.value("T", std::numbers::pi), freqs.dim);
        const TailDiagnostic diag =
            uniform_tail_diagnostic(path, freqs, box, sched, cfg.value("tol", 0.5));
        CsvWriter csv((out / "series.csv").string(),
                      {"experiment", "block", "end", "sup_lower", "sup_upper"});
        csv.comment(std::string("cauchy_consistent=") + (diag.cauchy_consistent ? "1" : "0"));
        for (std::size_t i = 0; i < diag.block_upper.size(); ++i) {
            csv.row({"uniform-tail", std::to_string(i + 1), std::to_string(sched.kappa[i]),
                     fmt_full(diag.block_lower[i]), fmt_full(diag.block_upper[i])});
        }
        return diag.status == SupStatus::BudgetExhausted ? 3 : 0;
    }

    const auto id = series_id_from_name(idname);
    if (!id) throw validation_error("series: unknown id '" + idname + "'");

    SeriesInputs in;
    in.p = cfg.value("p", 2.0);
    in.q = cfg.value("q", 1.0);
    in.alpha = cfg.contains("x") ? parse_sequence(cfg.at("x"))
                                 : parse_sequence(require(cfg, "alpha"));
    if (cfg.contains("A")) in.weight_A = parse_sequence(cfg.at("A"));
    if (cfg.contains("gamma_seq")) in.gamma_idx = parse_sequence(cfg.at("gamma_seq"));
    if (cfg.contains("j")) in.log_arg = parse_sequence(cfg.at("j"));
    auto parse_env = [&](const char* key) -> std::optional<PowerLogEnvelope> {
        if (!cfg.contains(key)) return std::nullopt;
        const json& e = cfg.at(key);
        PowerLogEnvelope env;
        env.c = e.value("c", 1.0);
        env.a = e.value("a", 0.0);
        env.b = e.value("b", 0.0);
        env.from = e.value("from", std::int64_t{2});
        return env;
    };
    in.term_upper = parse_env("term_upper");
    in.term_lower = parse_env("term_lower");
    in.inner_lower = parse_env("inner_lower");
    if (cfg.contains("finite_support")) {
        in.finite_support = cfg.at("finite_support").get<std::int64_t>();
    }

    const SeriesReport rep = series_condition(*id, in, horizon);
    CsvWriter csv((out / "series.csv").string(),
                  {"experiment", "id", "horizon", "partial", "alt_partial", "tail_bound",
                   "verdict"});
    csv.row({"series", idname, std::to_string(horizon), fmt_full(rep.partial),
             rep.alt_partial ? fmt_full(*rep.alt_partial) : "",
             rep.tail_bound ? fmt_full(*rep.tail_bound) : "", verdict_name(rep.verdict)});
    return 0;
}

int cmd_ergodic(const json& cfg, const std::filesystem::path& out, std::uint64_t seed) {
    const auto alphas = require(cfg, "alphas").get<std::vector<double>>();
    const TorusRotationSystem sys{alphas};

    std::vector<std::pair<std::int64_t, cdouble>> entries;
    for (const auto& row : require(cfg, "modes")) {
        const auto r = row.get<std::vector<double>>();
        if (r.size() != 3) throw validation_error("ergodic: mode rows are [m, re, im]");
        entries.emplace_back(static_cast<std::int64_t>(r[0]), cdouble(r[1], r[2]));
    }
    const FourierFunction f = FourierFunction::from_modes(std::move(entries));

    const std::string check = cfg.value("check", std::string("transfer"));
    if (check == "transfer") {
        const std::size_t cases = cfg.value("cases", std::size_t{100});
        const std::size_t n = cfg.value("n", std::size_t{16});
        CsvWriter csv((out / "ergodic.csv").string(),
                      {"experiment", "case", "lhs", "rhs", "ok"});
        bool all_ok = true;
        SupStatus status = SupStatus::Converged;
        for (std::size_t c = 0; c < cases; ++c) {
            CounterRng rng(derive_seed(derive_named(seed, "transfer"), c));
            std::vector<cdouble> coeffs(n);
            for (auto& a : coeffs) a = rng.next_cgauss();
            PowerSchedule sched;
            sched.dim = sys.dim();
            for (std::size_t k = 0; k < n; ++k) {
                for (int i = 0; i < sys.dim(); ++i) {
                    sched.flat.push_back(static_cast<std::int64_t>(rng.next_u64() % 64));
                }
            }
            const TransferCheck tc = spectral_transfer_check(coeffs, sched, f, sys, 1e-9);
            if (tc.status == SupStatus::BudgetExhausted) status = tc.status;
            all_ok = all_ok && tc.ok;
            csv.row({"transfer", std::to_string(c), fmt_full(tc.lhs), fmt_full(tc.rhs),
                     tc.ok ? "1" : "0"});
        }
        if (status == SupStatus::BudgetExhausted) return 3;
        return all_ok ? 0 : 2;
    }
    if (check == "series") {
        const auto N_grid = require(cfg, "N_grid").get<std::vector<std::size_t>>();
        const auto eval_points = require(cfg, "eval_points").get<std::vector<double>>();
        const double q = cfg.value("q", 2.0);
        json pj = require(cfg, "process");
        if (!pj.contains("n") && pj.contains("magnitudes")) pj["n"] = N_grid.back();
        const ProcessSpec proc = parse_process(pj, seed);
        const SamplePath path = sample_path(proc, N_grid.back(), derive_named(seed, "path"));
        PowerSchedule sched;
        sched.dim = sys.dim();
        const json& sj = require(cfg, "schedule");
        const std::string skind = require(sj, "kind").get<std::string>();
        if (skind == "linear") {
            for (std::size_t k = 1; k <= N_grid.back(); ++k) {
                for (int i = 0; i < sys.dim(); ++i) {
                    sched.flat.push_back(static_cast<std::int64_t>(k));
                }
            }
        } else if (skind == "explicit") {
            sched.flat = require(sj, "rows").get<std::vector<std::int64_t>>();
        } else {
            throw validation_error("ergodic: schedule kind must be linear or explicit");
        }
        const SeriesTrajectory traj =
            normalized_series(path, sched, f, sys, q, eval_points, N_grid);
        CsvWriter csv((out / "ergodic.csv").string(),
                      {"experiment", "N", "point", "re", "im", "tail_l2"});
        for (std::size_t gi = 0; gi < traj.N_grid.size(); ++gi) {
            for (std::size_t yi = 0; yi < eval_points.size(); ++yi) {
                csv.row({"series", std::to_string(traj.N_grid[gi]), fmt_g(eval_points[yi]),
                         fmt_full(traj.values[gi][yi].real()), fmt_full(traj.values[gi][yi].imag()),
                         yi == 0 ? fmt_full(traj.tail_l2[gi]) : ""});
            }
        }
        return 0;
    }
    throw validation_error("ergodic: check must be 'transfer' or 'series'");
}

int cmd_ww(const json& cfg, const std::filesystem::path& out, std::uint64_t seed) {
    BernoulliWindowFunction f = [&]() {
        if (cfg.contains("pattern")) {
            const auto pattern = cfg.at("pattern").get<std::vector<int>>();
            return cylinder_function(static_cast<int>(pattern.size()), pattern);
        }
        const int window = require(cfg, "window").get<int>();
        return BernoulliWindowFunction(window, require(cfg, "table").get<std::vector<double>>());
    }();

    const auto n_grid = require(cfg, "n_grid").get<std::vector<std::size_t>>();
    const double p = cfg.value("p", 2.0);
    const std::size_t trials = require(cfg, "trials").get<std::size_t>();

    CsvWriter csv((out / "ww.csv").string(),
                  {"experiment", "n", "estimate", "stderr", "rhs", "ratio"});
    std::vector<double> norms;
    for (std::size_t gi = 0; gi < n_grid.size(); ++gi) {
        const std::size_t n = n_grid[gi];
        const WwEstimate est = ww_norm(f, n, p, trials, derive_seed(derive_named(seed, "ww"), gi));
        const double rhs = n >= 2 ? ww_norm_rhs(f, n, p) : 0.0;
        const double ratio = est.value * static_cast<double>(n) /
                             std::sqrt(static_cast<double>(n) * std::log(static_cast<double>(n) + 1.0));
        norms.push_back(est.value);
        csv.row({"ww", std::to_string(n), fmt_full(est.value), fmt_full(est.stderr_),
                 fmt_full(rhs), fmt_full(ratio)});
    }

    int rc = 0;
    if (cfg.value("fit", true) && n_grid.size() >= 3) {
        const ExponentFit fit = ww_exponent_fit(n_grid, norms);
        CsvWriter fcsv((out / "ww_fit.csv").string(),
                       {"experiment", "alpha_hat", "stderr"});
        fcsv.row({"ww-fit", fmt_full(fit.alpha_hat), fmt_full(fit.stderr_)});
    }
    if (cfg.value("cylinder_check", false)) {
        const CylinderRatioCheck chk =
            cylinder_ratio_check(f, n_grid, p, trials, derive_named(seed, "cylinder_check"));
        CsvWriter pcsv((out / "ww_cylinder.csv").string(),
                       {"experiment", "n", "ratio", "bound", "pass"});
        for (std::size_t i = 0; i < chk.n_grid.size(); ++i) {
            pcsv.row({"cylinder_check", std::to_string(chk.n_grid[i]), fmt_full(chk.ratios[i]),
                      fmt_full(chk.bound), chk.pass ? "1" : "0"});
        }
        if (!chk.pass) rc = 2;
    }
    return rc;
}

void write_manifest(const std::filesystem::path& out, const json& cfg,
                    const std::string& raw_config, std::uint64_t seed) {
    std::ofstream m(out / "manifest.txt");
    m << "tool: aplab " << kVersion << "\n"
      << "command: " << cfg.value("command", std::string("?")) << "\n"
      << "seed: " << seed << "\n"
      << "config_hash: " << fnv1a(raw_config) << "\n"
      << "config: " << cfg.dump() << "\n";
}

} // namespace

int run_experiment(const RunOptions& opts) {
    try {
        std::ifstream in(opts.config_path);
        if (!in) {
            std::cerr << "cannot open config: " << opts.config_path << "\n";
            return 1;
        }
        std::stringstream buf;
        buf << in.rdbuf();
        const std::string raw = buf.str();
        json cfg;
        try {
            cfg = json::parse(raw);
        } catch (const json::parse_error& e) {
            std::cerr << "config parse error: " << e.what() << "\n";
            return 1;
        }

        if (opts.threads > 0) omp_set_num_threads(opts.threads);

        const std::uint64_t seed = opts.seed_override.value_or(cfg.value("seed", std::uint64_t{0}));
        std::filesystem::path out = opts.out_override.value_or(cfg.value("out", std::string("out")));
        std::filesystem::create_directories(out);

        const std::string command = require(cfg, "command").get<std::string>();
        int rc = -1;
        if (command == "sup") rc = cmd_sup(cfg, out, seed);
        else if (command == "verify-sigma") rc = cmd_verify_sigma(cfg, out, seed);
        else if (command == "check-bound") rc = cmd_check_bound(cfg, out, seed);
        else if (command == "blocks") rc = cmd_blocks(cfg, out, seed);
        else if (command == "series") rc = cmd_series(cfg, out, seed);
        else if (command == "ergodic") rc = cmd_ergodic(cfg, out, seed);
        else if (command == "ww") rc = cmd_ww(cfg, out, seed);
        if (rc < 0) {
            std::cerr << "unknown command: " << command << "\n";
            return 1;
        }
        // a run that got past validation leaves its manifest next to the tables
        write_manifest(out, cfg, raw, seed);
        return rc;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}

} // namespace aplab
