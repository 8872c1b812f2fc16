#include "aplab/certified_sup.hpp"

#include <algorithm>
#include <cmath>
#include <queue>
#include <stdexcept>

#include "aplab/grid_kernels.hpp"
#include "aplab/rng.hpp"

namespace aplab {
namespace {

constexpr std::size_t kWave = 64; // cells refined per round, fixed for determinism

struct Cell {
    std::vector<double> center;
    std::vector<double> half;
    double value = 0.0; // |P(center)|
    double ub = 0.0;
    std::uint64_t id = 0;
};

struct CellOrder {
    bool operator()(const Cell& a, const Cell& b) const {
        if (a.ub != b.ub) return a.ub < b.ub; // max-heap on ub
        return a.id > b.id;
    }
};

// Global curvature data for the squared modulus F = |P|^2:
//   |dF/dt_i|      <= 2 L_i A            (not used directly; the local
//                                          gradient of F is evaluated)
//   |d2F/dt_idt_j| <= 2 (L_i L_j + A Q_ij),  Q_ij = sum_k |a_k||l_k^i||l_k^j|
struct BoundData {
    std::vector<double> L;
    std::vector<double> HF; // s x s row-major
    double A = 0.0;
    bool curvature = true;
};

BoundData make_bound_data(const ExpSum& p, bool curvature) {
    const std::size_t s = static_cast<std::size_t>(p.dim());
    BoundData d;
    d.L = p.gradient_bound();
    d.A = p.coeff_abs_sum();
    d.curvature = curvature;
    d.HF.assign(s * s, 0.0);
    if (curvature) {
        std::vector<double> Q(s * s, 0.0);
        for (std::size_t k = 0; k < p.size(); ++k) {
            const double am = std::abs(p.coeff(k));
            for (std::size_t i = 0; i < s; ++i) {
                for (std::size_t j = 0; j < s; ++j) {
                    Q[i * s + j] += am * std::abs(p.freq(k, static_cast<int>(i))) *
                                    std::abs(p.freq(k, static_cast<int>(j)));
                }
            }
        }
        for (std::size_t i = 0; i < s; ++i) {
            for (std::size_t j = 0; j < s; ++j) {
                d.HF[i * s + j] = 2.0 * (d.L[i] * d.L[j] + d.A * Q[i * s + j]);
            }
        }
    }
    return d;
}

// Evaluate the cell center and attach a sound upper bound for sup over the
// cell: the Lipschitz estimate always, intersected with the second-order
// bound on |P|^2 whose gradient vanishes at interior modulus maxima.
void evaluate_cell(const ExpSum& p, const BoundData& d, Cell& cell) {
    const std::size_t s = cell.center.size();
    std::vector<cdouble> grad(s);
    const cdouble val = p.evaluate_with_gradient(cell.center, grad);
    const double mod = std::abs(val);
    cell.value = mod;
    double lip = mod;
    for (std::size_t i = 0; i < s; ++i) lip += d.L[i] * cell.half[i];
    cell.ub = lip;
    if (d.curvature) {
        double f = std::norm(val);
        for (std::size_t i = 0; i < s; ++i) {
            const double df = 2.0 * (val.real() * grad[i].real() + val.imag() * grad[i].imag());
            f += std::abs(df) * cell.half[i];
        }
        for (std::size_t i = 0; i < s; ++i) {
            for (std::size_t j = 0; j < s; ++j) {
                f += 0.5 * d.HF[i * s + j] * cell.half[i] * cell.half[j];
            }
        }
        if (f >= 0.0) cell.ub = std::min(cell.ub, std::sqrt(f));
    }
}

} // namespace

SupResult certified_sup(const ExpSum& p, const Box& box, const SupOptions& opts) {
    if (!(opts.tol > 0.0)) throw std::invalid_argument("certified_sup: tol must be positive");
    if (box.dim != p.dim()) throw std::invalid_argument("certified_sup: box/sum dimension mismatch");

    const std::size_t s = static_cast<std::size_t>(p.dim());
    SupResult res;
    res.argmax.assign(s, 0.0);
    if (p.size() == 0) {
        res.bound = {0.0, 0.0, opts.tol};
        return res;
    }

    const BoundData data = make_bound_data(p, opts.use_curvature);

    double lower = 0.0;
    if (opts.seed_grid >= 2) {
        const GridSpec seed{box, opts.seed_grid, GridKind::Endpoints};
        const GridMax g = grid_max_abs(p, seed);
        lower = g.value;
        res.argmax = g.arg_point;
        res.evals += seed.total_points();
    }

    std::priority_queue<Cell, std::vector<Cell>, CellOrder> heap;
    std::uint64_t next_id = 0;

    Cell root;
    root.center.assign(s, 0.0);
    root.half.assign(s, box.half_width);
    root.id = next_id++;
    evaluate_cell(p, data, root);
    ++res.evals;
    if (root.value > lower) {
        lower = root.value;
        res.argmax = root.center;
    }
    double upper = std::max(lower, root.ub);
    heap.push(std::move(root));

    std::vector<Cell> wave;
    std::vector<Cell> children;
    while (true) {
        upper = heap.empty() ? lower : std::max(lower, heap.top().ub);
        if (upper - lower <= opts.tol) {
            res.bound = {lower, upper, opts.tol};
            res.status = SupStatus::Converged;
            return res;
        }
        if (res.evals >= opts.max_evals) {
            res.bound = {lower, upper, opts.tol};
            res.status = SupStatus::BudgetExhausted;
            return res;
        }

        wave.clear();
        while (wave.size() < kWave && !heap.empty()) {
            Cell c = heap.top();
            heap.pop();
            if (c.ub <= lower) continue; // cannot contain anything new
            wave.push_back(std::move(c));
        }
        if (wave.empty()) continue; // heap drained; loop recomputes the bracket

        children.clear();
        children.reserve(2 * wave.size());
        for (const Cell& c : wave) {
            std::size_t axis = 0;
            for (std::size_t i = 1; i < s; ++i) {
                if (c.half[i] > c.half[axis]) axis = i;
            }
            for (int side = -1; side <= 1; side += 2) {
                Cell child;
                child.center = c.center;
                child.half = c.half;
                child.half[axis] *= 0.5;
                child.center[axis] += side * child.half[axis];
                child.id = next_id++;
                children.push_back(std::move(child));
            }
        }

#pragma omp parallel for schedule(static)
        for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(children.size()); ++i) {
            evaluate_cell(p, data, children[static_cast<std::size_t>(i)]);
        }
        res.evals += children.size();

        for (Cell& c : children) { // serial merge keeps results thread-count independent
            if (c.value > lower) {
                lower = c.value;
                res.argmax = c.center;
            }
        }
        for (Cell& c : children) {
            if (c.ub > lower) heap.push(std::move(c));
        }
    }
}

RunningMaxResult running_partial_max(const ExpSum& p, std::size_t m, const Box& box,
                                     const SupOptions& opts) {
    if (m < 1 || m > p.size()) {
        throw std::invalid_argument("running_partial_max: need 1 <= m <= term count");
    }
    RunningMaxResult out;
    out.bound = {0.0, 0.0, opts.tol};
    out.argmax.assign(static_cast<std::size_t>(p.dim()), 0.0);
    for (std::size_t l = 1; l <= m; ++l) {
        const SupResult r = certified_sup(p.prefix(l), box, opts);
        out.evals += r.evals;
        if (r.status == SupStatus::BudgetExhausted) out.status = SupStatus::BudgetExhausted;
        if (r.bound.lower > out.bound.lower || l == 1) {
            out.bound.lower = r.bound.lower;
            out.argmax = r.argmax;
            out.arg_prefix = l;
        }
        out.bound.upper = std::max(out.bound.upper, r.bound.upper);
    }
    return out;
}

DerivativeBound derivative_sup_bound(const ExpSum& p, std::size_t m, const Box& box,
                                     bool monotone, double tol) {
    if (p.dim() != 1) throw std::invalid_argument("derivative_sup_bound: one-dimensional sums only");
    if (m < 1 || m > p.size()) throw std::invalid_argument("derivative_sup_bound: need 1 <= m <= n");
    if (monotone && !p.prefix(m).monotone_frequencies()) {
        throw std::invalid_argument("derivative_sup_bound: frequencies not positive nondecreasing");
    }
    SupOptions opts;
    opts.tol = tol;
    const RunningMaxResult run = running_partial_max(p, m, box, opts);
    const double factor = monotone ? 2.0 * p.freq(m - 1, 0)
                                   : 3.0 * static_cast<double>(m) * p.freq_abs_running_max(0, m);
    DerivativeBound out;
    out.partial_max = run.bound;
    out.status = run.status;
    out.bound = factor * run.bound.upper;
    return out;
}

double sampled_derivative_max(const ExpSum& p, std::size_t m, const Box& box,
                              std::size_t grid_pts) {
    if (p.dim() != 1) throw std::invalid_argument("sampled_derivative_max: one-dimensional sums only");
    std::vector<cdouble> dcoeffs(m);
    std::vector<double> freqs(m);
    for (std::size_t k = 0; k < m; ++k) {
        const double lam = p.freq(k, 0);
        dcoeffs[k] = cdouble(0.0, 1.0) * lam * p.coeff(k);
        freqs[k] = lam;
    }
    const ExpSum dp = ExpSum::one_dim(std::move(dcoeffs), std::move(freqs));
    const GridSpec grid{box, grid_pts, GridKind::Endpoints};
    return prefix_grid_scan(dp, grid, m).global_max;
}

namespace {

// half widths and constant-axis flags; the center is filled in by the caller
Rectangle witness_shape(const ExpSum& p, std::size_t m, const Box& box, bool monotone,
                        std::vector<bool>& constant_axis) {
    const std::size_t s = static_cast<std::size_t>(p.dim());
    const double sd = static_cast<double>(s);
    const double md = static_cast<double>(m);
    Rectangle rect;
    rect.center.assign(s, 0.0);
    rect.half_widths.assign(s, 0.0);
    constant_axis.assign(s, false);
    for (std::size_t i = 0; i < s; ++i) {
        double denom;
        if (monotone) {
            denom = 4.0 * sd * p.freq(m - 1, static_cast<int>(i));
        } else {
            denom = 6.0 * sd * md * p.freq_abs_running_max(static_cast<int>(i), m);
        }
        // zero frequency on an axis: the partial sums are constant in t_i
        constant_axis[i] = !(denom > 0.0);
        rect.half_widths[i] = denom > 0.0 ? std::min(1.0 / denom, box.half_width)
                                          : box.half_width;
    }
    return rect;
}

void validate_witness_args(const ExpSum& p, std::size_t m, bool monotone) {
    if (m < 1 || m > p.size()) throw std::invalid_argument("witness_rectangle: need 1 <= m <= n");
    if (monotone && !p.prefix(m).monotone_frequencies()) {
        throw std::invalid_argument("witness_rectangle: frequencies not positive nondecreasing");
    }
}

} // namespace

Rectangle witness_rectangle_from(const ExpSum& p, std::size_t m, const Box& box,
                                 const RunningMaxResult& run, bool monotone) {
    validate_witness_args(p, m, monotone);
    std::vector<bool> constant_axis;
    Rectangle rect = witness_shape(p, m, box, monotone, constant_axis);
    rect.center = run.argmax;
    for (std::size_t i = 0; i < constant_axis.size(); ++i) {
        if (constant_axis[i]) rect.center[i] = 0.0;
    }
    return rect;
}

Rectangle witness_rectangle(const ExpSum& p, std::size_t m, const Box& box, double tol,
                            bool monotone) {
    validate_witness_args(p, m, monotone);

    // coarse lower bound sets the absolute tolerance for the argmax search
    const GridSpec coarse{box, 257, GridKind::Endpoints};
    const double rough = prefix_grid_scan(p, coarse, m).global_max;

    std::vector<bool> constant_axis;
    Rectangle rect = witness_shape(p, m, box, monotone, constant_axis);
    if (rough <= 0.0) return rect; // everything vanishes; any center works

    SupOptions opts;
    opts.tol = std::max(tol * rough * 0.5, 1e-12 * rough);
    const RunningMaxResult run = running_partial_max(p, m, box, opts);
    rect.center = run.argmax;
    // a constant axis supports the full interval, so recenter it
    for (std::size_t i = 0; i < constant_axis.size(); ++i) {
        if (constant_axis[i]) rect.center[i] = 0.0;
    }
    return rect;
}

WitnessCheck witness_halfmax_check(const ExpSum& p, std::size_t m, const Box& box,
                                   const Rectangle& rect, double tol,
                                   std::size_t n_samples, std::uint64_t seed,
                                   double m_lower_hint) {
    const std::size_t s = static_cast<std::size_t>(p.dim());

    WitnessCheck out;
    out.samples = n_samples;
    if (m_lower_hint > 0.0) {
        out.m_lower = m_lower_hint;
    } else {
        const GridSpec coarse{box, 257, GridKind::Endpoints};
        const double rough = prefix_grid_scan(p, coarse, m).global_max;
        if (rough <= 0.0) {
            out.min_ratio = 1.0;
            out.ok = true;
            out.m_lower = 0.0;
            return out;
        }
        SupOptions opts;
        opts.tol = std::max(tol * rough * 0.5, 1e-12 * rough);
        const RunningMaxResult run = running_partial_max(p, m, box, opts);
        out.m_lower = run.bound.lower;
    }

    CounterRng rng(seed);
    std::vector<double> t(s);
    double min_ratio = std::numeric_limits<double>::infinity();
    for (std::size_t q = 0; q < n_samples; ++q) {
        for (std::size_t i = 0; i < s; ++i) {
            const double lo = std::max(rect.center[i] - rect.half_widths[i], -box.half_width);
            const double hi = std::min(rect.center[i] + rect.half_widths[i], box.half_width);
            t[i] = rng.next_uniform(lo, hi);
        }
        double runmax = 0.0;
        cdouble acc(0, 0);
        for (std::size_t k = 0; k < m; ++k) {
            double phase = 0.0;
            for (std::size_t i = 0; i < s; ++i) phase += p.freq(k, static_cast<int>(i)) * t[i];
            acc += p.coeff(k) * cdouble(std::cos(phase), std::sin(phase));
            runmax = std::max(runmax, std::abs(acc));
        }
        min_ratio = std::min(min_ratio, runmax / out.m_lower);
    }
    out.min_ratio = min_ratio;
    out.ok = min_ratio >= 0.5 - tol;
    return out;
}

} // namespace aplab
