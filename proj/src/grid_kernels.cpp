#include "aplab/grid_kernels.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace aplab {
namespace {

// Fixed work-unit size.  Phase recurrences restart from an exact sincos at
// every block boundary, so point values are identical no matter how blocks
// are distributed over threads; drift within a block stays below ~5e-13
// relative.
constexpr std::size_t kBlock1d = 4096;
constexpr std::size_t kBlockRows2d = 8;

struct Cand {
    double vsq = -1.0; // squared modulus
    int prefix = 0;
    std::size_t index = 0;
};

// value descending, then prefix ascending, then flat index ascending
bool better(const Cand& a, const Cand& b) {
    if (a.vsq != b.vsq) return a.vsq > b.vsq;
    if (a.prefix != b.prefix) return a.prefix < b.prefix;
    return a.index < b.index;
}

cdouble unit_phase(double angle) { return {std::cos(angle), std::sin(angle)}; }

// ---------------------------------------------------------------------
// 1-d scan over points [j0, j1): accumulate partial sums term by term,
// tracking squared block maxima for prefixes k >= first_tracked.
// ---------------------------------------------------------------------
void scan_block_1d(const ExpSum& p, const GridSpec& grid, std::size_t m,
                   std::size_t first_tracked, std::size_t j0, std::size_t j1,
                   bool keep_pointwise, std::vector<cdouble>& acc,
                   std::vector<double>& runmax_sq,
                   std::vector<double>& block_prefix_sq, Cand& best) {
    const double h = grid.step();
    const std::size_t len = j1 - j0;
    std::fill(acc.begin(), acc.begin() + static_cast<std::ptrdiff_t>(len), cdouble(0, 0));
    if (keep_pointwise) {
        std::fill(runmax_sq.begin(), runmax_sq.begin() + static_cast<std::ptrdiff_t>(len), 0.0);
    }
    best = Cand{};
    for (std::size_t k = 0; k < m; ++k) {
        const double lam = p.freq(k, 0);
        const cdouble a = p.coeff(k);
        cdouble z = unit_phase(lam * grid.coord(j0));
        const cdouble w = unit_phase(lam * h);
        if (k < first_tracked) {
            for (std::size_t j = 0; j < len; ++j) {
                acc[j] += a * z;
                z *= w;
            }
            block_prefix_sq[k] = -1.0;
            continue;
        }
        double pm = 0.0;
        Cand local{-1.0, static_cast<int>(k + 1), 0};
        for (std::size_t j = 0; j < len; ++j) {
            acc[j] += a * z;
            z *= w;
            const double v = std::norm(acc[j]);
            if (v > pm) pm = v;
            if (v > local.vsq) {
                local.vsq = v;
                local.index = j0 + j;
            }
            if (keep_pointwise && v > runmax_sq[j]) runmax_sq[j] = v;
        }
        block_prefix_sq[k] = pm;
        if (better(local, best)) best = local;
    }
}

// ---------------------------------------------------------------------
// 2-d scan over row blocks: exp(i(l1*x + l2*y)) factors into a row phase
// times a column phase, each advanced by recurrence.
// ---------------------------------------------------------------------
void scan_block_2d(const ExpSum& p, const GridSpec& grid, std::size_t m,
                   std::size_t first_tracked, std::size_t a0, std::size_t a1,
                   bool keep_pointwise, std::vector<cdouble>& acc,
                   std::vector<double>& runmax_sq, std::vector<cdouble>& col_phase,
                   std::vector<double>& block_prefix_sq, Cand& best) {
    const double h = grid.step();
    const std::size_t ny = grid.pts_per_axis;
    const std::size_t rows = a1 - a0;
    const std::size_t len = rows * ny;
    std::fill(acc.begin(), acc.begin() + static_cast<std::ptrdiff_t>(len), cdouble(0, 0));
    if (keep_pointwise) {
        std::fill(runmax_sq.begin(), runmax_sq.begin() + static_cast<std::ptrdiff_t>(len), 0.0);
    }
    best = Cand{};
    for (std::size_t k = 0; k < m; ++k) {
        const double l1 = p.freq(k, 0);
        const double l2 = p.freq(k, 1);
        const cdouble a = p.coeff(k);
        cdouble v0 = unit_phase(l2 * grid.coord(0));
        const cdouble wv = unit_phase(l2 * h);
        for (std::size_t b = 0; b < ny; ++b) {
            col_phase[b] = v0;
            v0 *= wv;
        }
        cdouble u = unit_phase(l1 * grid.coord(a0));
        const cdouble wu = unit_phase(l1 * h);
        double pm = 0.0;
        Cand local{-1.0, static_cast<int>(k + 1), 0};
        for (std::size_t r = 0; r < rows; ++r) {
            const cdouble au = a * u;
            cdouble* row = acc.data() + r * ny;
            double* rm = keep_pointwise ? runmax_sq.data() + r * ny : nullptr;
            if (k < first_tracked) {
                for (std::size_t b = 0; b < ny; ++b) row[b] += au * col_phase[b];
            } else {
                for (std::size_t b = 0; b < ny; ++b) {
                    row[b] += au * col_phase[b];
                    const double v = std::norm(row[b]);
                    if (v > pm) pm = v;
                    if (v > local.vsq) {
                        local.vsq = v;
                        local.index = (a0 + r) * ny + b;
                    }
                    if (rm && v > rm[b]) rm[b] = v;
                }
            }
            u *= wu;
        }
        block_prefix_sq[k] = (k < first_tracked) ? -1.0 : pm;
        if (better(local, best)) best = local;
    }
}

// Generic fallback for s >= 3: direct evaluation per point.
void scan_block_nd(const ExpSum& p, const GridSpec& grid, std::size_t m,
                   std::size_t first_tracked, std::size_t j0, std::size_t j1,
                   bool keep_pointwise, std::vector<double>& runmax_sq,
                   std::vector<double>& block_prefix_sq, Cand& best) {
    const std::size_t s = static_cast<std::size_t>(p.dim());
    std::vector<double> t;
    std::vector<Cand> locals(m);
    for (std::size_t k = 0; k < m; ++k) locals[k] = Cand{-1.0, static_cast<int>(k + 1), 0};
    std::fill(block_prefix_sq.begin(), block_prefix_sq.begin() + static_cast<std::ptrdiff_t>(m), 0.0);
    best = Cand{};
    for (std::size_t j = j0; j < j1; ++j) {
        grid.point(j, t);
        cdouble acc(0, 0);
        double rm = 0.0;
        for (std::size_t k = 0; k < m; ++k) {
            double phase = 0.0;
            for (std::size_t i = 0; i < s; ++i) phase += p.freq(k, static_cast<int>(i)) * t[i];
            acc += p.coeff(k) * unit_phase(phase);
            if (k < first_tracked) continue;
            const double v = std::norm(acc);
            if (v > block_prefix_sq[k]) block_prefix_sq[k] = v;
            if (v > locals[k].vsq) {
                locals[k].vsq = v;
                locals[k].index = j;
            }
            if (v > rm) rm = v;
        }
        if (keep_pointwise) runmax_sq[j - j0] = rm;
    }
    for (std::size_t k = first_tracked; k < m; ++k) {
        if (better(locals[k], best)) best = locals[k];
    }
}

struct BlockLayout {
    std::size_t count;
    std::size_t unit; // points (1d/nd) or rows (2d) per block
};

BlockLayout layout_for(const ExpSum& p, const GridSpec& grid) {
    if (p.dim() == 2) {
        const std::size_t rows = grid.pts_per_axis;
        return {(rows + kBlockRows2d - 1) / kBlockRows2d, kBlockRows2d};
    }
    const std::size_t total = grid.total_points();
    return {(total + kBlock1d - 1) / kBlock1d, kBlock1d};
}

PrefixScan run_scan(const ExpSum& p, const GridSpec& grid, std::size_t m,
                    bool keep_pointwise, bool parallel, std::size_t first_tracked) {
    if (m > p.size()) throw std::invalid_argument("prefix scan: m exceeds term count");
    if (grid.box.dim != p.dim()) throw std::invalid_argument("prefix scan: box/sum dimension mismatch");

    const std::size_t total = grid.total_points();
    PrefixScan out;
    out.prefix_max.assign(m, 0.0);
    if (keep_pointwise) out.pointwise_running_max.assign(total, 0.0);
    out.arg_point.assign(static_cast<std::size_t>(p.dim()), 0.0);
    if (m == 0 || total == 0) return out;

    const BlockLayout lay = layout_for(p, grid);
    std::vector<std::vector<double>> block_pm(lay.count, std::vector<double>(m, -1.0));
    std::vector<Cand> block_best(lay.count);

    const std::size_t ny = grid.pts_per_axis;

    auto run_one = [&](std::size_t b, std::vector<cdouble>& acc, std::vector<double>& rm,
                       std::vector<cdouble>& colbuf) {
        std::size_t lo = 0, n_local = 0;
        if (p.dim() == 2) {
            const std::size_t a0 = b * lay.unit;
            const std::size_t a1 = std::min(ny, a0 + lay.unit);
            scan_block_2d(p, grid, m, first_tracked, a0, a1, keep_pointwise, acc, rm, colbuf,
                          block_pm[b], block_best[b]);
            lo = a0 * ny;
            n_local = (a1 - a0) * ny;
        } else if (p.dim() == 1) {
            const std::size_t j0 = b * lay.unit;
            const std::size_t j1 = std::min(total, j0 + lay.unit);
            scan_block_1d(p, grid, m, first_tracked, j0, j1, keep_pointwise, acc, rm,
                          block_pm[b], block_best[b]);
            lo = j0;
            n_local = j1 - j0;
        } else {
            const std::size_t j0 = b * lay.unit;
            const std::size_t j1 = std::min(total, j0 + lay.unit);
            scan_block_nd(p, grid, m, first_tracked, j0, j1, keep_pointwise, rm,
                          block_pm[b], block_best[b]);
            lo = j0;
            n_local = j1 - j0;
        }
        if (keep_pointwise) {
            for (std::size_t j = 0; j < n_local; ++j) {
                out.pointwise_running_max[lo + j] = std::sqrt(rm[j]);
            }
        }
    };

    const std::size_t scratch = (p.dim() == 2) ? lay.unit * ny : lay.unit;
    if (parallel) {
#pragma omp parallel
        {
            std::vector<cdouble> acc(p.dim() <= 2 ? scratch : 0);
            std::vector<double> rm(scratch);
            std::vector<cdouble> colbuf(p.dim() == 2 ? ny : 0);
#pragma omp for schedule(static)
            for (std::ptrdiff_t b = 0; b < static_cast<std::ptrdiff_t>(lay.count); ++b) {
                run_one(static_cast<std::size_t>(b), acc, rm, colbuf);
            }
        }
    } else {
        std::vector<cdouble> acc(p.dim() <= 2 ? scratch : 0);
        std::vector<double> rm(scratch);
        std::vector<cdouble> colbuf(p.dim() == 2 ? ny : 0);
        for (std::size_t b = 0; b < lay.count; ++b) run_one(b, acc, rm, colbuf);
    }

    // deterministic merge in block order
    Cand best{};
    std::vector<double> pm_sq(m, -1.0);
    for (std::size_t b = 0; b < lay.count; ++b) {
        for (std::size_t k = first_tracked; k < m; ++k) {
            pm_sq[k] = std::max(pm_sq[k], block_pm[b][k]);
        }
        if (better(block_best[b], best)) best = block_best[b];
    }
    for (std::size_t k = first_tracked; k < m; ++k) {
        out.prefix_max[k] = pm_sq[k] > 0.0 ? std::sqrt(pm_sq[k]) : 0.0;
    }
    out.global_max = best.vsq > 0.0 ? std::sqrt(best.vsq) : 0.0;
    out.arg_prefix = best.prefix;
    out.arg_index = best.index;
    grid.point(best.index, out.arg_point);
    return out;
}

} // namespace

double GridSpec::step() const {
    const double span = 2.0 * box.half_width;
    if (kind == GridKind::Endpoints) {
        return pts_per_axis > 1 ? span / static_cast<double>(pts_per_axis - 1) : span;
    }
    return span / static_cast<double>(pts_per_axis);
}

double GridSpec::coord(std::size_t j) const {
    if (kind == GridKind::Endpoints) {
        if (pts_per_axis == 1) return 0.0;
        return -box.half_width + static_cast<double>(j) * step();
    }
    return -box.half_width + (static_cast<double>(j) + 0.5) * step();
}

std::size_t GridSpec::total_points() const {
    std::size_t t = 1;
    for (int i = 0; i < box.dim; ++i) t *= pts_per_axis;
    return t;
}

double GridSpec::cell_volume() const {
    double v = 1.0;
    for (int i = 0; i < box.dim; ++i) v *= step();
    return v;
}

void GridSpec::point(std::size_t flat, std::vector<double>& out) const {
    out.assign(static_cast<std::size_t>(box.dim), 0.0);
    for (int i = box.dim - 1; i >= 0; --i) {
        out[static_cast<std::size_t>(i)] = coord(flat % pts_per_axis);
        flat /= pts_per_axis;
    }
}

GridMax grid_max_abs_serial(const ExpSum& p, const GridSpec& grid) {
    GridMax g;
    if (p.size() == 0) {
        g.arg_point.assign(static_cast<std::size_t>(p.dim()), 0.0);
        return g;
    }
    const PrefixScan s = run_scan(p, grid, p.size(), false, false, p.size() - 1);
    g.value = s.prefix_max.back();
    g.arg_index = s.arg_index;
    g.arg_point = s.arg_point;
    return g;
}

GridMax grid_max_abs_omp(const ExpSum& p, const GridSpec& grid) {
    GridMax g;
    if (p.size() == 0) {
        g.arg_point.assign(static_cast<std::size_t>(p.dim()), 0.0);
        return g;
    }
    const PrefixScan s = run_scan(p, grid, p.size(), false, true, p.size() - 1);
    g.value = s.prefix_max.back();
    g.arg_index = s.arg_index;
    g.arg_point = s.arg_point;
    return g;
}

GridMax grid_max_abs(const ExpSum& p, const GridSpec& grid) {
    return grid_max_abs_omp(p, grid);
}

PrefixScan prefix_grid_scan_serial(const ExpSum& p, const GridSpec& grid, std::size_t m,
                                   bool keep_pointwise) {
    return run_scan(p, grid, m, keep_pointwise, false, 0);
}

PrefixScan prefix_grid_scan_omp(const ExpSum& p, const GridSpec& grid, std::size_t m,
                                bool keep_pointwise) {
    return run_scan(p, grid, m, keep_pointwise, true, 0);
}

PrefixScan prefix_grid_scan(const ExpSum& p, const GridSpec& grid, std::size_t m,
                            bool keep_pointwise) {
    return run_scan(p, grid, m, keep_pointwise, true, 0);
}

PrefixBracket prefix_grid_bracket(const ExpSum& p, const GridSpec& grid, std::size_t m) {
    if (grid.kind != GridKind::Endpoints) {
        throw std::invalid_argument("prefix_grid_bracket expects an Endpoints grid");
    }
    const PrefixScan scan = prefix_grid_scan(p, grid, m);
    PrefixBracket out;
    out.lower = scan.prefix_max;
    out.upper.assign(m, 0.0);
    const double half_step = 0.5 * grid.step();
    const std::size_t s = static_cast<std::size_t>(p.dim());
    std::vector<double> L(s, 0.0);
    for (std::size_t k = 0; k < m; ++k) {
        const double am = std::abs(p.coeff(k));
        double slack = 0.0;
        for (std::size_t i = 0; i < s; ++i) {
            L[i] += am * std::abs(p.freq(k, static_cast<int>(i)));
            slack += L[i] * half_step;
        }
        out.upper[k] = out.lower[k] + slack;
        out.running_lower = std::max(out.running_lower, out.lower[k]);
        out.running_upper = std::max(out.running_upper, out.upper[k]);
    }
    return out;
}

std::int64_t count_at_least(const std::vector<double>& values, double threshold) {
    std::int64_t n = 0;
#pragma omp parallel for schedule(static) reduction(+ : n)
    for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(values.size()); ++i) {
        if (values[static_cast<std::size_t>(i)] >= threshold) ++n;
    }
    return n;
}

} // namespace aplab
