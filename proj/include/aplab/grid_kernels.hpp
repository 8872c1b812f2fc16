#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "aplab/expsum.hpp"

namespace aplab {

// Uniform grids over a box.  Endpoints includes both faces (oracle grids);
// CellCenters tiles the box with pts^s cells and samples their centers
// (measure estimation).
enum class GridKind { Endpoints, CellCenters };

struct GridSpec {
    Box box;
    std::size_t pts_per_axis;
    GridKind kind = GridKind::Endpoints;

    double step() const;
    double coord(std::size_t j) const;
    std::size_t total_points() const;
    double cell_volume() const; // CellCenters only
    void point(std::size_t flat, std::vector<double>& out) const;
};

struct GridMax {
    double value = 0.0;
    std::size_t arg_index = 0;
    std::vector<double> arg_point;
};

// max_j |P(t_j)| over the grid; ties resolved toward the smallest flat index
// so the serial and OpenMP paths agree exactly.
GridMax grid_max_abs_serial(const ExpSum& p, const GridSpec& grid);
GridMax grid_max_abs_omp(const ExpSum& p, const GridSpec& grid);
GridMax grid_max_abs(const ExpSum& p, const GridSpec& grid);

// One sweep over the grid accumulating partial sums P_1..P_m pointwise.
//   prefix_max[l-1] = max_j |P_l(t_j)|
//   global_max      = max_l prefix_max
// keep_pointwise additionally records max_{l<=m} |P_l(t_j)| per grid point.
struct PrefixScan {
    std::vector<double> prefix_max;
    double global_max = 0.0;
    int arg_prefix = 0; // 1-based prefix attaining global_max
    std::size_t arg_index = 0;
    std::vector<double> arg_point;
    std::vector<double> pointwise_running_max;
};

PrefixScan prefix_grid_scan_serial(const ExpSum& p, const GridSpec& grid, std::size_t m,
                                   bool keep_pointwise = false);
PrefixScan prefix_grid_scan_omp(const ExpSum& p, const GridSpec& grid, std::size_t m,
                                bool keep_pointwise = false);
PrefixScan prefix_grid_scan(const ExpSum& p, const GridSpec& grid, std::size_t m,
                            bool keep_pointwise = false);

// Certified per-prefix brackets from one Endpoints sweep: every point of the
// box lies within step/2 per axis of a grid point, so
//   sup |P_l| <= prefix_max[l-1] + sum_i L_i(l) * step/2.
struct PrefixBracket {
    std::vector<double> lower;  // grid maxima per prefix
    std::vector<double> upper;  // with Lipschitz slack
    double running_lower = 0.0;
    double running_upper = 0.0;
};

PrefixBracket prefix_grid_bracket(const ExpSum& p, const GridSpec& grid, std::size_t m);

// number of grid points whose running-prefix max is >= threshold
std::int64_t count_at_least(const std::vector<double>& values, double threshold);

} // namespace aplab
