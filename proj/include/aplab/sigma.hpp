#pragma once

#include <cstddef>
#include <vector>

#include "aplab/expsum.hpp"

namespace aplab {

// Frequency table for a family e^{i<lambda_k, t>}, row-major n x s.
struct FreqTable {
    std::vector<double> flat;
    int dim = 1;

    std::size_t count() const { return flat.size() / static_cast<std::size_t>(dim); }
    double at(std::size_t k, int axis) const {
        return flat[k * static_cast<std::size_t>(dim) + static_cast<std::size_t>(axis)];
    }
    double abs_running_max(int axis, std::size_t m) const;
    bool monotone() const; // every axis positive nondecreasing
};

// sigma_m = (6 s m)^s prod_i (|lambda_m^(i)|* + 1); monotone variant
// (4 s)^s prod_i (lambda_m^(i) + 1).
double sigma_exponential(const FreqTable& freqs, std::size_t m, bool monotone);

// sigma_n = n^s prod_i (|lambda_n^(i)|* + 1); monotone variant
// prod_i (lambda_n^(i) + 1).  The (6s)^s factor of the non-uniform form is
// absorbed into rho1 = (6s)^{-s} for this variant.
double sigma_uniform(const FreqTable& freqs, std::size_t n, bool monotone = false);

enum class SigmaFamily { Constant, Exponential };

struct SigmaSystem {
    SigmaFamily family = SigmaFamily::Exponential;
    FreqTable freqs;          // exponential family only
    bool monotone = false;
    bool uniform_variant = false;
    double rho1 = 1.0;
    double rho2 = 0.5;

    double sigma(std::size_t m) const;

    static SigmaSystem exponential(FreqTable freqs, bool monotone = false,
                                   double rho1 = 1.0, double rho2 = 0.5);
    static SigmaSystem exponential_uniform(FreqTable freqs, bool monotone = false,
                                           double rho2 = 0.5);
    static SigmaSystem constant(double rho1 = 1.0, double rho2 = 0.5);
};

struct SigmaReport {
    double measured = 0.0;      // measure of {x : runmax(x) >= rho2 * M}
    double required = 0.0;      // rho1 / sigma_m
    double global_max = 0.0;    // M over the grid and prefixes
    double grid_slack = 0.0;    // pointwise value blur: sum_i L_i * step / 2
    bool grid_adequate = false;
    bool pass = false;
};

// Measures the qualifying set of the defining inequality on a cell-center
// grid.  A grid is reported inadequate when the Lipschitz blur exceeds a
// quarter of the (1 - rho2) margin.
SigmaReport verify_sigma_property(const SigmaSystem& sys, const std::vector<cdouble>& coeffs,
                                  std::size_t m, const Box& box, std::size_t grid_pts);

} // namespace aplab
