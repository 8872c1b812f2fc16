#pragma once

#include <complex>
#include <cstddef>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

namespace aplab {

using cdouble = std::complex<double>;

// Finite sum P(t) = sum_k a_k exp(i <lambda_k, t>) with arbitrary real
// frequency vectors lambda_k in s dimensions.  Immutable after construction.
class ExpSum {
public:
    ExpSum() : dim_(1) {}
    ExpSum(std::vector<cdouble> coeffs, std::vector<double> freqs_flat, int dim);

    static ExpSum one_dim(std::vector<cdouble> coeffs, std::vector<double> freqs);

    int dim() const { return dim_; }
    std::size_t size() const { return coeffs_.size(); }

    const std::vector<cdouble>& coeffs() const { return coeffs_; }
    cdouble coeff(std::size_t k) const { return coeffs_[k]; }
    double freq(std::size_t k, int axis) const {
        return freqs_[k * static_cast<std::size_t>(dim_) + static_cast<std::size_t>(axis)];
    }

    cdouble evaluate(std::span<const double> t) const;

    // Value and complex gradient (dP/dt_i) in one pass.
    cdouble evaluate_with_gradient(std::span<const double> t, std::span<cdouble> grad) const;

    // L_i = sum_k |a_k| |lambda_k^(i)|; bounds |dP/dt_i| everywhere.
    std::vector<double> gradient_bound() const;

    double coeff_abs_sum() const;

    // running max of |lambda^(axis)| over the first m terms
    double freq_abs_running_max(int axis, std::size_t m) const;

    // every axis positive and nondecreasing over all terms
    bool monotone_frequencies() const;

    // true when s = 1 and every frequency is an integer (enables the
    // FFT grid fast path)
    bool integer_frequencies_1d() const;

    ExpSum prefix(std::size_t m) const;
    ExpSum scaled(double c) const;

private:
    std::vector<cdouble> coeffs_;
    std::vector<double> freqs_; // row-major, size() * dim_
    int dim_ = 1;
};

// Symmetric box [-T, T]^s.
struct Box {
    double half_width = 1.0;
    int dim = 1;

    Box(double T, int s);
    double volume() const;
};

struct CertifiedBound {
    double lower = 0.0;
    double upper = 0.0;
    double tol = 0.0;

    double width() const { return upper - lower; }
};

// Axis-aligned rectangle; reported area is always the intersection with
// the enclosing box.
struct Rectangle {
    std::vector<double> center;
    std::vector<double> half_widths;

    double clipped_area(const Box& box) const;
};

// Text record: first line "s <dim>", then one row per term with
// Re a_k, Im a_k, lambda_k^(1) .. lambda_k^(s).  '#' starts a comment.
ExpSum read_expsum(std::istream& in);
ExpSum read_expsum_file(const std::string& path);
void write_expsum(std::ostream& out, const ExpSum& p);

} // namespace aplab
