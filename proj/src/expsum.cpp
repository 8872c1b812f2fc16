#include "aplab/expsum.hpp"

#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "aplab/csv.hpp"

namespace aplab {

ExpSum::ExpSum(std::vector<cdouble> coeffs, std::vector<double> freqs_flat, int dim)
    : coeffs_(std::move(coeffs)), freqs_(std::move(freqs_flat)), dim_(dim) {
    if (dim_ < 1) throw std::invalid_argument("ExpSum: dim must be >= 1");
    if (freqs_.size() != coeffs_.size() * static_cast<std::size_t>(dim_)) {
        throw std::invalid_argument("ExpSum: coeffs and freqs lengths disagree");
    }
    for (const auto& a : coeffs_) {
        if (!std::isfinite(a.real()) || !std::isfinite(a.imag())) {
            throw std::invalid_argument("ExpSum: non-finite coefficient");
        }
    }
    for (double f : freqs_) {
        if (!std::isfinite(f)) throw std::invalid_argument("ExpSum: non-finite frequency");
    }
}

ExpSum ExpSum::one_dim(std::vector<cdouble> coeffs, std::vector<double> freqs) {
    return ExpSum(std::move(coeffs), std::move(freqs), 1);
}

cdouble ExpSum::evaluate(std::span<const double> t) const {
    if (static_cast<int>(t.size()) != dim_) {
        throw std::invalid_argument("ExpSum::evaluate: point dimension mismatch");
    }
    cdouble acc(0.0, 0.0);
    const std::size_t s = static_cast<std::size_t>(dim_);
    for (std::size_t k = 0; k < coeffs_.size(); ++k) {
        double phase = 0.0;
        for (std::size_t i = 0; i < s; ++i) phase += freqs_[k * s + i] * t[i];
        acc += coeffs_[k] * cdouble(std::cos(phase), std::sin(phase));
    }
    return acc;
}

cdouble ExpSum::evaluate_with_gradient(std::span<const double> t, std::span<cdouble> grad) const {
    if (static_cast<int>(t.size()) != dim_ || static_cast<int>(grad.size()) != dim_) {
        throw std::invalid_argument("ExpSum::evaluate_with_gradient: dimension mismatch");
    }
    const std::size_t s = static_cast<std::size_t>(dim_);
    cdouble acc(0.0, 0.0);
    for (std::size_t i = 0; i < s; ++i) grad[i] = cdouble(0.0, 0.0);
    for (std::size_t k = 0; k < coeffs_.size(); ++k) {
        double phase = 0.0;
        for (std::size_t i = 0; i < s; ++i) phase += freqs_[k * s + i] * t[i];
        const cdouble term = coeffs_[k] * cdouble(std::cos(phase), std::sin(phase));
        acc += term;
        const cdouble iterm(-term.imag(), term.real()); // i * term
        for (std::size_t i = 0; i < s; ++i) grad[i] += freqs_[k * s + i] * iterm;
    }
    return acc;
}

std::vector<double> ExpSum::gradient_bound() const {
    const std::size_t s = static_cast<std::size_t>(dim_);
    std::vector<double> L(s, 0.0);
    for (std::size_t k = 0; k < coeffs_.size(); ++k) {
        const double am = std::abs(coeffs_[k]);
        for (std::size_t i = 0; i < s; ++i) L[i] += am * std::abs(freqs_[k * s + i]);
    }
    return L;
}

double ExpSum::coeff_abs_sum() const {
    double a = 0.0;
    for (const auto& c : coeffs_) a += std::abs(c);
    return a;
}

double ExpSum::freq_abs_running_max(int axis, std::size_t m) const {
    const std::size_t s = static_cast<std::size_t>(dim_);
    double v = 0.0;
    for (std::size_t k = 0; k < m && k < size(); ++k) {
        v = std::max(v, std::abs(freqs_[k * s + static_cast<std::size_t>(axis)]));
    }
    return v;
}

bool ExpSum::monotone_frequencies() const {
    const std::size_t s = static_cast<std::size_t>(dim_);
    for (std::size_t i = 0; i < s; ++i) {
        double prev = 0.0;
        for (std::size_t k = 0; k < size(); ++k) {
            const double f = freqs_[k * s + i];
            if (f <= 0.0 || f < prev) return false;
            prev = f;
        }
    }
    return size() > 0;
}

bool ExpSum::integer_frequencies_1d() const {
    if (dim_ != 1) return false;
    for (double f : freqs_) {
        if (f != std::floor(f)) return false;
        if (std::abs(f) > 1e15) return false;
    }
    return true;
}

ExpSum ExpSum::prefix(std::size_t m) const {
    if (m > size()) throw std::invalid_argument("ExpSum::prefix: m exceeds term count");
    const std::size_t s = static_cast<std::size_t>(dim_);
    std::vector<cdouble> c(coeffs_.begin(), coeffs_.begin() + static_cast<std::ptrdiff_t>(m));
    std::vector<double> f(freqs_.begin(), freqs_.begin() + static_cast<std::ptrdiff_t>(m * s));
    return ExpSum(std::move(c), std::move(f), dim_);
}

ExpSum ExpSum::scaled(double c) const {
    std::vector<cdouble> sc(coeffs_);
    for (auto& a : sc) a *= c;
    return ExpSum(std::move(sc), freqs_, dim_);
}

Box::Box(double T, int s) : half_width(T), dim(s) {
    if (!(T > 0.0)) throw std::invalid_argument("Box: half width must be positive");
    if (s < 1) throw std::invalid_argument("Box: dim must be >= 1");
}

double Box::volume() const {
    double v = 1.0;
    for (int i = 0; i < dim; ++i) v *= 2.0 * half_width;
    return v;
}

double Rectangle::clipped_area(const Box& box) const {
    if (center.size() != half_widths.size() ||
        static_cast<int>(center.size()) != box.dim) {
        throw std::invalid_argument("Rectangle: dimension mismatch with box");
    }
    double area = 1.0;
    for (std::size_t i = 0; i < center.size(); ++i) {
        const double lo = std::max(center[i] - half_widths[i], -box.half_width);
        const double hi = std::min(center[i] + half_widths[i], box.half_width);
        if (hi <= lo) return 0.0;
        area *= hi - lo;
    }
    return area;
}

ExpSum read_expsum(std::istream& in) {
    int dim = 0;
    bool have_dim = false;
    std::vector<cdouble> coeffs;
    std::vector<double> freqs;
    std::string line;
    while (std::getline(in, line)) {
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        std::istringstream ls(line);
        if (!have_dim) {
            std::string tag;
            if (!(ls >> tag)) continue; // blank line before the header
            if (tag != "s") throw std::runtime_error("expsum record: expected leading 's <dim>' line");
            if (!(ls >> dim) || dim < 1) throw std::runtime_error("expsum record: bad dimension");
            have_dim = true;
            continue;
        }
        double re, im;
        if (!(ls >> re >> im)) continue;
        std::vector<double> row(static_cast<std::size_t>(dim));
        for (int i = 0; i < dim; ++i) {
            if (!(ls >> row[static_cast<std::size_t>(i)])) {
                throw std::runtime_error("expsum record: truncated frequency row");
            }
        }
        coeffs.emplace_back(re, im);
        freqs.insert(freqs.end(), row.begin(), row.end());
    }
    if (!have_dim) throw std::runtime_error("expsum record: missing 's <dim>' header");
    return ExpSum(std::move(coeffs), std::move(freqs), dim);
}

ExpSum read_expsum_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open expsum file: " + path);
    return read_expsum(in);
}

void write_expsum(std::ostream& out, const ExpSum& p) {
    out << "s " << p.dim() << "\n";
    for (std::size_t k = 0; k < p.size(); ++k) {
        out << fmt_full(p.coeff(k).real()) << " " << fmt_full(p.coeff(k).imag());
        for (int i = 0; i < p.dim(); ++i) out << " " << fmt_full(p.freq(k, i));
        out << "\n";
    }
}

} // namespace aplab
