#include "aplab/process.hpp"

#include <cmath>
#include <stdexcept>
#include <string>
#include <unordered_map>

#include "aplab/csv.hpp"
#include "aplab/rng.hpp"

namespace aplab {
namespace {

// enumeration cap: atoms are bit patterns of length i + window
constexpr std::size_t kMaxAtomBits = 22;

double mds_gain(const ProcessSpec& spec, double prev1, double prev2) {
    // g_k = bound * max(|eps_{k-1} + eps_{k-2}| / 2, 1/2), virtual past +1
    return spec.bound * std::max(std::abs(prev1 + prev2) * 0.5, 0.5);
}

} // namespace

const char* family_name(Family f) {
    switch (f) {
        case Family::Rademacher: return "rademacher";
        case Family::SignedMagnitudes: return "signed_magnitudes";
        case Family::GaussianCentered: return "gaussian_centered";
        case Family::BoundedMds: return "bounded_mds";
        case Family::MDependent: return "m_dependent";
    }
    return "?";
}

std::optional<Family> family_from_name(const std::string& name) {
    for (Family f : {Family::Rademacher, Family::SignedMagnitudes, Family::GaussianCentered,
                     Family::BoundedMds, Family::MDependent}) {
        if (name == family_name(f)) return f;
    }
    return std::nullopt;
}

void ProcessSpec::validate() const {
    for (double a : magnitudes) {
        if (!(a >= 0.0) || !std::isfinite(a)) {
            throw std::invalid_argument("ProcessSpec: magnitudes must be finite and nonnegative");
        }
    }
    if (window < 0) throw std::invalid_argument("ProcessSpec: window must be >= 0");
    if (family == Family::BoundedMds && !(bound > 0.0 && std::isfinite(bound))) {
        throw std::invalid_argument("ProcessSpec: bounded family needs a finite positive bound");
    }
    if (family == Family::MDependent && complex_phases) {
        throw std::invalid_argument("ProcessSpec: phases would break the finite-atom conditionals");
    }
}

double m_dependent_value(const ProcessSpec& spec, const std::vector<int>& bits, std::size_t k) {
    // X_k = (2 b_k - 1) * prod_{j=1..w} b_{k+j}; values in {-1, 0, +1}
    const std::size_t w = static_cast<std::size_t>(spec.window);
    double v = bits[k - 1] ? 1.0 : -1.0;
    for (std::size_t j = 1; j <= w; ++j) {
        if (!bits[k - 1 + j]) return 0.0;
    }
    return v;
}

SamplePath sample_path(const ProcessSpec& spec, std::size_t n,
                       std::optional<std::uint64_t> seed_override) {
    spec.validate();
    if (n < 1) throw std::invalid_argument("sample_path: n must be >= 1");
    SamplePath path;
    path.seed_used = seed_override.value_or(spec.seed);
    path.values.resize(n);
    CounterRng rng(path.seed_used);

    switch (spec.family) {
        case Family::Rademacher:
            for (std::size_t k = 1; k <= n; ++k) path.values[k - 1] = rng.next_sign();
            break;
        case Family::SignedMagnitudes:
            for (std::size_t k = 1; k <= n; ++k) {
                path.values[k - 1] = rng.next_sign() * spec.magnitude(k);
            }
            break;
        case Family::GaussianCentered:
            for (std::size_t k = 1; k <= n; ++k) {
                path.values[k - 1] = spec.magnitude(k) * rng.next_cgauss();
            }
            break;
        case Family::BoundedMds: {
            double prev1 = 1.0, prev2 = 1.0;
            for (std::size_t k = 1; k <= n; ++k) {
                const double eps = rng.next_sign();
                path.values[k - 1] = eps * mds_gain(spec, prev1, prev2);
                prev2 = prev1;
                prev1 = eps;
            }
            break;
        }
        case Family::MDependent: {
            const std::size_t w = static_cast<std::size_t>(spec.window);
            std::vector<int> bits(n + w);
            for (auto& b : bits) b = rng.next_bit() ? 1 : 0;
            for (std::size_t k = 1; k <= n; ++k) {
                path.values[k - 1] = m_dependent_value(spec, bits, k);
            }
            break;
        }
    }
    if (spec.complex_phases) {
        for (auto& v : path.values) v *= rng.next_phase();
    }
    return path;
}

double sup_norm(const ProcessSpec& spec, std::size_t k) {
    switch (spec.family) {
        case Family::Rademacher: return 1.0;
        case Family::SignedMagnitudes: return spec.magnitude(k);
        case Family::GaussianCentered:
            throw std::invalid_argument("sup_norm: gaussian values are unbounded");
        case Family::BoundedMds: return spec.bound;
        case Family::MDependent: return 1.0;
    }
    return 0.0;
}

double second_moment(const ProcessSpec& spec, std::size_t k) {
    switch (spec.family) {
        case Family::Rademacher: return 1.0;
        case Family::SignedMagnitudes: {
            const double a = spec.magnitude(k);
            return a * a;
        }
        case Family::GaussianCentered: {
            const double a = spec.magnitude(k);
            return a * a; // E|a z|^2 with E|z|^2 = 1
        }
        case Family::BoundedMds:
            // g_1 = bound; for k >= 2, g in {bound, bound/2} equally likely
            return spec.bound * spec.bound * (k == 1 ? 1.0 : 5.0 / 8.0);
        case Family::MDependent:
            return std::pow(0.5, spec.window); // nonzero iff all window bits set
    }
    return 0.0;
}

double p_norm(const ProcessSpec& spec, std::size_t k, double p) {
    if (!(p > 0.0)) throw std::invalid_argument("p_norm: p must be positive");
    switch (spec.family) {
        case Family::Rademacher: return 1.0;
        case Family::SignedMagnitudes: return spec.magnitude(k);
        case Family::GaussianCentered:
            // |z|^2 is exponential with mean 1, so E|z|^p = Gamma(p/2 + 1)
            return spec.magnitude(k) * std::pow(std::tgamma(p / 2.0 + 1.0), 1.0 / p);
        case Family::BoundedMds:
            if (k == 1) return spec.bound;
            return spec.bound * std::pow(0.5 * (1.0 + std::pow(2.0, -p)), 1.0 / p);
        case Family::MDependent:
            return std::pow(std::pow(0.5, spec.window), 1.0 / p);
    }
    return 0.0;
}

namespace {

// Exact conditional cross norm for the MDependent family by enumerating the
// fair-bit atoms of sigma(X_1..X_k).  r_exponent <= 0 selects the sup norm.
double m_dependent_cross(const ProcessSpec& spec, std::size_t k, std::size_t i,
                         double r_exponent) {
    const std::size_t w = static_cast<std::size_t>(spec.window);
    if (i - k > w) return 0.0; // windows disjoint, X_i independent of F_k
    const std::size_t nbits = i + w;
    if (nbits > kMaxAtomBits) {
        throw std::invalid_argument("m_dependent cross terms: index range too large for exact enumeration");
    }
    const std::size_t atoms = std::size_t{1} << nbits;

    // class key: 2 bits per realized value of X_1..X_k
    if (2 * k > 64) throw std::invalid_argument("m_dependent cross terms: k too large for class keys");

    std::vector<int> bits(nbits);
    std::unordered_map<std::uint64_t, std::pair<double, double>> classes; // key -> (sum X_i, count)
    classes.reserve(1024);

    auto fill_bits = [&](std::size_t atom) {
        for (std::size_t b = 0; b < nbits; ++b) bits[b] = (atom >> b) & 1u;
    };
    auto class_key = [&]() {
        std::uint64_t key = 0;
        for (std::size_t j = 1; j <= k; ++j) {
            const double v = m_dependent_value(spec, bits, j);
            const std::uint64_t code = v < 0 ? 0u : (v == 0.0 ? 1u : 2u);
            key = (key << 2) | code;
        }
        return key;
    };

    for (std::size_t atom = 0; atom < atoms; ++atom) {
        fill_bits(atom);
        auto& cell = classes[class_key()];
        cell.first += m_dependent_value(spec, bits, i);
        cell.second += 1.0;
    }

    const double atom_prob = 1.0 / static_cast<double>(atoms);
    double sup = 0.0;
    double acc = 0.0;
    for (std::size_t atom = 0; atom < atoms; ++atom) {
        fill_bits(atom);
        const auto& cell = classes[class_key()];
        const double cond = cell.first / cell.second;
        const double v = std::abs(m_dependent_value(spec, bits, k) * cond);
        if (r_exponent <= 0.0) {
            sup = std::max(sup, v);
        } else {
            acc += atom_prob * std::pow(v, r_exponent);
        }
    }
    return r_exponent <= 0.0 ? sup : std::pow(acc, 1.0 / r_exponent);
}

} // namespace

double cross_norm_inf(const ProcessSpec& spec, std::size_t k, std::size_t i) {
    if (!(k >= 1 && k < i)) throw std::invalid_argument("cross_norm: need 1 <= k < i");
    switch (spec.family) {
        case Family::Rademacher:
        case Family::SignedMagnitudes:
        case Family::GaussianCentered:
            return 0.0; // independent centered
        case Family::BoundedMds:
            return 0.0; // martingale difference
        case Family::MDependent:
            return m_dependent_cross(spec, k, i, 0.0);
    }
    return 0.0;
}

double cross_norm_r(const ProcessSpec& spec, std::size_t k, std::size_t i, double r) {
    if (!(r > 0.0)) throw std::invalid_argument("cross_norm_r: r must be positive");
    if (!(k >= 1 && k < i)) throw std::invalid_argument("cross_norm: need 1 <= k < i");
    switch (spec.family) {
        case Family::Rademacher:
        case Family::SignedMagnitudes:
        case Family::GaussianCentered:
        case Family::BoundedMds:
            return 0.0;
        case Family::MDependent:
            return m_dependent_cross(spec, k, i, r);
    }
    return 0.0;
}

RQuantity r_quantity(const ProcessSpec& spec, const SamplePath& path,
                     std::size_t n, std::size_t m, RMode mode, double p) {
    if (!(n < m) || m > path.length()) {
        throw std::invalid_argument("r_quantity: need 0 <= n < m <= path length");
    }
    RQuantity q;
    q.mode = mode;
    q.from = n;
    q.to = m;
    q.p = p;
    switch (mode) {
        case RMode::Symmetric: {
            double v = 0.0;
            for (std::size_t k = n + 1; k <= m; ++k) v += std::norm(path.at(k));
            q.value = v;
            break;
        }
        case RMode::CenteredIndep: {
            double v = 0.0;
            for (std::size_t k = n + 1; k <= m; ++k) {
                v += std::norm(path.at(k)) + second_moment(spec, k);
            }
            q.value = v;
            break;
        }
        case RMode::Bounded: {
            double v = 0.0;
            for (std::size_t i = n + 1; i <= m; ++i) {
                const double b = sup_norm(spec, i);
                v += b * b;
            }
            for (std::size_t i = n + 2; i <= m; ++i) {
                for (std::size_t k = 1; k < i; ++k) v += cross_norm_inf(spec, k, i);
            }
            q.value = v;
            break;
        }
        case RMode::PMoment: {
            if (!(p >= 2.0)) throw std::invalid_argument("r_quantity: PMoment needs p >= 2");
            double v = 0.0;
            for (std::size_t i = n + 1; i <= m; ++i) {
                const double b = p_norm(spec, i, p);
                v += b * b;
            }
            for (std::size_t i = n + 2; i <= m; ++i) {
                for (std::size_t k = 1; k < i; ++k) v += cross_norm_r(spec, k, i, p / 2.0);
            }
            q.value = v;
            break;
        }
    }
    return q;
}

double correlation_alpha(const ProcessSpec& spec, std::size_t i) {
    if (i < 1) throw std::invalid_argument("correlation_alpha: i must be >= 1");
    const double diag = sup_norm(spec, i); // throws for unbounded families
    double a = diag * diag;
    for (std::size_t k = 1; k < i; ++k) a += cross_norm_inf(spec, k, i);
    return a;
}

std::vector<double> correlation_profile(const ProcessSpec& spec, std::size_t n) {
    std::vector<double> alpha(n);
    for (std::size_t i = 1; i <= n; ++i) alpha[i - 1] = correlation_alpha(spec, i);
    return alpha;
}

void write_path_csv(const std::string& csv_path, const SamplePath& path) {
    CsvWriter csv(csv_path, {"k", "re", "im"});
    for (std::size_t k = 1; k <= path.length(); ++k) {
        csv.row({std::to_string(k), fmt_full(path.at(k).real()), fmt_full(path.at(k).imag())});
    }
}

} // namespace aplab
