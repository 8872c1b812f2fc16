#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "aplab/expsum.hpp"

namespace aplab {

enum class Family {
    Rademacher,       // iid signs +-1
    SignedMagnitudes, // eps_k * a_k
    GaussianCentered, // a_k * standard complex normal
    BoundedMds,       // eps_k * g_k(past signs), |g_k| <= bound
    MDependent        // centered window function of iid fair bits
};

const char* family_name(Family f);
std::optional<Family> family_from_name(const std::string& name);

struct ProcessSpec {
    Family family = Family::Rademacher;
    std::vector<double> magnitudes; // a_k >= 0; empty means all ones
    double bound = 1.0;             // sup-norm cap for BoundedMds
    int window = 0;                 // dependence range for MDependent
    std::uint64_t seed = 0;
    bool complex_phases = false;    // multiply by iid unit-modulus phases

    double magnitude(std::size_t k) const { // 1-based index
        return magnitudes.empty() ? 1.0 : magnitudes.at(k - 1);
    }
    void validate() const;
};

struct SamplePath {
    std::vector<cdouble> values; // X_1..X_n
    std::uint64_t seed_used = 0;

    std::size_t length() const { return values.size(); }
    cdouble at(std::size_t k) const { return values[k - 1]; } // 1-based
};

// Deterministic given (spec, seed); distinct seeds give independent-looking
// paths via the counter-based generator.
SamplePath sample_path(const ProcessSpec& spec, std::size_t n,
                       std::optional<std::uint64_t> seed_override = {});

enum class RMode { Symmetric, CenteredIndep, Bounded, PMoment };

struct RQuantity {
    RMode mode = RMode::Symmetric;
    double p = 0.0; // PMoment order
    double value = 0.0;
    std::size_t from = 0; // n
    std::size_t to = 0;   // m
};

// Normalizers over the index range (n, m]:
//   Symmetric:     sum |X_k(omega)|^2                    (per path)
//   CenteredIndep: sum |X_k(omega)|^2 + E|X_k|^2
//   Bounded:       sum ||X_i||_inf^2 + cross terms ||X_k E(X_i|F_k)||_inf
//   PMoment(p):    sum ||X_i||_p^2   + cross terms in the p/2 norm
// Cross terms are analytic: zero for independent and martingale-difference
// families, exact finite-atom enumeration for MDependent.
RQuantity r_quantity(const ProcessSpec& spec, const SamplePath& path,
                     std::size_t n, std::size_t m, RMode mode, double p = 0.0);

// alpha_i = sum_{k=1}^{i} ||X_k E(X_i | F_k)||_inf (the k = i term equals
// ||X_i||_inf^2, so R over (n, m] is the sum of these); families with
// unbounded values are rejected.
double correlation_alpha(const ProcessSpec& spec, std::size_t i);

// alpha_1..alpha_n; the conditional part vanishes beyond the dependence
// window, leaving the plain sup-norm squares
std::vector<double> correlation_profile(const ProcessSpec& spec, std::size_t n);

// path dump rows (k, Re X_k, Im X_k)
void write_path_csv(const std::string& csv_path, const SamplePath& path);

// analytic single-index moments, 1-based k
double sup_norm(const ProcessSpec& spec, std::size_t k);      // ||X_k||_inf
double second_moment(const ProcessSpec& spec, std::size_t k); // E|X_k|^2
double p_norm(const ProcessSpec& spec, std::size_t k, double p);

// ||X_k E(X_i | F_k)||, k < i, in the sup norm or the r-norm (r > 0).
double cross_norm_inf(const ProcessSpec& spec, std::size_t k, std::size_t i);
double cross_norm_r(const ProcessSpec& spec, std::size_t k, std::size_t i, double r);

// The MDependent value at index k given a bit pattern (testing hook; the
// same map drives sample_path and the atom enumeration).
double m_dependent_value(const ProcessSpec& spec, const std::vector<int>& bits, std::size_t k);

} // namespace aplab
