#pragma once

#include <complex>
#include <cstddef>
#include <optional>
#include <vector>

#include "meixner/moment_table.hpp"

namespace meixner {

/// Free Meixner quadruple (alpha_1, alpha_2, beta_1, beta_2).
///
/// The law has Jacobi sequences alpha = (a1, a2, a2, ...) and
/// beta = (b1, b2, b2, ...). With b1 == 0 it is the Dirac mass at a1 and b2 is
/// ignored.
struct MeixnerParams {
    double a1 = 0.0;
    double a2 = 0.0;
    double b1 = 1.0;
    double b2 = 1.0;

    /// Throws std::invalid_argument on negative or non-finite entries.
    void validate() const;
    bool is_standard() const { return a1 == 0.0 && b1 == 1.0; }
};

/// Jacobi parameter sequences with a finite head and a constant tail.
///
/// Indices are 1-based: alpha(1), beta(1) are the first-level coefficients.
/// The constructor applies the termination rule, so once some beta_k is zero
/// every later alpha and beta reads as zero.
class JacobiParams {
public:
    JacobiParams(std::vector<double> alpha_head, double alpha_tail,
                 std::vector<double> beta_head, double beta_tail);

    double alpha(std::size_t n) const;
    double beta(std::size_t n) const;

    std::size_t head_length() const { return alpha_head_.size(); }
    double alpha_tail() const { return alpha_tail_; }
    double beta_tail() const { return beta_tail_; }

    /// First level k with beta_k == 0, if any.
    std::optional<std::size_t> termination_level() const;

    /// Gershgorin radius of the Jacobi operator: every point of the support of
    /// the law lies in [-R, R].
    double support_radius() const;

private:
    std::vector<double> alpha_head_;
    std::vector<double> beta_head_;
    double alpha_tail_;
    double beta_tail_;
};

JacobiParams meixner_to_jacobi(const MeixnerParams& p);

/// Continued-fraction Cauchy transform truncated at `depth` levels.
///
/// Evaluated bottom-up. The value fed in below the last level is the fixed
/// point of the constant-tail fraction, so any depth >= head_length() is exact.
/// Throws std::invalid_argument for depth == 0 and std::domain_error for real z
/// inside the support radius.
std::complex<double> cauchy_transform(const JacobiParams& j, std::complex<double> z, int depth);

/// Absolutely continuous density of a standard free Meixner law (a1 = 0, b1 = 1):
///
///     sqrt(4 b2 - (x - a2)^2) / (2 pi ((b2 - 1) x^2 + a2 x + 1))
///
/// on [a2 - 2 sqrt(b2), a2 + 2 sqrt(b2)], zero elsewhere. Throws
/// std::invalid_argument for non-standard parameters or b2 <= 0 and
/// std::domain_error if the denominator vanishes inside the support.
double density_eval(const MeixnerParams& p, double x);

/// Support interval [a2 - 2 sqrt(b2), a2 + 2 sqrt(b2)] of the density.
std::pair<double, double> density_support(const MeixnerParams& p);

struct DensityMoments {
    double mass = 0.0;         ///< integral of the density
    MomentTable table;         ///< raw moments of the absolutely continuous part
    bool has_atoms = false;    ///< mass < 1 - 1e-3
};

/// Quadrature moments of the density with the substitution
/// x = a2 + 2 sqrt(b2) cos(theta), which removes the square-root endpoint
/// singularities; composite midpoint rule with `nodes` points in theta.
DensityMoments density_moments(const MeixnerParams& p, int m_max, int nodes = 4096);

/// M_m = (J^m)_{11} for the truncated tridiagonal Jacobi matrix of size
/// m_max / 2 + 2, exact for every m <= m_max.
MomentTable moments_tridiagonal(const JacobiParams& j, int m_max);

}  // namespace meixner
