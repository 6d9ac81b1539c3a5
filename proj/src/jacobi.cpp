#include "meixner/jacobi.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace meixner {

void MeixnerParams::validate() const {
    if (!std::isfinite(a1) || !std::isfinite(a2) || !std::isfinite(b1) || !std::isfinite(b2))
        throw std::invalid_argument("free Meixner parameters must be finite");
    if (b1 < 0.0 || b2 < 0.0)
        throw std::invalid_argument("free Meixner parameters need b1 >= 0 and b2 >= 0");
}

JacobiParams::JacobiParams(std::vector<double> alpha_head, double alpha_tail,
                           std::vector<double> beta_head, double beta_tail)
    : alpha_head_(std::move(alpha_head)),
      beta_head_(std::move(beta_head)),
      alpha_tail_(alpha_tail),
      beta_tail_(beta_tail) {
    if (alpha_head_.empty() || alpha_head_.size() != beta_head_.size())
        throw std::invalid_argument("Jacobi heads must be non-empty and of equal length");
    const auto check = [](double v) {
        if (!std::isfinite(v)) throw std::invalid_argument("Jacobi coefficients must be finite");
    };
    std::for_each(alpha_head_.begin(), alpha_head_.end(), check);
    std::for_each(beta_head_.begin(), beta_head_.end(), check);
    check(alpha_tail_);
    check(beta_tail_);
    if (beta_tail_ < 0.0 || std::any_of(beta_head_.begin(), beta_head_.end(), [](double b) { return b < 0.0; }))
        throw std::invalid_argument("Jacobi beta coefficients must be non-negative");

    // Termination: beta_k = 0 forces alpha_m = beta_m = 0 for all m > k.
    const auto zero = std::find(beta_head_.begin(), beta_head_.end(), 0.0);
    if (zero != beta_head_.end()) {
        const auto k = static_cast<std::size_t>(zero - beta_head_.begin()) + 1;
        for (std::size_t m = k + 1; m <= beta_head_.size(); ++m) {
            alpha_head_[m - 1] = 0.0;
            beta_head_[m - 1] = 0.0;
        }
        alpha_tail_ = 0.0;
        beta_tail_ = 0.0;
    } else if (beta_tail_ == 0.0) {
        // First zero sits one past the head; alpha there keeps the tail value.
        alpha_head_.push_back(alpha_tail_);
        beta_head_.push_back(0.0);
        alpha_tail_ = 0.0;
    }
}

double JacobiParams::alpha(std::size_t n) const {
    if (n == 0) throw std::out_of_range("Jacobi indices start at 1");
    return n <= alpha_head_.size() ? alpha_head_[n - 1] : alpha_tail_;
}

double JacobiParams::beta(std::size_t n) const {
    if (n == 0) throw std::out_of_range("Jacobi indices start at 1");
    return n <= beta_head_.size() ? beta_head_[n - 1] : beta_tail_;
}

std::optional<std::size_t> JacobiParams::termination_level() const {
    for (std::size_t k = 0; k < beta_head_.size(); ++k)
        if (beta_head_[k] == 0.0) return k + 1;
    if (beta_tail_ == 0.0) return beta_head_.size() + 1;
    return std::nullopt;
}

double JacobiParams::support_radius() const {
    // Row k of the Jacobi matrix: |alpha_k| + sqrt(beta_{k-1}) + sqrt(beta_k).
    double radius = 0.0;
    const std::size_t rows = head_length() + 2;
    for (std::size_t k = 1; k <= rows; ++k) {
        const double left = k > 1 ? std::sqrt(beta(k - 1)) : 0.0;
        radius = std::max(radius, std::abs(alpha(k)) + left + std::sqrt(beta(k)));
    }
    return radius;
}

JacobiParams meixner_to_jacobi(const MeixnerParams& p) {
    p.validate();
    if (p.b1 == 0.0) return JacobiParams({p.a1}, 0.0, {0.0}, 0.0);
    return JacobiParams({p.a1, p.a2}, p.a2, {p.b1, p.b2}, p.b2);
}

namespace {

// Root of beta w^2 - (z - alpha) w + 1 = 0 that is the Cauchy transform of the
// semicircle on [alpha - 2 sqrt(beta), alpha + 2 sqrt(beta)]: the one with
// |sqrt(beta) w| < 1 off the support.
std::complex<double> constant_tail_fixed_point(double alpha, double beta, std::complex<double> z) {
    const std::complex<double> shifted = z - alpha;
    if (beta == 0.0) return 1.0 / shifted;
    const std::complex<double> root = std::sqrt(shifted * shifted - 4.0 * beta);
    const std::complex<double> w_minus = (shifted - root) / (2.0 * beta);
    const std::complex<double> w_plus = (shifted + root) / (2.0 * beta);
    return std::abs(w_minus) <= std::abs(w_plus) ? w_minus : w_plus;
}

}  // namespace

std::complex<double> cauchy_transform(const JacobiParams& j, std::complex<double> z, int depth) {
    if (depth < 1) throw std::invalid_argument("continued-fraction depth must be at least 1");
    if (z.imag() == 0.0 && std::abs(z.real()) <= j.support_radius())
        throw std::domain_error("real argument inside the support bound: " + std::to_string(z.real()));

    auto levels = static_cast<std::size_t>(depth);
    if (const auto stop = j.termination_level(); stop && *stop < levels) levels = *stop;

    std::complex<double> below = 0.0;
    if (!j.termination_level() || *j.termination_level() > levels)
        below = constant_tail_fixed_point(j.alpha_tail(), j.beta_tail(), z);

    std::complex<double> g = 0.0;
    for (std::size_t k = levels; k >= 1; --k) {
        const double b = j.beta(k);
        g = 1.0 / (z - j.alpha(k) - (b == 0.0 ? std::complex<double>(0.0) : b * below));
        below = g;
    }
    return g;
}

std::pair<double, double> density_support(const MeixnerParams& p) {
    const double half_width = 2.0 * std::sqrt(p.b2);
    return {p.a2 - half_width, p.a2 + half_width};
}

namespace {

void require_standard(const MeixnerParams& p) {
    p.validate();
    if (!p.is_standard())
        throw std::invalid_argument("density formula holds only for standard laws (a1 = 0, b1 = 1)");
    if (p.b2 <= 0.0) throw std::invalid_argument("density formula needs b2 > 0");
}

double denominator(const MeixnerParams& p, double x) {
    return (p.b2 - 1.0) * x * x + p.a2 * x + 1.0;
}

// Throws if (b2 - 1) x^2 + a2 x + 1 has a root inside the support. A root at
// an edge meets a zero of the numerator and leaves an integrable singularity.
void require_pole_free(const MeixnerParams& p) {
    const auto [lo, hi] = density_support(p);
    const double a = p.b2 - 1.0;
    const double b = p.a2;
    std::vector<double> roots;
    if (a == 0.0) {
        if (b != 0.0) roots.push_back(-1.0 / b);
    } else {
        const double disc = b * b - 4.0 * a;
        if (disc >= 0.0) {
            const double s = std::sqrt(disc);
            roots.push_back((-b - s) / (2.0 * a));
            roots.push_back((-b + s) / (2.0 * a));
        }
    }
    for (double r : roots)
        if (r > lo && r < hi)
            throw std::domain_error("density denominator vanishes inside the support at x = " + std::to_string(r));
}

}  // namespace

double density_eval(const MeixnerParams& p, double x) {
    require_standard(p);
    require_pole_free(p);
    const double radicand = 4.0 * p.b2 - (x - p.a2) * (x - p.a2);
    if (radicand <= 0.0) return 0.0;
    return std::sqrt(radicand) / (2.0 * std::numbers::pi * denominator(p, x));
}

DensityMoments density_moments(const MeixnerParams& p, int m_max, int nodes) {
    require_standard(p);
    require_pole_free(p);
    if (m_max < 0) throw std::invalid_argument("m_max must be non-negative");
    if (nodes < 2) throw std::invalid_argument("quadrature needs at least two nodes");

    // x = a2 + r cos t, dx = -r sin t dt, sqrt(4 b2 - (x - a2)^2) = r sin t.
    const double r = 2.0 * std::sqrt(p.b2);
    const double h = std::numbers::pi / nodes;
    std::vector<double> sums(static_cast<std::size_t>(m_max) + 1, 0.0);
    for (int i = 0; i < nodes; ++i) {
        const double t = (i + 0.5) * h;
        const double x = p.a2 + r * std::cos(t);
        const double s = r * std::sin(t);
        const double weight = s * s / (2.0 * std::numbers::pi * denominator(p, x)) * h;
        double power = 1.0;
        for (auto& sum : sums) {
            sum += weight * power;
            power *= x;
        }
    }

    DensityMoments result;
    result.mass = sums[0];
    result.has_atoms = result.mass < 1.0 - 1e-3;
    result.table.method = MomentMethod::density_quadrature;
    result.table.moments = std::move(sums);
    return result;
}

MomentTable moments_tridiagonal(const JacobiParams& j, int m_max) {
    if (m_max < 0) throw std::invalid_argument("m_max must be non-negative");
    const auto size = static_cast<std::size_t>(m_max / 2 + 2);
    std::vector<double> diag(size), off(size - 1);
    for (std::size_t k = 0; k < size; ++k) diag[k] = j.alpha(k + 1);
    for (std::size_t k = 0; k + 1 < size; ++k) off[k] = std::sqrt(j.beta(k + 1));

    MomentTable table;
    table.method = MomentMethod::tridiagonal;
    table.moments.reserve(static_cast<std::size_t>(m_max) + 1);

    // v = J^m e_1; M_m = v[0].
    std::vector<double> v(size, 0.0), next(size);
    v[0] = 1.0;
    table.moments.push_back(1.0);
    for (int m = 1; m <= m_max; ++m) {
        for (std::size_t k = 0; k < size; ++k) {
            double acc = diag[k] * v[k];
            if (k > 0) acc += off[k - 1] * v[k - 1];
            if (k + 1 < size) acc += off[k] * v[k + 1];
            next[k] = acc;
        }
        v.swap(next);
        table.moments.push_back(v[0]);
    }
    return table;
}

}  // namespace meixner
