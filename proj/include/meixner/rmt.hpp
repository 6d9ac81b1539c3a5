#pragma once

#include <complex>
#include <cstdint>
#include <random>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "meixner/jacobi.hpp"

namespace meixner {

using ComplexMatrix = Eigen::MatrixXcd;

/// Split [n] = N1 u N2 with N1 = {1..n1} and N2 = {n1+1..n}.
struct BlockGeometry {
    int n = 0;
    int n1 = 0;

    int n2() const { return n - n1; }
    /// Throws std::invalid_argument unless 1 <= n1 < n.
    void validate() const;

    /// n1 = floor(n^rho), rho in (0, 1). With rho < 1 the first block has
    /// vanishing relative size and the second has relative size 1.
    static BlockGeometry from_schedule(int n, double rho = 0.5);
};

/// Per-label variance matrix V = (v11, v12 = v21, v22) and diagonal shifts.
struct MatrixLabel {
    std::string name = "u";
    double v11 = 0.0;
    double v12 = 1.0;
    double v22 = 1.0;
    double a1 = 0.0;
    double a2 = 0.0;

    void validate() const;
    /// Limit law (a1, a2, beta1 = v21, beta2 = v22).
    MeixnerParams limit_params() const { return {a1, a2, v12, v22}; }
    /// b_{p,q} = d_p v_{p,q} with asymptotic dimensions d1 = 0, d2 = 1.
    Eigen::Matrix2d limit_block_variances() const;
};

struct BlockSpec {
    BlockGeometry geometry;
    MatrixLabel label;
};

/// Independent labelled matrices sharing one block geometry.
struct EnsembleSpec {
    BlockGeometry geometry;
    std::vector<MatrixLabel> labels;
    int trials = 1;
    std::uint64_t seed = 0;

    void validate() const;
    int label_index(const std::string& name) const;
};

/// Seed of the private stream for (trial, label):
/// h(h(h(master) ^ trial) ^ label) with h the splitmix64 finalizer.
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t trial, std::uint64_t label);

using Rng = std::mt19937_64;

struct HermitianSample {
    ComplexMatrix matrix;
    std::string label;
    std::uint64_t draw = 0;
};

/// Hermitian Gaussian block matrix: for i < j in N_p x N_q the real and
/// imaginary parts are independent N(0, v_pq / (2n)); diagonal entries in N_q
/// are real N(0, v_qq / n). Entries are drawn column by column over the upper
/// triangle, and every entry consumes its draws even when its variance is 0.
HermitianSample sample_matrix(const BlockGeometry& geometry, const MatrixLabel& label, Rng& rng,
                              std::uint64_t draw = 0);

/// Y + a1 I1 + a2 I2.
ComplexMatrix meixner_matrix(const HermitianSample& y, const BlockGeometry& geometry, const MatrixLabel& label);

/// tau_j(A) = |N_j|^{-1} sum_{i in N_j} A_ii. Throws std::domain_error when the
/// imaginary part exceeds `imag_tolerance`.
double partial_trace(const ComplexMatrix& a, int j, const BlockGeometry& geometry, double imag_tolerance = 1e-10);

struct Estimate {
    double mean = 0.0;
    double standard_error = 0.0;
};

/// Sample mean and standard error (sample standard deviation / sqrt(count)),
/// summed in index order.
Estimate summarize(std::span<const double> values);

struct TraceMoments {
    MomentTable tau1;
    MomentTable tau2;
};

/// Parallel execution of independent trials. Results are stored per trial
/// and reduced in trial order, so they do not depend on `threads`.
struct ExecutionPolicy {
    unsigned threads = 0;  ///< 0: std::thread::hardware_concurrency()
};

/// Monte-Carlo estimates of tau_1(M^m) and tau_2(M^m) for m <= m_max (<= 8).
///
/// tau_1 comes from powers of the N1 row block; tau_2 from
/// (tr M^m - n1 tau_1(M^m)) / n2 with tr M^m = sum of eigenvalue powers.
/// Trial t draws from derive_seed(seed, t, 0).
TraceMoments mc_trace_moments(const BlockSpec& spec, int m_max, int trials, std::uint64_t seed,
                              bool with_tau2 = true, ExecutionPolicy policy = {});

/// One partial trace only; `state` is 1 or 2.
MomentTable mc_moments(const BlockSpec& spec, int m_max, int trials, std::uint64_t seed, int state = 1,
                       ExecutionPolicy policy = {});

/// tau_j(M^m) for m <= m_max on one fixed matrix via full matrix powers;
/// the reference route for the row-block and eigenvalue shortcuts.
std::vector<double> partial_trace_powers_direct(const ComplexMatrix& m, const BlockGeometry& geometry, int j,
                                                int m_max);
std::vector<double> partial_trace_powers_fast(const ComplexMatrix& m, const BlockGeometry& geometry, int j,
                                              int m_max);

/// Polynomial sum_k coeffs[k] M(label)^k in one matrix of the ensemble.
struct MatrixPolynomial {
    int label = 0;
    std::vector<double> coeffs;
};

/// tau_j of a product of polynomials in the ensemble matrices. In each trial
/// every label gets one fresh independent matrix (seed derive_seed(seed, t,
/// label)), reused wherever the label recurs in the word. Palindromic words are
/// Hermitian and must give a real trace (std::domain_error otherwise); for the
/// others the real part is taken, since the limit is real.
Estimate mc_polynomial_word(const EnsembleSpec& spec, std::span<const MatrixPolynomial> word, int state,
                            std::uint64_t seed, ExecutionPolicy policy = {});

/// tau_j(M(u_1) ... M(u_m)).
Estimate mc_mixed_moments(const EnsembleSpec& spec, std::span<const int> word, int state, std::uint64_t seed,
                          ExecutionPolicy policy = {});

struct SweepRow {
    int n = 0;
    int n1 = 0;
    Estimate estimate;
    double abs_error = 0.0;
};

struct SweepResult {
    std::vector<SweepRow> rows;
    double limit = 0.0;
    /// Least-squares slope of log|estimate - limit| against log n over rows
    /// with a non-zero error; NaN with fewer than two such rows.
    double decay_exponent = 0.0;
};

/// tau_1(M^m) across matrix sizes, each with geometry from_schedule(n, rho);
/// `limit` is the moment the estimates should approach.
SweepResult finite_size_sweep(const MatrixLabel& label, int m, std::span<const int> sizes, double rho, int trials,
                              std::uint64_t seed, double limit, ExecutionPolicy policy = {});

}  // namespace meixner
