#include "meixner/rmt.hpp"

#include "parallel.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include <Eigen/Eigenvalues>

namespace meixner {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

int block_of(int i, const BlockGeometry& g) { return i < g.n1 ? 1 : 2; }

double variance(const MatrixLabel& l, int p, int q) {
    if (p == 1 && q == 1) return l.v11;
    if (p == 2 && q == 2) return l.v22;
    return l.v12;
}

void check_state(int j) {
    if (j != 1 && j != 2) throw std::invalid_argument("partial trace state must be 1 or 2");
}

// Block offset and size of N_j.
std::pair<int, int> block_range(int j, const BlockGeometry& g) {
    return j == 1 ? std::pair{0, g.n1} : std::pair{g.n1, g.n2()};
}

double checked_real(std::complex<double> z, double tol, const char* what) {
    if (std::abs(z.imag()) > tol * std::max(1.0, std::abs(z.real())))
        throw std::domain_error(std::string(what) + ": partial trace has a non-negligible imaginary part");
    return z.real();
}

}  // namespace

void BlockGeometry::validate() const {
    if (n1 < 1 || n1 >= n) throw std::invalid_argument("block geometry needs 1 <= n1 < n");
}

BlockGeometry BlockGeometry::from_schedule(int n, double rho) {
    if (!(rho > 0.0 && rho < 1.0)) throw std::invalid_argument("rho must lie in (0, 1)");
    if (n < 2) throw std::invalid_argument("matrix size must be at least 2");
    // Guard against pow rounding just below an exact integer power.
    int n1 = static_cast<int>(std::floor(std::pow(static_cast<double>(n), rho) + 1e-9));
    BlockGeometry g{n, std::clamp(n1, 1, n - 1)};
    g.validate();
    return g;
}

void MatrixLabel::validate() const {
    for (double v : {v11, v12, v22})
        if (!(v >= 0.0) || !std::isfinite(v)) throw std::invalid_argument("variances must be finite and >= 0");
    if (!std::isfinite(a1) || !std::isfinite(a2)) throw std::invalid_argument("shifts must be finite");
    if (name.empty()) throw std::invalid_argument("label name must not be empty");
}

Eigen::Matrix2d MatrixLabel::limit_block_variances() const {
    Eigen::Matrix2d b;
    b << 0.0, 0.0, v12, v22;
    return b;
}

void EnsembleSpec::validate() const {
    geometry.validate();
    if (labels.empty()) throw std::invalid_argument("ensemble needs at least one label");
    for (std::size_t i = 0; i < labels.size(); ++i) {
        labels[i].validate();
        for (std::size_t k = 0; k < i; ++k)
            if (labels[k].name == labels[i].name) throw std::invalid_argument("duplicate label '" + labels[i].name + "'");
    }
    if (trials < 1) throw std::invalid_argument("need at least 1 trial");
}

int EnsembleSpec::label_index(const std::string& name) const {
    for (std::size_t i = 0; i < labels.size(); ++i)
        if (labels[i].name == name) return static_cast<int>(i);
    throw std::out_of_range("unknown label '" + name + "'");
}

std::uint64_t derive_seed(std::uint64_t master, std::uint64_t trial, std::uint64_t label) {
    return splitmix64(splitmix64(splitmix64(master) ^ trial) ^ label);
}

HermitianSample sample_matrix(const BlockGeometry& g, const MatrixLabel& label, Rng& rng, std::uint64_t draw) {
    g.validate();
    label.validate();
    const int n = g.n;
    const double dn = static_cast<double>(n);
    std::normal_distribution<double> normal(0.0, 1.0);
    ComplexMatrix y(n, n);
    for (int j = 0; j < n; ++j) {
        const int q = block_of(j, g);
        for (int i = 0; i < j; ++i) {
            const double sd = std::sqrt(variance(label, block_of(i, g), q) / (2.0 * dn));
            const double re = normal(rng);
            const double im = normal(rng);
            y(i, j) = {sd * re, sd * im};
            y(j, i) = std::conj(y(i, j));
        }
        const double sd = std::sqrt(variance(label, q, q) / dn);
        y(j, j) = {sd * normal(rng), 0.0};
    }
    return {std::move(y), label.name, draw};
}

ComplexMatrix meixner_matrix(const HermitianSample& y, const BlockGeometry& g, const MatrixLabel& label) {
    ComplexMatrix m = y.matrix;
    if (m.rows() != g.n || m.cols() != g.n) throw std::invalid_argument("sample does not match geometry");
    for (int i = 0; i < g.n; ++i) m(i, i) += i < g.n1 ? label.a1 : label.a2;
    return m;
}

double partial_trace(const ComplexMatrix& a, int j, const BlockGeometry& g, double imag_tolerance) {
    check_state(j);
    auto [off, size] = block_range(j, g);
    std::complex<double> s = a.diagonal().segment(off, size).sum() / static_cast<double>(size);
    return checked_real(s, imag_tolerance, "partial_trace");
}

Estimate summarize(std::span<const double> values) {
    if (values.empty()) throw std::invalid_argument("summarize needs at least one value");
    double sum = 0.0;
    for (double v : values) sum += v;
    const double count = static_cast<double>(values.size());
    const double mean = sum / count;
    if (values.size() < 2) return {mean, 0.0};
    double ss = 0.0;
    for (double v : values) ss += (v - mean) * (v - mean);
    return {mean, std::sqrt(ss / (count - 1.0) / count)};
}

std::vector<double> partial_trace_powers_direct(const ComplexMatrix& m, const BlockGeometry& g, int j, int m_max) {
    check_state(j);
    std::vector<double> out(m_max + 1, 1.0);
    ComplexMatrix p = ComplexMatrix::Identity(g.n, g.n);
    for (int k = 1; k <= m_max; ++k) {
        p = p * m;
        out[k] = partial_trace(p, j, g, 1e-8);
    }
    return out;
}

std::vector<double> partial_trace_powers_fast(const ComplexMatrix& m, const BlockGeometry& g, int j, int m_max) {
    check_state(j);
    if (m_max < 0) throw std::invalid_argument("m_max must be >= 0");
    std::vector<double> tau1(m_max + 1, 1.0);
    // Row block of N1: X_k = (M^k)_{N1, *}.
    ComplexMatrix x = m.topRows(g.n1);
    for (int k = 1; k <= m_max; ++k) {
        if (k > 1) x = x * m;
        tau1[k] = checked_real(x.leftCols(g.n1).diagonal().sum() / static_cast<double>(g.n1), 1e-8,
                               "partial_trace_powers_fast");
    }
    if (j == 1) return tau1;

    Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(m, Eigen::EigenvaluesOnly);
    const Eigen::VectorXd lambda = es.eigenvalues();
    Eigen::VectorXd pw = Eigen::VectorXd::Ones(g.n);
    std::vector<double> tau2(m_max + 1, 1.0);
    for (int k = 1; k <= m_max; ++k) {
        pw = pw.cwiseProduct(lambda);
        tau2[k] = (pw.sum() - g.n1 * tau1[k]) / static_cast<double>(g.n2());
    }
    return tau2;
}

namespace {

MomentTable reduce(const std::vector<std::vector<double>>& per_trial, int m_max) {
    MomentTable t;
    t.method = MomentMethod::monte_carlo;
    const std::size_t trials = per_trial.size();
    std::vector<double> column(trials);
    for (int k = 0; k <= m_max; ++k) {
        for (std::size_t s = 0; s < trials; ++s) column[s] = per_trial[s][k];
        Estimate e = summarize(column);
        t.moments.push_back(k == 0 ? 1.0 : e.mean);
        t.stderrs.push_back(k == 0 ? 0.0 : e.standard_error);
    }
    return t;
}

void check_mc_args(const BlockSpec& spec, int m_max, int trials) {
    spec.geometry.validate();
    spec.label.validate();
    if (m_max < 1 || m_max > 8) throw std::invalid_argument("Monte-Carlo moments need 1 <= m_max <= 8");
    if (trials < 1) throw std::invalid_argument("need at least 1 trial");
}

}  // namespace

TraceMoments mc_trace_moments(const BlockSpec& spec, int m_max, int trials, std::uint64_t seed, bool with_tau2,
                              ExecutionPolicy policy) {
    check_mc_args(spec, m_max, trials);
    const auto& g = spec.geometry;
    std::vector<std::vector<double>> t1(trials), t2(trials);
    detail::parallel_for(trials, policy, [&](int t) {
        Rng rng(derive_seed(seed, static_cast<std::uint64_t>(t), 0));
        ComplexMatrix m = meixner_matrix(sample_matrix(g, spec.label, rng, t), g, spec.label);
        t1[t] = partial_trace_powers_fast(m, g, 1, m_max);
        if (with_tau2) t2[t] = partial_trace_powers_fast(m, g, 2, m_max);
    });
    TraceMoments out;
    out.tau1 = reduce(t1, m_max);
    if (with_tau2) out.tau2 = reduce(t2, m_max);
    return out;
}

MomentTable mc_moments(const BlockSpec& spec, int m_max, int trials, std::uint64_t seed, int state,
                       ExecutionPolicy policy) {
    check_state(state);
    check_mc_args(spec, m_max, trials);
    const auto& g = spec.geometry;
    std::vector<std::vector<double>> per(trials);
    detail::parallel_for(trials, policy, [&](int t) {
        Rng rng(derive_seed(seed, static_cast<std::uint64_t>(t), 0));
        ComplexMatrix m = meixner_matrix(sample_matrix(g, spec.label, rng, t), g, spec.label);
        per[t] = partial_trace_powers_fast(m, g, state, m_max);
    });
    return reduce(per, m_max);
}

Estimate mc_polynomial_word(const EnsembleSpec& spec, std::span<const MatrixPolynomial> word, int state,
                            std::uint64_t seed, ExecutionPolicy policy) {
    spec.validate();
    check_state(state);
    if (word.empty()) throw std::invalid_argument("empty word");
    const int nl = static_cast<int>(spec.labels.size());
    for (const auto& f : word) {
        if (f.label < 0 || f.label >= nl) throw std::out_of_range("polynomial label out of range");
        if (f.coeffs.empty()) throw std::invalid_argument("polynomial without coefficients");
    }
    // Palindromic words are Hermitian; for the others only the real part is kept.
    bool hermitian = true;
    for (std::size_t i = 0; i < word.size(); ++i) {
        const auto& a = word[i];
        const auto& b = word[word.size() - 1 - i];
        hermitian = hermitian && a.label == b.label && a.coeffs == b.coeffs;
    }
    const auto& g = spec.geometry;
    auto [off, size] = block_range(state, g);
    std::vector<double> values(spec.trials);
    detail::parallel_for(spec.trials, policy, [&](int t) {
        std::vector<ComplexMatrix> mats(nl);
        for (const auto& f : word) {
            if (mats[f.label].size() != 0) continue;
            const auto& lab = spec.labels[f.label];
            Rng rng(derive_seed(seed, static_cast<std::uint64_t>(t), static_cast<std::uint64_t>(f.label)));
            mats[f.label] = meixner_matrix(sample_matrix(g, lab, rng, t), g, lab);
        }
        // Rows of N_j carried through the product, left to right.
        ComplexMatrix x = ComplexMatrix::Identity(g.n, g.n).middleRows(off, size);
        for (const auto& f : word) {
            const ComplexMatrix& m = mats[f.label];
            ComplexMatrix acc = f.coeffs.back() * x;
            for (int k = static_cast<int>(f.coeffs.size()) - 2; k >= 0; --k) acc = acc * m + f.coeffs[k] * x;
            x = std::move(acc);
        }
        const std::complex<double> tr = x.middleCols(off, size).diagonal().sum() / static_cast<double>(size);
        values[t] = hermitian ? checked_real(tr, 1e-8, "mc_polynomial_word") : tr.real();
    });
    return summarize(values);
}

Estimate mc_mixed_moments(const EnsembleSpec& spec, std::span<const int> word, int state, std::uint64_t seed,
                          ExecutionPolicy policy) {
    std::vector<MatrixPolynomial> polys;
    for (int l : word) polys.push_back({l, {0.0, 1.0}});
    return mc_polynomial_word(spec, polys, state, seed, policy);
}

SweepResult finite_size_sweep(const MatrixLabel& label, int m, std::span<const int> sizes, double rho, int trials,
                              std::uint64_t seed, double limit, ExecutionPolicy policy) {
    if (sizes.empty()) throw std::invalid_argument("sweep needs at least one size");
    if (m < 0 || m > 8) throw std::invalid_argument("sweep moment order must lie in [0, 8]");
    SweepResult out;
    out.limit = limit;
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    int used = 0;
    for (int n : sizes) {
        BlockSpec spec{BlockGeometry::from_schedule(n, rho), label};
        Estimate e{1.0, 0.0};
        if (m > 0) {
            MomentTable t = mc_moments(spec, m, trials, derive_seed(seed, static_cast<std::uint64_t>(n), 0), 1, policy);
            e = {t.moments[m], t.stderrs[m]};
        }
        SweepRow row{n, spec.geometry.n1, e, std::abs(e.mean - limit)};
        out.rows.push_back(row);
        if (row.abs_error > 0) {
            const double lx = std::log(static_cast<double>(n)), ly = std::log(row.abs_error);
            sx += lx, sy += ly, sxx += lx * lx, sxy += lx * ly;
            ++used;
        }
    }
    out.decay_exponent = used < 2 ? std::numeric_limits<double>::quiet_NaN()
                                  : (used * sxy - sx * sy) / (used * sxx - sx * sx);
    return out;
}

}  // namespace meixner
