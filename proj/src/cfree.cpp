#include "meixner/cfree.hpp"

#include "parallel.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <random>
#include <stdexcept>

namespace meixner {

namespace {

using Vector = FockModel::Vector;

// p(Y) v by Horner's rule.
Vector apply_polynomial(const AlgebraElement& e, const FockModel& model, const Vector& v) {
    const auto& y = model.matrix(OperatorKind::field, e.label);
    Vector acc = e.coeffs.back() * v;
    for (int k = e.degree() - 1; k >= 0; --k) acc = y * acc + e.coeffs[k] * v;
    return acc;
}

int centering_state(Centering c, std::size_t position, std::size_t count) {
    if (c == Centering::psi1) return 1;
    return position + 1 == count ? 1 : 2;
}

ComplexMatrix matrix_polynomial(const AlgebraElement& e, const ComplexMatrix& m) {
    const int d = e.degree();
    if (d == 0) return ComplexMatrix::Identity(m.rows(), m.cols()) * e.coeffs[0];
    ComplexMatrix acc = e.coeffs[d] * m;
    acc.diagonal().array() += e.coeffs[d - 1];
    for (int k = d - 2; k >= 0; --k) {
        acc = acc * m;
        acc.diagonal().array() += e.coeffs[k];
    }
    return acc;
}

}  // namespace

void AlgebraElement::validate(std::size_t label_count) const {
    if (label < 0 || static_cast<std::size_t>(label) >= label_count)
        throw std::invalid_argument("element label out of range");
    if (coeffs.empty()) throw std::invalid_argument("element needs at least one coefficient");
    if (degree() > kMaxElementDegree) throw std::invalid_argument("element degree exceeds 6");
    for (double c : coeffs)
        if (!std::isfinite(c)) throw std::invalid_argument("element coefficients must be finite");
}

double expectation(const AlgebraElement& e, const FockModel& model, int q) {
    e.validate(model.label_count());
    model.require_exact(static_cast<std::size_t>(e.degree()));
    const std::size_t vac = model.vacuum_index(q);
    return apply_polynomial(e, model, model.basis_vector(vac))(static_cast<Eigen::Index>(vac));
}

AlgebraElement center(const AlgebraElement& e, const FockModel& model, int q) {
    AlgebraElement out = e;
    out.coeffs[0] -= expectation(e, model, q);
    return out;
}

double product_expectation(std::span<const AlgebraElement> elements, const FockModel& model, int q) {
    if (elements.empty()) throw std::invalid_argument("empty product");
    std::size_t total = 0;
    for (const auto& e : elements) {
        e.validate(model.label_count());
        total += static_cast<std::size_t>(e.degree());
    }
    model.require_exact(total);
    const std::size_t vac = model.vacuum_index(q);
    Vector v = model.basis_vector(vac);
    for (auto it = elements.rbegin(); it != elements.rend(); ++it) v = apply_polynomial(*it, model, v);
    return v(static_cast<Eigen::Index>(vac));
}

void require_alternating(std::span<const int> labels) {
    if (labels.empty()) throw std::invalid_argument("empty word");
    for (std::size_t i = 1; i < labels.size(); ++i)
        if (labels[i] == labels[i - 1])
            throw std::invalid_argument("adjacent labels must differ (position " + std::to_string(i) + ")");
}

double centered_product(std::span<const AlgebraElement> elements, const FockModel& model, Centering centering) {
    std::vector<int> labels;
    for (const auto& e : elements) labels.push_back(e.label);
    require_alternating(labels);
    std::vector<AlgebraElement> centered;
    for (std::size_t i = 0; i < elements.size(); ++i)
        centered.push_back(center(elements[i], model, centering_state(centering, i, elements.size())));
    return product_expectation(centered, model, 1);
}

KernelReport kernel_property_test(const FockModel& model, std::span<const int> labels, std::span<const int> degrees,
                                  std::uint64_t seed, int samples, Centering centering, ExecutionPolicy policy) {
    require_alternating(labels);
    if (labels.size() != degrees.size()) throw std::invalid_argument("one degree per label is required");
    if (samples < 1) throw std::invalid_argument("need at least one draw");
    std::size_t total = 0;
    for (int d : degrees) {
        if (d < 0 || d > kMaxElementDegree) throw std::invalid_argument("degrees must lie in [0, 6]");
        total += static_cast<std::size_t>(d);
    }
    model.require_exact(total);

    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> coef(-1.0, 1.0);
    std::vector<std::vector<AlgebraElement>> draws(samples);
    for (auto& word : draws)
        for (std::size_t i = 0; i < labels.size(); ++i) {
            AlgebraElement e{labels[i], std::vector<double>(degrees[i] + 1)};
            for (double& c : e.coeffs) c = coef(rng);
            word.push_back(std::move(e));
        }

    std::vector<double> values(samples);
    detail::parallel_for(samples, policy,
                         [&](int t) { values[t] = std::abs(centered_product(draws[t], model, centering)); });
    KernelReport report{samples, 0.0};
    for (double v : values) report.max_abs = std::max(report.max_abs, v);
    return report;
}

WitnessValues freeness_witness(const FockModel& model, int s, int u) {
    if (s == u) throw std::invalid_argument("freeness_witness needs two distinct labels");
    const auto& ps = model.params(s);
    const auto& pu = model.params(u);
    if (ps.a1 != 0 || ps.a2 != 0 || pu.a1 != 0 || pu.a2 != 0)
        throw std::invalid_argument("freeness_witness needs zero shifts");
    if (ps.b1 != pu.b1 || ps.b2 != pu.b2) throw std::invalid_argument("freeness_witness needs shared (b1, b2)");
    if (!(ps.b1 > 0 && ps.b2 > 0) || ps.b1 == ps.b2) throw std::invalid_argument("freeness_witness needs 0 < b1 != b2, b2 > 0");

    const AlgebraElement w1{s, {0.0, 1.0}};
    const std::vector<AlgebraElement> word2{w1, {u, {-ps.b1, 0.0, 1.0}}, w1};
    const std::vector<AlgebraElement> word3{w1, {u, {-ps.b2, 0.0, 1.0}}, w1};
    return {product_expectation(word2, model, 1), product_expectation(word3, model, 1)};
}

Estimate matrix_cfree_test(const EnsembleSpec& spec, std::span<const AlgebraElement> elements, std::uint64_t seed,
                           Centering centering, ExecutionPolicy policy) {
    spec.validate();
    std::vector<int> labels;
    for (const auto& e : elements) {
        e.validate(spec.labels.size());
        labels.push_back(e.label);
    }
    require_alternating(labels);
    const auto& g = spec.geometry;
    const std::size_t k = elements.size();
    std::vector<double> values(spec.trials);
    detail::parallel_for(spec.trials, policy, [&](int t) {
        std::vector<ComplexMatrix> mats(spec.labels.size());
        for (int l : labels) {
            if (mats[l].size() != 0) continue;
            Rng rng(derive_seed(seed, static_cast<std::uint64_t>(t), static_cast<std::uint64_t>(l)));
            mats[l] = meixner_matrix(sample_matrix(g, spec.labels[l], rng, t), g, spec.labels[l]);
        }
        ComplexMatrix x;
        for (std::size_t i = 0; i < k; ++i) {
            ComplexMatrix p = matrix_polynomial(elements[i], mats[elements[i].label]);
            p.diagonal().array() -= partial_trace(p, centering_state(centering, i, k), g, 1e-8);
            // Only the N1 rows of the running product matter for tau_1.
            x = i == 0 ? ComplexMatrix(p.topRows(g.n1)) : ComplexMatrix(x * p);
        }
        // The factors are centered with different traces, so the product is not
        // Hermitian; its limit is real and only the real part is kept.
        values[t] = (x.leftCols(g.n1).diagonal().sum() / static_cast<double>(g.n1)).real();
    });
    return summarize(values);
}

}  // namespace meixner
