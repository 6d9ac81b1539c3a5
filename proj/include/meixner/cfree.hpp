#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "meixner/fock.hpp"
#include "meixner/rmt.hpp"

namespace meixner {

/// sum_k coeffs[k] y(label)^k, an element of the algebra generated by one
/// label. Degree (coeffs.size() - 1) is capped at 6.
struct AlgebraElement {
    int label = 0;
    std::vector<double> coeffs;

    int degree() const { return static_cast<int>(coeffs.size()) - 1; }
    /// Throws std::invalid_argument for an empty, non-finite or too long
    /// coefficient list, or a label outside [0, label_count).
    void validate(std::size_t label_count) const;
};

inline constexpr int kMaxElementDegree = 6;

/// Psi_q(e) = <Omega_q, e Omega_q>.
double expectation(const AlgebraElement& e, const FockModel& model, int q);

/// e - Psi_q(e) 1.
AlgebraElement center(const AlgebraElement& e, const FockModel& model, int q);

/// Psi_q(a_1 a_2 ... a_k). Throws std::length_error when the total degree
/// exceeds the model's exactness bound.
double product_expectation(std::span<const AlgebraElement> elements, const FockModel& model, int q);

/// Which state centers the inner factors of an alternating product.
enum class Centering {
    /// Inner factors under Psi_2, the last one under Psi_1.
    conditional,
    /// Every factor under Psi_1; the check for plain freeness with respect
    /// to Psi_1, which fails in general.
    psi1,
};

/// Throws std::invalid_argument unless the word is non-empty and adjacent
/// labels differ.
void require_alternating(std::span<const int> labels);

/// Psi_1 of the product after centering each element as `centering` asks.
double centered_product(std::span<const AlgebraElement> elements, const FockModel& model,
                        Centering centering = Centering::conditional);

struct KernelReport {
    int draws = 0;
    double max_abs = 0.0;
};

/// Draws `samples` coefficient sets uniform in [-1, 1] (element i of degree
/// degrees[i] with label labels[i]), centers them and returns the largest
/// |Psi_1(a_1 ... a_k)|. Draws are generated in order from one mt19937_64
/// seeded with `seed` and evaluated in parallel.
KernelReport kernel_property_test(const FockModel& model, std::span<const int> labels, std::span<const int> degrees,
                                  std::uint64_t seed, int samples, Centering centering = Centering::conditional,
                                  ExecutionPolicy policy = {});

struct WitnessValues {
    double w2 = 0.0;  ///< Psi_1(y(s) (y(u)^2 - b1) y(s))
    double w3 = 0.0;  ///< Psi_1(y(s) (y(u)^2 - b2) y(s))
};

/// Psi_1(w1 w w1) with w1 = y(s) and w = y(u)^2 centered under Psi_1 (w2) or
/// Psi_2 (w3); the first is the witness that the family is not free with
/// respect to Psi_1. Needs zero shifts, the same (b1, b2) on both labels,
/// b1 != b2 and b1, b2 > 0.
WitnessValues freeness_witness(const FockModel& model, int s, int u);

/// Matrix analogue of centered_product with the states replaced by the
/// partial traces of each trial's own matrices: inner factors are centered
/// with tau_2, the last with tau_1 (or all with tau_1 under
/// Centering::psi1), and the estimate is the trial mean of tau_1 of the
/// product. Label indices refer to spec.labels; trial t draws label l from
/// derive_seed(seed, t, l).
Estimate matrix_cfree_test(const EnsembleSpec& spec, std::span<const AlgebraElement> elements, std::uint64_t seed,
                           Centering centering = Centering::conditional, ExecutionPolicy policy = {});

}  // namespace meixner
