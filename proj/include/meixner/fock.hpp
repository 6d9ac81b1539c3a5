#pragma once

#include <cstddef>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/SparseCore>

#include "meixner/jacobi.hpp"

namespace meixner {

/// Element of the orthonormal basis of M = M1 (+) M2.
///
/// A word with letters (u_1..u_k) encodes e2(u_1..u_{k-1}) (x) e1(u_k) when
/// `terminal_e1` is set (a vector of M1) and e2(u_1..u_k) otherwise (a vector
/// of M2). Letters are label indices into the model's index set.
struct BasisWord {
    enum class Kind { vacuum1, vacuum2, word };

    Kind kind = Kind::vacuum1;
    std::vector<int> letters;
    bool terminal_e1 = false;

    static BasisWord vacuum(int q) { return {q == 1 ? Kind::vacuum1 : Kind::vacuum2, {}, false}; }
    static BasisWord e1_word(std::vector<int> letters) { return {Kind::word, std::move(letters), true}; }
    static BasisWord e2_word(std::vector<int> letters) { return {Kind::word, std::move(letters), false}; }

    int length() const { return static_cast<int>(letters.size()); }
    /// True for Omega1 and the e1-terminated words.
    bool in_first_summand() const { return kind == Kind::vacuum1 || (kind == Kind::word && terminal_e1); }

    bool operator==(const BasisWord&) const = default;
};

enum class OperatorKind {
    create1,      ///< p1(u)
    annihilate1,  ///< p1*(u)
    create2,      ///< p2(u)
    annihilate2,  ///< p2*(u)
    gaussian1,    ///< w1(u) = p1(u) + p1*(u)
    gaussian2,    ///< w2(u) = p2(u) + p2*(u)
    gaussian,     ///< w(u) = w1(u) + w2(u)
    gamma,        ///< g(u)
    field,        ///< y(u) = w(u) + g(u)
};

struct OperatorToken {
    OperatorKind kind = OperatorKind::field;
    int label = 0;

    bool operator==(const OperatorToken&) const = default;
};

/// Thrown by parse_operator_word; `position` is the 0-based token index.
class OperatorParseError : public std::invalid_argument {
public:
    OperatorParseError(const std::string& what, std::size_t position)
        : std::invalid_argument(what), position_(position) {}
    std::size_t position() const { return position_; }

private:
    std::size_t position_;
};

/// Parses space-separated tokens such as "p1*(u) w2(s) y(u)". The "(label)"
/// suffix may be omitted when the index set has exactly one label.
std::vector<OperatorToken> parse_operator_word(std::string_view text, const std::vector<std::string>& labels);
std::string to_string(const OperatorToken& token, const std::vector<std::string>& labels);

/// How g(u) acts on words when the index set has several labels. Both agree
/// when there is a single label.
enum class GammaAction {
    /// (a2 - a1)(b1^{-1} p1 p1* + b2^{-1} p2 p2*) + a1, i.e. a2(u) on the words
    /// whose first letter is u and a1(u) everywhere else.
    label_projection,
    /// a1(u) on both vacua and a2(u) on every word; this is the action of the
    /// deterministic shift a1 I1 + a2 I2 in the block-matrix limit.
    level_diagonal,
};

/// Truncated matricially free Fock space of tracial type over a finite index
/// set, with sparse matrices for the creation, annihilation, Gaussian and
/// shift operators of every label.
///
/// Words longer than `depth` are dropped, so a vacuum moment of m operators is
/// exact whenever m <= 2 (depth - 1). The model is immutable after
/// construction and safe to share across threads.
class FockModel {
public:
    using SparseMatrix = Eigen::SparseMatrix<double>;
    using Vector = Eigen::VectorXd;

    FockModel(std::vector<std::string> labels, int depth, std::vector<MeixnerParams> params,
              GammaAction gamma = GammaAction::label_projection);

    /// One-label model with label "u".
    static FockModel single(const MeixnerParams& params, int depth);

    std::size_t dimension() const { return basis_.size(); }
    int depth() const { return depth_; }
    int exactness_bound() const { return 2 * (depth_ - 1); }
    GammaAction gamma_action() const { return gamma_action_; }

    const std::vector<std::string>& labels() const { return labels_; }
    std::size_t label_count() const { return labels_.size(); }
    int label_index(std::string_view name) const;
    const MeixnerParams& params(int label) const { return params_.at(static_cast<std::size_t>(label)); }

    const BasisWord& basis_word(std::size_t index) const { return basis_.at(index); }
    /// Throws std::out_of_range for words not in the truncated basis.
    std::size_t index_of(const BasisWord& word) const;
    std::size_t vacuum_index(int q) const;
    Vector basis_vector(std::size_t index) const;

    const SparseMatrix& matrix(OperatorKind kind, int label) const;
    Vector apply(const OperatorToken& token, const Vector& v) const;

    /// <Omega_q, T_1 T_2 ... T_m Omega_q>, applied right to left. Throws
    /// std::length_error when m exceeds exactness_bound().
    double state_moment(int q, std::span<const OperatorToken> word) const;

    /// Throws std::length_error if `operator_count` operators could reach a
    /// truncated word.
    void require_exact(std::size_t operator_count) const;

private:
    void build_basis();
    void build_operators();

    std::vector<std::string> labels_;
    int depth_;
    std::vector<MeixnerParams> params_;
    GammaAction gamma_action_;
    std::vector<BasisWord> basis_;
    std::vector<std::size_t> length_offset_;
    // operators_[label][kind]
    std::vector<std::vector<SparseMatrix>> operators_;
};

/// Psi_1((w + g)^m) on the one-label model; needs b1 > 0 and b2 > 0.
double meixner_moment_fock(const MeixnerParams& p, int m, int depth);
double meixner_moment_fock(const MeixnerParams& p, int m);

/// Psi_1((w1 + g1)^m) with g1 = (a2 - a1) b1^{-1} p1 p1* + a1, for b2 = 0.
double meixner_moment_fock_beta2_zero(const MeixnerParams& p, int m, int depth);

/// Psi_2((w2 + g2)^m) with g2 = (a2 - a1) b2^{-1} p2 p2* + a1; b1 is ignored.
/// These are the moments of the law (a1, a2, b2, b2).
double meixner_moment_fock_psi2(const MeixnerParams& p, int m, int depth);

/// Fock-route moment table, picking the operator that fits the parameters:
/// the full field for b1, b2 > 0, the b2 = 0 reduction otherwise (with
/// w1 = 0 when b1 = 0, which gives the Dirac mass at a1).
MomentTable moments_fock(const MeixnerParams& p, int m_max);

/// Psi_q(y(u_1) ... y(u_m)), or Psi_q(w(u_1) ... w(u_m)) without the shifts.
double ensemble_moment(const FockModel& model, int q, std::span<const int> labels, bool with_gamma);

}  // namespace meixner
