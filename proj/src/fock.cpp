#include "meixner/fock.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace meixner {

namespace {

constexpr std::size_t kMaxDimension = 4'000'000;
constexpr std::size_t kKindCount = 9;

std::size_t kind_slot(OperatorKind kind) { return static_cast<std::size_t>(kind); }

struct TokenName {
    std::string_view name;
    OperatorKind kind;
};

// Longest names first so "p1*" is not read as "p1".
constexpr TokenName kTokenNames[] = {
    {"p1*", OperatorKind::annihilate1}, {"p2*", OperatorKind::annihilate2},
    {"p1", OperatorKind::create1},      {"p2", OperatorKind::create2},
    {"w1", OperatorKind::gaussian1},    {"w2", OperatorKind::gaussian2},
    {"w", OperatorKind::gaussian},      {"g", OperatorKind::gamma},
    {"y", OperatorKind::field},
};

}  // namespace

std::vector<OperatorToken> parse_operator_word(std::string_view text, const std::vector<std::string>& labels) {
    std::vector<OperatorToken> tokens;
    std::istringstream stream{std::string(text)};
    std::string raw;
    for (std::size_t position = 0; stream >> raw; ++position) {
        std::string head = raw;
        std::string label_name;
        if (const auto open = raw.find('('); open != std::string::npos) {
            if (raw.back() != ')' || open + 2 > raw.size() - 1)
                throw OperatorParseError("malformed token '" + raw + "' at position " + std::to_string(position),
                                         position);
            head = raw.substr(0, open);
            label_name = raw.substr(open + 1, raw.size() - open - 2);
        }
        const TokenName* match = nullptr;
        for (const auto& candidate : kTokenNames)
            if (candidate.name == head) match = &candidate;
        if (match == nullptr)
            throw OperatorParseError("unknown operator '" + raw + "' at position " + std::to_string(position),
                                     position);

        int label = 0;
        if (label_name.empty()) {
            if (labels.size() != 1)
                throw OperatorParseError("token '" + raw + "' at position " + std::to_string(position) +
                                             " needs a label",
                                         position);
        } else {
            const auto it = std::find(labels.begin(), labels.end(), label_name);
            if (it == labels.end())
                throw OperatorParseError("unknown label '" + label_name + "' at position " + std::to_string(position),
                                         position);
            label = static_cast<int>(it - labels.begin());
        }
        tokens.push_back({match->kind, label});
    }
    return tokens;
}

std::string to_string(const OperatorToken& token, const std::vector<std::string>& labels) {
    for (const auto& candidate : kTokenNames)
        if (candidate.kind == token.kind)
            return std::string(candidate.name) + "(" + labels.at(static_cast<std::size_t>(token.label)) + ")";
    return "?";
}

FockModel::FockModel(std::vector<std::string> labels, int depth, std::vector<MeixnerParams> params,
                     GammaAction gamma)
    : labels_(std::move(labels)), depth_(depth), params_(std::move(params)), gamma_action_(gamma) {
    if (depth_ < 1) throw std::invalid_argument("Fock truncation depth must be at least 1");
    if (labels_.empty()) throw std::invalid_argument("Fock model needs at least one label");
    if (params_.size() != labels_.size()) throw std::invalid_argument("one parameter set per label required");
    for (const auto& p : params_) p.validate();
    build_basis();
    build_operators();
}

FockModel FockModel::single(const MeixnerParams& params, int depth) {
    return FockModel({"u"}, depth, {params});
}

void FockModel::build_basis() {
    const std::size_t letters = labels_.size();
    std::size_t dimension = 2;
    std::size_t words_of_length = 1;
    length_offset_.assign(static_cast<std::size_t>(depth_) + 2, 0);
    for (int k = 1; k <= depth_; ++k) {
        length_offset_[static_cast<std::size_t>(k)] = dimension;
        words_of_length *= letters;
        dimension += 2 * words_of_length;
        if (dimension > kMaxDimension) throw std::length_error("Fock basis too large; reduce depth or labels");
    }
    length_offset_[static_cast<std::size_t>(depth_) + 1] = dimension;

    basis_.reserve(dimension);
    basis_.push_back(BasisWord::vacuum(1));
    basis_.push_back(BasisWord::vacuum(2));
    std::vector<int> word;
    for (int k = 1; k <= depth_; ++k) {
        word.assign(static_cast<std::size_t>(k), 0);
        while (true) {
            basis_.push_back(BasisWord::e2_word(word));
            basis_.push_back(BasisWord::e1_word(word));
            // Lexicographic successor, last letter fastest.
            int pos = k - 1;
            while (pos >= 0 && word[static_cast<std::size_t>(pos)] == static_cast<int>(letters) - 1)
                word[static_cast<std::size_t>(pos--)] = 0;
            if (pos < 0) break;
            ++word[static_cast<std::size_t>(pos)];
        }
    }
}

int FockModel::label_index(std::string_view name) const {
    const auto it = std::find(labels_.begin(), labels_.end(), name);
    if (it == labels_.end()) throw std::invalid_argument("unknown label '" + std::string(name) + "'");
    return static_cast<int>(it - labels_.begin());
}

std::size_t FockModel::index_of(const BasisWord& word) const {
    switch (word.kind) {
        case BasisWord::Kind::vacuum1: return 0;
        case BasisWord::Kind::vacuum2: return 1;
        case BasisWord::Kind::word: break;
    }
    const int k = word.length();
    if (k < 1 || k > depth_) throw std::out_of_range("word length outside the truncated basis");
    std::size_t rank = 0;
    for (int letter : word.letters) {
        if (letter < 0 || static_cast<std::size_t>(letter) >= labels_.size())
            throw std::out_of_range("word letter outside the index set");
        rank = rank * labels_.size() + static_cast<std::size_t>(letter);
    }
    return length_offset_[static_cast<std::size_t>(k)] + 2 * rank + (word.terminal_e1 ? 1 : 0);
}

std::size_t FockModel::vacuum_index(int q) const {
    if (q != 1 && q != 2) throw std::invalid_argument("state index must be 1 or 2");
    return static_cast<std::size_t>(q - 1);
}

FockModel::Vector FockModel::basis_vector(std::size_t index) const {
    Vector v = Vector::Zero(static_cast<Eigen::Index>(dimension()));
    v[static_cast<Eigen::Index>(index)] = 1.0;
    return v;
}

void FockModel::build_operators() {
    using Triplet = Eigen::Triplet<double, Eigen::Index>;
    const auto n = static_cast<Eigen::Index>(dimension());
    operators_.assign(labels_.size(), std::vector<SparseMatrix>(kKindCount));

    for (std::size_t u = 0; u < labels_.size(); ++u) {
        const MeixnerParams& p = params_[u];
        const int label = static_cast<int>(u);
        const double s1 = std::sqrt(p.b1);
        const double s2 = std::sqrt(p.b2);

        std::vector<Triplet> create1{{static_cast<Eigen::Index>(index_of(BasisWord::e1_word({label}))), 0, s1}};
        std::vector<Triplet> create2;
        std::vector<Triplet> gamma;
        create2.reserve(basis_.size());
        gamma.reserve(basis_.size());
        for (std::size_t col = 0; col < basis_.size(); ++col) {
            const BasisWord& w = basis_[col];
            const auto c = static_cast<Eigen::Index>(col);
            if (w.kind == BasisWord::Kind::vacuum2) {
                create2.emplace_back(static_cast<Eigen::Index>(index_of(BasisWord::e2_word({label}))), c, s2);
            } else if (w.kind == BasisWord::Kind::word && w.length() < depth_) {
                BasisWord prepended = w;
                prepended.letters.insert(prepended.letters.begin(), label);
                create2.emplace_back(static_cast<Eigen::Index>(index_of(prepended)), c, s2);
            }

            double shift = p.a1;
            if (w.kind == BasisWord::Kind::word) {
                const bool in_range = gamma_action_ == GammaAction::level_diagonal || w.letters.front() == label;
                if (in_range) shift = p.a2;
            }
            if (shift != 0.0) gamma.emplace_back(c, c, shift);
        }

        auto& ops = operators_[u];
        auto& c1 = ops[kind_slot(OperatorKind::create1)];
        auto& c2 = ops[kind_slot(OperatorKind::create2)];
        auto& g = ops[kind_slot(OperatorKind::gamma)];
        c1.resize(n, n);
        c2.resize(n, n);
        g.resize(n, n);
        c1.setFromTriplets(create1.begin(), create1.end());
        c2.setFromTriplets(create2.begin(), create2.end());
        g.setFromTriplets(gamma.begin(), gamma.end());
        ops[kind_slot(OperatorKind::annihilate1)] = c1.transpose();
        ops[kind_slot(OperatorKind::annihilate2)] = c2.transpose();
        ops[kind_slot(OperatorKind::gaussian1)] = c1 + ops[kind_slot(OperatorKind::annihilate1)];
        ops[kind_slot(OperatorKind::gaussian2)] = c2 + ops[kind_slot(OperatorKind::annihilate2)];
        ops[kind_slot(OperatorKind::gaussian)] =
            ops[kind_slot(OperatorKind::gaussian1)] + ops[kind_slot(OperatorKind::gaussian2)];
        ops[kind_slot(OperatorKind::field)] = ops[kind_slot(OperatorKind::gaussian)] + g;
    }
}

const FockModel::SparseMatrix& FockModel::matrix(OperatorKind kind, int label) const {
    return operators_.at(static_cast<std::size_t>(label))[kind_slot(kind)];
}

FockModel::Vector FockModel::apply(const OperatorToken& token, const Vector& v) const {
    return matrix(token.kind, token.label) * v;
}

void FockModel::require_exact(std::size_t operator_count) const {
    if (operator_count > static_cast<std::size_t>(exactness_bound()))
        throw std::length_error("word of " + std::to_string(operator_count) + " operators exceeds the exactness bound " +
                                std::to_string(exactness_bound()) + " of a depth-" + std::to_string(depth_) +
                                " model");
}

double FockModel::state_moment(int q, std::span<const OperatorToken> word) const {
    require_exact(word.size());
    const std::size_t vacuum = vacuum_index(q);
    for (const auto& token : word)
        if (token.label < 0 || static_cast<std::size_t>(token.label) >= labels_.size())
            throw std::out_of_range("operator label outside the index set");
    Vector v = basis_vector(vacuum);
    for (auto it = word.rbegin(); it != word.rend(); ++it) v = apply(*it, v);
    return v[static_cast<Eigen::Index>(vacuum)];
}

namespace {

int minimal_depth(int m) { return std::max(1, (m + 1) / 2 + 1); }

// <Omega_q, A^m Omega_q>
double vacuum_power(const FockModel& model, const FockModel::SparseMatrix& a, int q, int m) {
    model.require_exact(static_cast<std::size_t>(m));
    const std::size_t vacuum = model.vacuum_index(q);
    FockModel::Vector v = model.basis_vector(vacuum);
    for (int i = 0; i < m; ++i) v = a * v;
    return v[static_cast<Eigen::Index>(vacuum)];
}

// a2 on the range of the given creation operator of the one-label model, a1 elsewhere.
FockModel::SparseMatrix shift_on_range(const FockModel& model, OperatorKind create, double a1, double a2) {
    const auto n = static_cast<Eigen::Index>(model.dimension());
    std::vector<Eigen::Triplet<double>> entries;
    for (std::size_t i = 0; i < model.dimension(); ++i) {
        const BasisWord& w = model.basis_word(i);
        bool in_range = false;
        if (create == OperatorKind::create1)
            in_range = w.kind == BasisWord::Kind::word && w.terminal_e1 && w.length() == 1;
        else
            in_range = w.kind == BasisWord::Kind::word;
        entries.emplace_back(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(i), in_range ? a2 : a1);
    }
    FockModel::SparseMatrix g(n, n);
    g.setFromTriplets(entries.begin(), entries.end());
    return g;
}

}  // namespace

double meixner_moment_fock(const MeixnerParams& p, int m, int depth) {
    p.validate();
    if (p.b1 == 0.0 || p.b2 == 0.0)
        throw std::invalid_argument("full-field route needs b1 > 0 and b2 > 0; use the b2 = 0 or Psi2 routes");
    const FockModel model = FockModel::single(p, depth);
    return vacuum_power(model, model.matrix(OperatorKind::field, 0), 1, m);
}

double meixner_moment_fock(const MeixnerParams& p, int m) { return meixner_moment_fock(p, m, minimal_depth(m)); }

double meixner_moment_fock_beta2_zero(const MeixnerParams& p, int m, int depth) {
    p.validate();
    if (p.b2 != 0.0) throw std::invalid_argument("b2 = 0 route called with b2 != 0");
    const FockModel model = FockModel::single(p, depth);
    const FockModel::SparseMatrix field =
        model.matrix(OperatorKind::gaussian1, 0) + shift_on_range(model, OperatorKind::create1, p.a1, p.a2);
    return vacuum_power(model, field, 1, m);
}

double meixner_moment_fock_psi2(const MeixnerParams& p, int m, int depth) {
    p.validate();
    if (p.b2 <= 0.0) throw std::invalid_argument("Psi2 route needs b2 > 0");
    const FockModel model = FockModel::single(p, depth);
    const FockModel::SparseMatrix field =
        model.matrix(OperatorKind::gaussian2, 0) + shift_on_range(model, OperatorKind::create2, p.a1, p.a2);
    return vacuum_power(model, field, 2, m);
}

MomentTable moments_fock(const MeixnerParams& p, int m_max) {
    p.validate();
    if (m_max < 0) throw std::invalid_argument("m_max must be non-negative");
    const int depth = minimal_depth(m_max);
    MomentTable table;
    table.method = MomentMethod::fock;
    for (int m = 0; m <= m_max; ++m) {
        if (p.b1 > 0.0 && p.b2 > 0.0)
            table.moments.push_back(meixner_moment_fock(p, m, depth));
        else
            table.moments.push_back(meixner_moment_fock_beta2_zero({p.a1, p.a2, p.b1, 0.0}, m, depth));
    }
    return table;
}

double ensemble_moment(const FockModel& model, int q, std::span<const int> labels, bool with_gamma) {
    std::vector<OperatorToken> word;
    word.reserve(labels.size());
    for (int u : labels) word.push_back({with_gamma ? OperatorKind::field : OperatorKind::gaussian, u});
    return model.state_moment(q, word);
}

}  // namespace meixner
