#include <doctest.h>

#include <cmath>
#include <vector>

#include "meixner/cfree.hpp"

using namespace meixner;

namespace {

FockModel two_labels(const MeixnerParams& s, const MeixnerParams& u, int depth,
                     GammaAction gamma = GammaAction::label_projection) {
    return FockModel({"s", "u"}, depth, {s, u}, gamma);
}

}  // namespace

TEST_CASE("centering") {
    const FockModel centered = FockModel::single({0.0, 0.0, 1.0, 2.0}, 4);
    const AlgebraElement y{0, {0.0, 1.0}};
    CHECK(center(y, centered, 1).coeffs == y.coeffs);
    CHECK(center(y, centered, 2).coeffs == y.coeffs);

    // y^2 - b1 and y^2 - b2.
    const AlgebraElement y2{0, {0.0, 0.0, 1.0}};
    CHECK(center(y2, centered, 1).coeffs[0] == doctest::Approx(-1.0).epsilon(1e-14));
    CHECK(center(y2, centered, 2).coeffs[0] == doctest::Approx(-2.0).epsilon(1e-14));

    const FockModel shifted = FockModel::single({0.7, -0.3, 1.5, 0.5}, 5);
    const AlgebraElement e{0, {0.2, -1.0, 0.5, 0.25}};
    for (int q : {1, 2}) {
        const AlgebraElement c = center(e, shifted, q);
        CHECK(std::abs(expectation(c, shifted, q)) <= 1e-12);
        // Idempotent.
        const AlgebraElement cc = center(c, shifted, q);
        for (std::size_t k = 0; k < c.coeffs.size(); ++k) CHECK(cc.coeffs[k] == doctest::Approx(c.coeffs[k]));
    }
    // y - a1 is Psi_1-centered.
    CHECK(std::abs(expectation({0, {-0.7, 1.0}}, shifted, 1)) <= 1e-15);
}

TEST_CASE("element validation") {
    const FockModel m = FockModel::single({0.0, 0.0, 1.0, 1.0}, 4);
    CHECK_THROWS_AS(expectation({1, {1.0}}, m, 1), std::invalid_argument);
    CHECK_THROWS_AS(expectation({0, {}}, m, 1), std::invalid_argument);
    CHECK_THROWS_AS(expectation({0, std::vector<double>(8, 1.0)}, m, 1), std::invalid_argument);
    CHECK_THROWS_AS(expectation({0, {1.0, NAN}}, m, 1), std::invalid_argument);
    // Degree 6 needs depth 4.
    CHECK_NOTHROW(expectation({0, std::vector<double>(7, 1.0)}, m, 1));
    const FockModel shallow = FockModel::single({0.0, 0.0, 1.0, 1.0}, 3);
    CHECK_THROWS_AS(expectation({0, std::vector<double>(7, 1.0)}, shallow, 1), std::length_error);
}

TEST_CASE("product expectation agrees with operator words") {
    const FockModel m = two_labels({0.3, -0.2, 1.0, 2.0}, {-0.5, 0.4, 1.5, 0.5}, 4);
    const std::vector<AlgebraElement> word{{0, {0.0, 1.0}}, {1, {0.0, 0.0, 1.0}}, {0, {0.0, 1.0}}};
    const std::vector<int> labels{0, 1, 1, 0};
    for (int q : {1, 2})
        CHECK(product_expectation(word, m, q) == doctest::Approx(ensemble_moment(m, q, labels, true)).epsilon(1e-13));
}

TEST_CASE("alternation is required") {
    const std::vector<int> ok{0, 1, 0}, bad{0, 0, 1}, empty{};
    CHECK_NOTHROW(require_alternating(ok));
    CHECK_THROWS_AS(require_alternating(bad), std::invalid_argument);
    CHECK_THROWS_AS(require_alternating(empty), std::invalid_argument);
    const FockModel m = two_labels({0, 0, 1, 2}, {0, 0, 1, 2}, 4);
    const std::vector<int> deg{1, 1, 1};
    CHECK_THROWS_AS(kernel_property_test(m, bad, deg, 1, 3), std::invalid_argument);
    const std::vector<int> short_deg{1, 1};
    CHECK_THROWS_AS(kernel_property_test(m, ok, short_deg, 1, 3), std::invalid_argument);
}

TEST_CASE("length one: Psi_1-centered element has zero expectation") {
    const FockModel m = FockModel::single({0.8, -1.0, 2.0, 0.5}, 3);
    const std::vector<AlgebraElement> one{{0, {-0.8, 1.0}}};
    CHECK(std::abs(product_expectation(one, m, 1)) <= 1e-15);
    const std::vector<int> labels{0};
    const std::vector<int> degrees{3};
    CHECK(kernel_property_test(m, labels, degrees, 5, 50).max_abs <= 1e-12);
}

TEST_CASE("kernel property holds exactly in the Fock model") {
    const std::vector<std::pair<MeixnerParams, MeixnerParams>> points{
        {{0.0, 0.0, 1.0, 2.0}, {0.0, 0.0, 1.0, 2.0}},
        {{0.5, -0.5, 1.0, 1.0}, {-0.3, 0.8, 2.0, 0.5}},
        {{1.0, 2.0, 0.5, 3.0}, {0.2, 0.2, 1.5, 1.5}},
        {{-1.0, 0.0, 2.0, 1.0}, {0.0, -1.5, 0.7, 2.5}},
        {{0.3, 0.6, 2.5, 0.2}, {1.2, -0.4, 0.4, 1.1}},
    };
    const std::vector<std::vector<int>> words{{0, 1, 0}, {1, 0}, {0, 1, 0, 1}, {1, 0, 1, 0, 1}};
    for (const auto& [ps, pu] : points) {
        for (const auto& w : words) {
            const std::vector<int> degrees(w.size(), w.size() == 5 ? 2 : 3);
            int total = 0;
            for (int d : degrees) total += d;
            const FockModel m = two_labels(ps, pu, (total + 1) / 2 + 1);
            const KernelReport r = kernel_property_test(m, w, degrees, 17, 60);
            CHECK(r.draws == 60);
            CHECK(r.max_abs <= 1e-9);
        }
    }
}

TEST_CASE("the kernel test has power") {
    const FockModel m = two_labels({0, 0, 1, 2}, {0, 0, 1, 2}, 4);
    const std::vector<int> labels{0, 1, 0};
    const std::vector<int> degrees{1, 2, 1};
    // Wrong (Psi_1) centering of the inner factor is not annihilated.
    const KernelReport wrong = kernel_property_test(m, labels, degrees, 3, 100, Centering::psi1);
    CHECK(wrong.max_abs > 0.1);
    const std::vector<AlgebraElement> witness{{0, {0, 1}}, {1, {0, 0, 1}}, {0, {0, 1}}};
    CHECK(centered_product(witness, m, Centering::psi1) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(std::abs(centered_product(witness, m, Centering::conditional)) <= 1e-12);
}

TEST_CASE("level-diagonal shifts break the kernel property") {
    // With a1 != a2, Psi_1(y(s) (y(u) - a1(u)) y(s)) = b1(s) (a2(u) - a1(u)).
    const MeixnerParams s{0.0, 0.0, 1.5, 1.0}, u{0.5, -0.5, 1.0, 2.0};
    const std::vector<AlgebraElement> word{{0, {0, 1}}, {1, {0, 1}}, {0, {0, 1}}};
    const FockModel projection = two_labels(s, u, 3);
    const FockModel level = two_labels(s, u, 3, GammaAction::level_diagonal);
    CHECK(std::abs(centered_product(word, projection)) <= 1e-13);
    CHECK(centered_product(word, level) == doctest::Approx(1.5 * (-0.5 - 0.5)).epsilon(1e-13));
}

TEST_CASE("freeness witness") {
    for (auto [b1, b2, expected] : {std::tuple{1.0, 2.0, 1.0}, std::tuple{1.0, 3.0, 2.0}, std::tuple{2.0, 0.5, -3.0}}) {
        const MeixnerParams p{0, 0, b1, b2};
        const FockModel m = two_labels(p, p, 4);
        const WitnessValues v = freeness_witness(m, 0, 1);
        CHECK(v.w2 == doctest::Approx(expected).epsilon(1e-12));
        CHECK(std::abs(v.w3) <= 1e-10);

        // Brute force: Psi_1(y(s) y(u) y(u) y(s)) - b1 Psi_1(y(s) y(s)).
        const std::vector<int> ssuu{0, 1, 1, 0}, ss{0, 0};
        CHECK(ensemble_moment(m, 1, ssuu, true) - b1 * ensemble_moment(m, 1, ss, true) ==
              doctest::Approx(v.w2).epsilon(1e-12));
    }
    // Boundary b1 = b2: the witness vanishes.
    const MeixnerParams equal{0, 0, 2, 2};
    const FockModel m = two_labels(equal, equal, 4);
    const std::vector<int> ssuu{0, 1, 1, 0}, ss{0, 0};
    CHECK(std::abs(ensemble_moment(m, 1, ssuu, true) - 2.0 * ensemble_moment(m, 1, ss, true)) <= 1e-12);
    CHECK_THROWS_AS(freeness_witness(m, 0, 1), std::invalid_argument);
    const FockModel shifted = two_labels({1, 0, 1, 2}, {1, 0, 1, 2}, 4);
    CHECK_THROWS_AS(freeness_witness(shifted, 0, 1), std::invalid_argument);
}

TEST_CASE("matrix centered products") {
    const MatrixLabel l{"s", 0.0, 1.0, 2.0};
    MatrixLabel lu = l;
    lu.name = "u";
    const EnsembleSpec spec{{128, 11}, {l, lu}, 60, 0};
    const std::vector<AlgebraElement> witness{{0, {0, 1}}, {1, {0, 0, 1}}, {0, {0, 1}}};
    const Estimate cond = matrix_cfree_test(spec, witness, 3);
    CHECK(std::abs(cond.mean) <= std::max(3 * cond.standard_error, 0.05));
    const Estimate wrong = matrix_cfree_test(spec, witness, 3, Centering::psi1);
    CHECK(wrong.mean == doctest::Approx(1.0).epsilon(0.15));
    CHECK(matrix_cfree_test(spec, witness, 3, Centering::psi1, {1}).mean ==
          matrix_cfree_test(spec, witness, 3, Centering::psi1, {3}).mean);

    const std::vector<AlgebraElement> repeated{{0, {0, 1}}, {0, {0, 1}}};
    CHECK_THROWS_AS(matrix_cfree_test(spec, repeated, 1), std::invalid_argument);

    // k = 1: tau_1(M - tau_1(M)) is zero trial by trial.
    const std::vector<AlgebraElement> one{{1, {0.3, 1.0}}};
    CHECK(std::abs(matrix_cfree_test(spec, one, 4).mean) <= 1e-12);
}
