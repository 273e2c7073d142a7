#include <doctest.h>

#include "demuskin/coeff.hpp"
#include "demuskin/free_group.hpp"
#include "demuskin/rng.hpp"

using namespace demuskin;

namespace {

Word random_word(Rng& rng, int generators, std::size_t max_len) {
    Word w;
    std::size_t len = rng.below(max_len + 1);
    for (std::size_t i = 0; i < len; ++i)
        w.append(static_cast<int>(rng.below(generators)), rng.below(2) ? 1 : -1);
    return w;
}

std::vector<Matrix> random_unipotent_actions(Rng& rng, std::size_t count, std::size_t dim,
                                             const RingModulus& m) {
    std::vector<Matrix> acts;
    for (std::size_t g = 0; g < count; ++g) {
        Matrix a = Matrix::identity(dim);
        for (std::size_t i = 0; i < dim; ++i)
            for (std::size_t j = i + 1; j < dim; ++j) a(i, j) = rng.residue(m);
        acts.push_back(a);
    }
    return acts;
}

}  // namespace

TEST_CASE("words reduce freely and multiply") {
    Word a = Word::generator(0) * Word::generator(0).inverse();
    CHECK(a.empty());
    Word b = Word::generator(1, 3) * Word::generator(1, -3);
    CHECK(b.empty());
    Word c = Word::generator(0, 2) * Word::generator(1) * Word::generator(1, -1) *
             Word::generator(0, -1);
    CHECK(c == Word::generator(0));
    CHECK((c * c.inverse()).empty());
}

TEST_CASE("relator shape and length") {
    DemuskinPresentation pres = build_relator(2, 5);
    CHECK(pres.num_generators() == 4);
    // x0^5 x0^-1 x1^-1 x0 x1 x2^-1 x3^-1 x2 x3
    Word expect = Word::generator(0, 5) * commutator(Word::generator(0), Word::generator(1)) *
                  commutator(Word::generator(2), Word::generator(3));
    CHECK(pres.relator == expect);
    CHECK(pres.relator.letter_length() == 5 + 4 * 2 - 2);  // x0^5 * x0^-1 merges

    DemuskinPresentation p25 = build_relator(2, 25);
    CHECK(p25.relator.runs().front() == std::pair<int, int>{0, 24});

    DemuskinPresentation p47 = build_relator(4, 7);
    CHECK(p47.num_generators() == 6);

    CHECK_THROWS_AS(build_relator(3, 5), std::invalid_argument);
    CHECK_THROWS_AS(build_relator(2, 6), std::invalid_argument);
    CHECK_THROWS_AS(build_relator(2, 1), std::invalid_argument);
}

TEST_CASE("fox derivatives of the relator match the published list") {
    DemuskinPresentation pres = build_relator(2, 5);
    // ∂R/∂x0 = 1 + x0 + x0^2 + x0^3 + x0^4 x1^-1
    GroupRingElt d0 = fox_derivative(pres.relator, 0);
    GroupRingElt expect0;
    for (int k = 0; k < 4; ++k) expect0.add(Word::generator(0, k), 1);
    expect0.add(Word::generator(0, 4) * Word::generator(1, -1), 1);
    CHECK(d0 == expect0);

    // ∂R/∂x1 = x0^{q-1} x1^-1 (x0 - 1)
    GroupRingElt d1 = fox_derivative(pres.relator, 1);
    GroupRingElt expect1;
    Word pre = Word::generator(0, 4) * Word::generator(1, -1);
    expect1.add(pre * Word::generator(0), 1);
    expect1.add(pre, -1);
    CHECK(d1 == expect1);

    // ∂R/∂x3 = x0^q (x0,x1) x2^-1 x3^-1 (x2 - 1)
    GroupRingElt d3 = fox_derivative(pres.relator, 3);
    Word pre3 = Word::generator(0, 5) * commutator(Word::generator(0), Word::generator(1)) *
                Word::generator(2, -1) * Word::generator(3, -1);
    GroupRingElt expect3;
    expect3.add(pre3 * Word::generator(2), 1);
    expect3.add(pre3, -1);
    CHECK(d3 == expect3);

    // ∂R/∂x2: literal Fox value x0^q (x0,x1) x2^-1 (x3^-1 - 1)
    GroupRingElt d2 = fox_derivative(pres.relator, 2);
    Word pre2 = Word::generator(0, 5) * commutator(Word::generator(0), Word::generator(1)) *
                Word::generator(2, -1);
    GroupRingElt expect2;
    expect2.add(pre2 * Word::generator(3, -1), 1);
    expect2.add(pre2, -1);
    CHECK(d2 == expect2);

    CHECK(fox_derivative(Word::generator(2), 0).is_zero());
}

TEST_CASE("fox product rule on random pairs") {
    Rng rng(23);
    for (int trial = 0; trial < 50; ++trial) {
        Word u = random_word(rng, 4, 8);
        Word v = random_word(rng, 4, 8);
        for (int i = 0; i < 4; ++i) {
            GroupRingElt lhs = fox_derivative(u * v, i);
            GroupRingElt rhs = fox_derivative(u, i) + u * fox_derivative(v, i);
            CHECK(lhs == rhs);
        }
    }
}

TEST_CASE("evaluation: trivial actions") {
    RingModulus m = RingModulus::make(5, 1);
    std::vector<Matrix> triv(4, Matrix::identity(1));
    DemuskinPresentation pres = build_relator(2, 5);

    GroupRingElt e = GroupRingElt::one() - GroupRingElt(Word::generator(0));
    CHECK(evaluate(e, triv, m, 1).is_zero());

    // ∂R/∂x0 evaluates to q = 0 mod p
    CHECK(evaluate(fox_derivative(pres.relator, 0), triv, m, 1).is_zero());
    // ∂R/∂x1 evaluates to 0 exactly (the factor x0 - 1 dies)
    RingModulus m2 = RingModulus::make(5, 3);
    std::vector<Matrix> triv2(4, Matrix::identity(1));
    CHECK(evaluate(fox_derivative(pres.relator, 1), triv2, m2, 1).is_zero());
    // at higher precision ∂R/∂x0 evaluates to q
    Matrix q0 = evaluate(fox_derivative(pres.relator, 0), triv2, m2, 1);
    CHECK(q0(0, 0) == 5);
}

TEST_CASE("fundamental Fox identity for random words and unipotent actions") {
    Rng rng(29);
    for (std::uint64_t p : {5ull, 7ull}) {
        RingModulus m = RingModulus::make(p, 2);
        for (int trial = 0; trial < 40; ++trial) {
            std::size_t dim = 2 + rng.below(2);
            auto acts = random_unipotent_actions(rng, 4, dim, m);
            Word w = random_word(rng, 4, 12);
            Matrix lhs = mat_sub(evaluate_word(w, acts, m), Matrix::identity(dim), m);
            Matrix rhs(dim, dim);
            for (int i = 0; i < 4; ++i) {
                Matrix di = evaluate(fox_derivative(w, i), acts, m, dim);
                Matrix xi = mat_sub(acts[i], Matrix::identity(dim), m);
                rhs = mat_add(rhs, mat_mul(di, xi, m), m);
            }
            CHECK(lhs == rhs);
        }
    }
}

TEST_CASE("free reduction does not change derivative evaluations") {
    Rng rng(31);
    RingModulus m = RingModulus::make(5, 2);
    auto acts = random_unipotent_actions(rng, 3, 2, m);
    for (int trial = 0; trial < 20; ++trial) {
        Word w = random_word(rng, 3, 6);
        // insert cancelling pairs; Word reduces eagerly so build the product
        Word noisy = w * Word::generator(1) * Word::generator(1, -1);
        for (int i = 0; i < 3; ++i)
            CHECK(evaluate(fox_derivative(noisy, i), acts, m, 2) ==
                  evaluate(fox_derivative(w, i), acts, m, 2));
    }
}
