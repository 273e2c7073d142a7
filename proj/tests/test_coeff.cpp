#include <doctest.h>

#include "demuskin/coeff.hpp"
#include "demuskin/linalg.hpp"
#include "demuskin/rng.hpp"

using namespace demuskin;

TEST_CASE("sym_power_twist: trivial levi gives identity actions") {
    RingModulus m = RingModulus::make(5, 1);
    LeviData levi{m, {0, 0, 0, 0}};
    AbelianSystem s = sym_power_twist(levi, 3, -2);
    CHECK(s.rank == 4);
    for (auto& a : s.actions) CHECK(a.is_identity());
}

TEST_CASE("sym_power_twist: monomial-basis binomial action for l = 1") {
    RingModulus m = RingModulus::make(7, 1);
    LeviData levi{m, {1}};
    AbelianSystem s = sym_power_twist(levi, 3, 0);
    const Matrix& a = s.actions[0];
    // e1^2 e2 -> e1^3 + e1^2 e2
    CHECK(a(0, 1) == 1);
    CHECK(a(1, 1) == 1);
    CHECK(a(2, 1) == 0);
    // e2^3 -> e1^3 + 3 e1^2 e2 + 3 e1 e2^2 + e2^3
    CHECK(a(0, 3) == 1);
    CHECK(a(1, 3) == 3);
    CHECK(a(2, 3) == 3);
    CHECK(a(3, 3) == 1);
}

TEST_CASE("sym_power_twist: k = 1 returns the Levi matrices") {
    RingModulus m = RingModulus::make(5, 2);
    LeviData levi{m, {2, 7, 0, 1}};
    AbelianSystem s = sym_power_twist(levi, 1, 0);
    for (std::size_t i = 0; i < 4; ++i) CHECK(s.actions[i] == levi.matrix(i));
}

TEST_CASE("sym_power_twist is multiplicative in the Levi parameter") {
    Rng rng(37);
    RingModulus m = RingModulus::make(7, 3);
    for (int trial = 0; trial < 20; ++trial) {
        std::uint64_t a = rng.residue(m), b = rng.residue(m);
        LeviData la{m, {a}}, lb{m, {b}}, lab{m, {mod_add(a, b, m)}};
        Matrix prod = mat_mul(sym_power_twist(la, 3, 0).actions[0],
                              sym_power_twist(lb, 3, 0).actions[0], m);
        CHECK(prod == sym_power_twist(lab, 3, 0).actions[0]);
    }
}

TEST_CASE("g2_short_root: defaults and bracket support") {
    RingModulus m = RingModulus::make(5, 1);
    LeviData levi{m, {0, 0, 0, 0}};
    NilpotentSystem sys = g2_short_root(levi);
    CHECK(sys.m_a == 4);
    CHECK(sys.bracket(0, 3) == mod_of(kG2ShortB03, m));
    CHECK(sys.bracket(1, 2) == mod_of(kG2ShortB12, m));
    for (auto& a : sys.ad_actions) CHECK(a.is_identity());
    // bracket vanishes off the {0,3} and {1,2} pairs
    for (std::size_t i = 0; i < 4; ++i)
        for (std::size_t j = 0; j < 4; ++j) {
            bool support = (i == 0 && j == 3) || (i == 3 && j == 0) || (i == 1 && j == 2) ||
                           (i == 2 && j == 1);
            if (!support) CHECK(sys.bracket(i, j) == 0);
        }
}

TEST_CASE("g2_short_root: equivariance holds for nonzero levi and default constants") {
    RingModulus m = RingModulus::make(5, 2);
    LeviData levi{m, {1, 3, 17, 24}};
    CHECK_NOTHROW(g2_short_root(levi));
    // wrong ratio of constants violates equivariance as soon as some l != 0
    CHECK_THROWS_AS(g2_short_root(levi, 1, 1), std::invalid_argument);
    // degenerate constants are rejected up front
    CHECK_THROWS_AS(g2_short_root(levi, 3, 0), std::invalid_argument);
    // with a trivial levi any unit constants are equivariant
    LeviData triv{m, {0, 0, 0, 0}};
    CHECK_NOTHROW(g2_short_root(triv, 1, 1));
}

TEST_CASE("g2_long_heisenberg: rank-3 Heisenberg data") {
    RingModulus m = RingModulus::make(5, 1);
    LeviData levi{m, {1, 1, 0, 0}};
    NilpotentSystem sys = g2_long_heisenberg(levi);
    CHECK(sys.m_a == 2);
    CHECK(sys.bracket(0, 1) == 1);
    for (std::size_t i = 0; i < 4; ++i) CHECK(sys.ad_actions[i] == levi.matrix(i));
    ValidationReport v = validate_system(sys);
    CHECK(v.ok());
}

TEST_CASE("generic_heisenberg validates and reproduces the builder outputs") {
    RingModulus m = RingModulus::make(7, 1);
    LeviData levi{m, {1, 2, 3, 4}};
    NilpotentSystem ref = g2_short_root(levi);
    NilpotentSystem same = generic_heisenberg(4, ref.bracket, ref.ad_actions, ref.z_actions, m);
    CHECK(same.bracket == ref.bracket);
    CHECK(same.ad_actions == ref.ad_actions);

    // symplectic bracket with trivial actions is valid
    Matrix b(2, 2);
    b(0, 1) = 1;
    b(1, 0) = mod_neg(1, m);
    CHECK_NOTHROW(generic_heisenberg(2, b, {Matrix::identity(2), Matrix::identity(2)}, {1, 1}, m));

    // diagonal bracket entry is rejected
    Matrix bad(2, 2);
    bad(0, 0) = 1;
    CHECK_THROWS_AS(generic_heisenberg(2, bad, {Matrix::identity(2), Matrix::identity(2)}, {1, 1}, m),
                    std::invalid_argument);
}

TEST_CASE("validate_system: trivial, sym3 and non-unipotent cases") {
    RingModulus m = RingModulus::make(5, 1);
    ValidationReport v = validate_system(trivial_system(3, 4, m));
    CHECK(v.ok());

    LeviData levi{m, {1, 2, 3, 4}};
    ValidationReport v2 = validate_system(sym_power_twist(levi, 3, -2));
    CHECK(v2.ok());
    CHECK(v2.generator_order_ok);  // rho(x_i)^p = I mod p, nilpotency degree 4 <= p

    AbelianSystem bad = trivial_system(2, 4, m);
    bad.actions[1](0, 0) = 2;  // diag(2,1): not unipotent
    ValidationReport v3 = validate_system(bad);
    CHECK_FALSE(v3.unitriangularizable);
    CHECK_FALSE(v3.ok());
}

TEST_CASE("validate_system passes on every default builder output") {
    Rng rng(41);
    for (std::uint64_t p : {5ull, 7ull, 11ull}) {
        RingModulus m = RingModulus::make(p, 1);
        for (int trial = 0; trial < 5; ++trial) {
            std::vector<std::uint64_t> l(4);
            for (auto& x : l) x = rng.residue(m);
            LeviData levi{m, l};
            CHECK(validate_system(g2_short_root(levi)).ok());
            CHECK(validate_system(g2_long_heisenberg(levi)).ok());
        }
    }
}

TEST_CASE("equivariance invariant on random levis, exact in Z/p^s") {
    Rng rng(43);
    RingModulus m = RingModulus::make(5, 3);
    for (int trial = 0; trial < 10; ++trial) {
        std::vector<std::uint64_t> l(4);
        for (auto& x : l) x = rng.residue(m);
        NilpotentSystem sys = g2_short_root(LeviData{m, l});
        for (std::size_t g = 0; g < 4; ++g)
            for (int t = 0; t < 5; ++t) {
                std::vector<std::uint64_t> x(4), y(4);
                for (auto& v : x) v = rng.residue(m);
                for (auto& v : y) v = rng.residue(m);
                auto gx = mat_apply(sys.ad_actions[g], x, m);
                auto gy = mat_apply(sys.ad_actions[g], y, m);
                CHECK(sys.bracket_of(gx, gy) ==
                      mod_mul(sys.z_actions[g], sys.bracket_of(x, y), m));
            }
    }
}

TEST_CASE("exhaustive p-group check agrees on small instances") {
    RingModulus m = RingModulus::make(5, 1);
    LeviData levi{m, {1, 2, 0, 3}};
    CHECK(exhaustive_p_group_check(levi.matrices(), m));
    Matrix d = Matrix::identity(2);
    d(0, 0) = 2;
    CHECK_FALSE(exhaustive_p_group_check({d}, m));
}
