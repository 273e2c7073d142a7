#include <doctest.h>

#include "demuskin/lifting.hpp"
#include "demuskin/report.hpp"
#include "demuskin/rng.hpp"
#include "demuskin/unipotent.hpp"

using namespace demuskin;

namespace {

// commuting non-unipotent rig: powers of M0 = [[2,1],[0,1]] as the std
// action of the long-root quotient; det = 2 on the generator x3 makes the
// center differential surjective mod p
NilpotentSystem center_h2_zero_rig(const RingModulus& m) {
    Matrix m0 = Matrix::identity(2);
    m0(0, 0) = 2;
    m0(0, 1) = 1;
    std::vector<Matrix> levi{Matrix::identity(2), Matrix::identity(2), Matrix::identity(2), m0};
    return g2_long_heisenberg_general(levi, m);
}

NilpotentSystem zero_bracket_system(const RingModulus& m, std::size_t generators) {
    std::vector<Matrix> acts(generators, Matrix::identity(2));
    return generic_heisenberg(2, Matrix(2, 2), acts, std::vector<std::uint64_t>(generators, 1), m);
}

}  // namespace

TEST_CASE("classify: short-root with trivial levi is cup-nontrivial") {
    RingModulus m = RingModulus::make(5, 1);
    DemuskinPresentation pres = build_relator(2, 5);
    LeviData triv{m, {0, 0, 0, 0}};
    ObstructionCase oc = classify(g2_short_root(triv), pres);
    CHECK(oc.tag == ObstructionTag::CupNontrivial);
    CHECK(oc.dim_h2_center == 1);
    CHECK(oc.dim_h2_ad == 4);
    CHECK(oc.pairing_nontrivial);
    CHECK(oc.mr2);
}

TEST_CASE("classify: zero bracket with both H2 nonzero is outside the hypotheses") {
    RingModulus m = RingModulus::make(5, 1);
    DemuskinPresentation pres = build_relator(2, 5);
    ObstructionCase oc = classify(zero_bracket_system(m, 4), pres);
    CHECK(oc.tag == ObstructionTag::OutsideHypotheses);
    CHECK(oc.dim_h2_center == 1);
    CHECK(oc.dim_h2_ad == 2);
    CHECK_FALSE(oc.pairing_nontrivial);
}

TEST_CASE("classify: non-unipotent determinant rig kills H2 of the center") {
    RingModulus m = RingModulus::make(5, 1);
    DemuskinPresentation pres = build_relator(2, 5);
    NilpotentSystem sys = center_h2_zero_rig(m);
    // surjectivity certificate: the center differential is nonzero mod p
    Matrix d2_z = d2_matrix(pres, sys.z_system());
    CHECK(rank_mod_p(d2_z, m) == 1);
    ObstructionCase oc = classify(sys, pres);
    CHECK(oc.tag == ObstructionTag::CenterH2Zero);
    CHECK(oc.dim_h2_center == 0);
}

TEST_CASE("lift: zero cocycle lifts to every precision") {
    RingModulus m = RingModulus::make(5, 4);
    DemuskinPresentation pres = build_relator(2, 625);
    NilpotentSystem sys = g2_short_root(LeviData{m, {1, 2, 3, 4}});
    LiftResult lr = lift_to_precision(sys, pres, Cochain1::zero(4, 4), 4);
    REQUIRE(lr.ok());
    CHECK(lr.state->precision_reached == 4);
    CHECK(lr.state->cocycle.is_zero());
    CHECK(lr.state->certificate.is_zero());
}

TEST_CASE("lift: q = p^s short-root instances lift every random mod-p cocycle") {
    RingModulus m = RingModulus::make(5, 4);
    DemuskinPresentation pres = build_relator(2, 625);
    NilpotentSystem sys = g2_short_root(LeviData{m, {1, 2, 3, 4}});
    REQUIRE(mr2_check(sys, pres));
    Rng rng(211);
    for (int t = 0; t < 20; ++t) {
        Cochain1 cbar = random_mod_p_cocycle(sys, pres, rng);
        LiftResult lr = lift_to_precision(sys, pres, cbar, 4, 300 + t);
        REQUIRE(lr.ok());
        // soundness: certified at the reached precision and mod-p faithful
        CHECK(lr.state->precision_reached == 4);
        NilpotentSystem sys4 = sys.reduced(4);
        CHECK(d2_nilpotent(sys4, pres, lr.state->cocycle).is_zero());
        CHECK(cochain_reduce(lr.state->cocycle, m.reduced(1)) ==
              cochain_reduce(cbar, m.reduced(1)));
    }
}

TEST_CASE("lift_step is monotone and sound step by step") {
    RingModulus m = RingModulus::make(5, 3);
    DemuskinPresentation pres = build_relator(2, 125);
    NilpotentSystem sys = g2_short_root(LeviData{m, {2, 1, 4, 3}});
    Rng rng(223);
    for (int t = 0; t < 10; ++t) {
        Cochain1 cbar = random_mod_p_cocycle(sys, pres, rng);
        LiftState st = initial_state(sys, pres, cbar);
        while (st.precision_reached < 3) {
            LiftResult step = lift_step(sys, pres, st, 17);
            REQUIRE(step.ok());
            CHECK(step.state->precision_reached == st.precision_reached + 1);
            NilpotentSystem sys_t = sys.reduced(step.state->precision_reached);
            CHECK(d2_nilpotent(sys_t, pres, step.state->cocycle).is_zero());
            st = *step.state;
        }
    }
}

TEST_CASE("lift: the q-torsion rig produces verified obstructions") {
    // q = p at precision 2 with a trivial levi: the d2 block of x0 is q·I,
    // so a mod-p cocycle lifts iff its x0-component vanishes
    RingModulus m = RingModulus::make(5, 2);
    DemuskinPresentation pres = build_relator(2, 5);
    NilpotentSystem sys = g2_short_root(LeviData{m, {0, 0, 0, 0}});
    Rng rng(227);
    int obstructed = 0, lifted = 0;
    for (int t = 0; t < 60; ++t) {
        Cochain1 cbar = random_mod_p_cocycle(sys, pres, rng);
        LiftResult lr = lift_to_precision(sys, pres, cbar, 2, 400 + t);
        bool x0_zero = true;
        for (auto v : cbar.values[0].ad) x0_zero = x0_zero && v % 5 == 0;
        if (lr.ok()) {
            ++lifted;
            CHECK(x0_zero);
        } else {
            ++obstructed;
            CHECK_FALSE(x0_zero);
            CHECK(lr.obstruction->level == 2);
            CHECK(lr.obstruction->kind == "ad");
            // the class is exactly the x0 ad-component mod p
            REQUIRE(lr.obstruction->cls.size() == 4);
            for (std::size_t j = 0; j < 4; ++j)
                CHECK(lr.obstruction->cls[j] == cbar.values[0].ad[j] % 5);
            // brute force over a 6-dimensional correction subspace: no
            // correction X + p·δ becomes a precision-2 cocycle
            Matrix m2 = d2_matrix(pres, sys.ad_system());
            std::vector<std::uint64_t> x = ad_flat(cochain_reduce(cbar, m.reduced(1)));
            bool any_lift = false;
            std::vector<std::size_t> dirs = {0, 1, 2, 3, 4, 9};  // x0 block + two others
            std::vector<std::uint64_t> delta(16, 0);
            for (std::uint64_t code = 0; code < 15625 && !any_lift; ++code) {
                std::uint64_t c = code;
                for (auto d : dirs) {
                    delta[d] = c % 5;
                    c /= 5;
                }
                std::vector<std::uint64_t> cand(16);
                for (std::size_t j = 0; j < 16; ++j)
                    cand[j] = mod_add(x[j], mod_mul(5, delta[j], m), m);
                bool zero = true;
                for (auto v : mat_apply(m2, cand, m)) zero = zero && v == 0;
                any_lift = zero;
            }
            CHECK_FALSE(any_lift);
        }
    }
    CHECK(obstructed > 0);
    CHECK(lifted + obstructed == 60);
}

TEST_CASE("center-h2-zero systems never need the quadratic adjustment") {
    RingModulus m = RingModulus::make(5, 3);
    DemuskinPresentation pres = build_relator(2, 5);
    NilpotentSystem sys = center_h2_zero_rig(m);
    REQUIRE(classify(sys, pres).tag == ObstructionTag::CenterH2Zero);
    Rng rng(229);
    int lifted = 0;
    for (int t = 0; t < 25; ++t) {
        Cochain1 cbar = random_mod_p_cocycle(sys, pres, rng);
        LiftResult lr = lift_to_precision(sys, pres, cbar, 3, 500 + t);
        if (lr.ok()) {
            ++lifted;
            CHECK_FALSE(lr.state->used_quadratic);
        }
    }
    CHECK(lifted > 0);
}

TEST_CASE("zero bracket with trivial actions: everything lifts freely") {
    RingModulus m = RingModulus::make(5, 3);
    DemuskinPresentation pres = build_relator(2, 125);  // q = p^s kills the x0 block
    NilpotentSystem sys = zero_bracket_system(m, 4);
    Rng rng(233);
    for (int t = 0; t < 15; ++t) {
        Cochain1 cbar = random_mod_p_cocycle(sys, pres, rng);
        LiftResult lr = lift_to_precision(sys, pres, cbar, 3, 600 + t);
        REQUIRE(lr.ok());
        CHECK_FALSE(lr.state->used_quadratic);
    }
}

TEST_CASE("quadratic roots of positive valuation") {
    RingModulus m = RingModulus::make(5, 4);
    // f(x) = 5 + x + 0x^2 has root x = -5 + O(25) by Hensel
    auto roots = quadratic_roots_positive_valuation(5, 1, 0, m);
    REQUIRE(!roots.empty());
    for (auto r : roots) {
        CHECK(r % 5 == 0);
        CHECK(mod_add(5, r, m) == 0);
    }
    // f with no roots of positive valuation: 5 + 25x^2 = 0 needs val -1/2
    CHECK(quadratic_roots_positive_valuation(5, 0, 25, m).empty());
    // unit constant term: no roots at all with val >= 1
    CHECK(quadratic_roots_positive_valuation(1, 1, 1, m).empty());
    // generic quadratic with unit B: root exists iff A has positive valuation
    Rng rng(239);
    UnipotentModel model = g2_short_model(m);
    for (int t = 0; t < 40; ++t) {
        std::uint64_t a = mod_mul(5, rng.residue(m), m);
        std::uint64_t b = rng.unit(m);
        std::uint64_t c = rng.residue(m);
        auto rs = quadratic_roots_positive_valuation(a, b, c, m);
        REQUIRE(!rs.empty());
        for (auto r : rs)
            CHECK(mod_add(a, mod_add(mod_mul(b, r, m), mod_mul(c, mod_mul(r, r, m), m), m), m) ==
                  0);
    }
    (void)model;
}

TEST_CASE("the quadratic adjustment path engages on radical-direction cocycles") {
    // trivial levi, q = p^s: d2_ad = 0, so every ad cochain is a cocycle and
    // the pairing row is the only constraint; a self-isotropic x with
    // cup(x, ·) = 0 on a chosen support forces the lambda path at some level
    RingModulus m = RingModulus::make(5, 2);
    DemuskinPresentation pres = build_relator(2, 25);
    NilpotentSystem sys = g2_short_root(LeviData{m, {0, 0, 0, 0}});
    // x = x0*E0: Q(x) = 0 (no pair partner), and cup(x, y) = B(E0, y(x1))/2
    Cochain1 x = Cochain1::zero(4, 4);
    x.values[0].ad[0] = 1;
    // y chosen so that Q(x) + d2_z(y) has a nonzero level-2 residual: with
    // d2_z = (25, 0, 0, 0) = 0 mod 25 and Q(x) = 0 the pair is already exact
    LiftResult lr = lift_to_precision(sys, pres, x, 2, 7);
    REQUIRE(lr.ok());
    // force a z-residual: seed y with a value whose d2_z image cannot cancel
    // (d2_z = 0 here), but Q(x') != 0 after a level-1 ad perturbation; build
    // the state by hand at precision 1 with a doctored working cocycle
    LiftState st = initial_state(sys, pres, x);
    st.cocycle.values[0].ad[0] = 1;
    st.cocycle.values[1].ad[3] = 5;  // Q picks up 2*cup(x, 5*e) = 5*B(E0,E3) != 0 mod 25
    NilpotentSystem sys2 = sys.reduced(2);
    LieValue r = d2_nilpotent(sys2, pres, st.cocycle);
    REQUIRE(r.z % 5 == 0);
    REQUIRE(r.z != 0);
    LiftResult step = lift_step(sys, pres, st, 11);
    REQUIRE(step.ok());
    CHECK(step.state->precision_reached == 2);
    CHECK(d2_nilpotent(sys2, pres, step.state->cocycle).is_zero());
    CHECK(step.state->used_quadratic);
}

TEST_CASE("crossed homomorphism: certified cocycles define relator-killing maps") {
    RingModulus m = RingModulus::make(5, 2);
    DemuskinPresentation pres = build_relator(2, 25);
    std::vector<std::uint64_t> l{1, 2, 3, 4};
    NilpotentSystem sys = g2_short_root(LeviData{m, l});
    UnipotentModel model = g2_short_model(m);
    Rng rng(241);
    for (int t = 0; t < 10; ++t) {
        Cochain1 c = random_mod_p_cocycle(sys, pres, rng);
        LiftResult lr = lift_to_precision(sys, pres, c, 2, 800 + t);
        REQUIRE(lr.ok());
        // evaluate the relator through x_i -> (c(x_i), l_i) in U ⋊ L
        GroupElement acc = model.identity();
        for (auto& [g, e] : pres.relator.runs()) {
            GroupElement letter{l[static_cast<std::size_t>(g)],
                                lr.state->cocycle.values[static_cast<std::size_t>(g)]};
            int steps = e < 0 ? -e : e;
            for (int k = 0; k < steps; ++k)
                acc = semidirect_multiply(model, acc,
                                          e < 0 ? semidirect_inverse(model, letter) : letter);
        }
        CHECK(acc.u.is_zero());
        CHECK(acc.levi_l == mod_mul(pres.q % m.q, l[0], m));  // q·l0 = 0 at this precision
        CHECK(acc.levi_l == 0);
    }
}
