#include "demuskin/ld_abelian.hpp"

namespace demuskin {

Matrix d1_matrix(const DemuskinPresentation& pres, const AbelianSystem& sys) {
    std::size_t g = pres.num_generators();
    std::size_t r = sys.rank;
    Matrix d1(g * r, r);
    for (std::size_t i = 0; i < g; ++i) {
        Matrix blk = mat_sub(sys.actions[i], Matrix::identity(r), sys.m);
        for (std::size_t a = 0; a < r; ++a)
            for (std::size_t b = 0; b < r; ++b) d1(i * r + a, b) = blk(a, b);
    }
    return d1;
}

Matrix d2_matrix(const DemuskinPresentation& pres, const AbelianSystem& sys) {
    std::size_t g = pres.num_generators();
    std::size_t r = sys.rank;
    Matrix d2(r, g * r);
    for (std::size_t i = 0; i < g; ++i) {
        GroupRingElt dr = fox_derivative(pres.relator, static_cast<int>(i));
        Matrix blk = evaluate(dr, sys.actions, sys.m, r);
        for (std::size_t a = 0; a < r; ++a)
            for (std::size_t b = 0; b < r; ++b) d2(a, i * r + b) = blk(a, b);
    }
    return d2;
}

AbelianComplex build_complex(const DemuskinPresentation& pres, const AbelianSystem& sys,
                             bool skip_validation) {
    if (sys.num_generators() != static_cast<std::size_t>(pres.num_generators()))
        throw std::invalid_argument("build_complex: generator count mismatch");
    if (!skip_validation) {
        ValidationReport v = validate_system(sys);
        if (!v.actions_invertible || !v.unitriangularizable)
            throw std::invalid_argument("build_complex: system fails validation (" +
                                        v.first_violation + ")");
    }
    Matrix rR = evaluate_word(pres.relator, sys.actions, sys.m);
    if (!rR.is_identity())
        throw std::invalid_argument(
            "build_complex: the relator does not act trivially at this precision; "
            "the three-term complex requires rho(R) = I");
    AbelianComplex cx{pres, sys, d1_matrix(pres, sys), d2_matrix(pres, sys)};
    if (!mat_mul(cx.d2, cx.d1, sys.m).is_zero())
        throw std::logic_error("build_complex: d2*d1 != 0 with rho(R) = I (Fox calculus defect)");
    return cx;
}

CohomologyProfiles cohomology(const AbelianComplex& cx) {
    const RingModulus& m = cx.sys.m;
    CohomologyProfiles out;
    out.h0 = kernel(cx.d1, m).profile;
    out.h2 = cokernel_profile(cx.d2, m);
    out.h1 = subquotient_profile(cx.d2, cx.d1, m);
    return out;
}

std::vector<std::uint64_t> extend_abelian_cochain(const AbelianSystem& sys, const Word& w,
                                                  const std::vector<std::uint64_t>& cochain) {
    const RingModulus& m = sys.m;
    std::size_t r = sys.rank;
    if (cochain.size() != r * sys.num_generators())
        throw std::invalid_argument("extend_abelian_cochain: cochain size mismatch");
    std::vector<std::uint64_t> acc(r, 0);
    Matrix transport = Matrix::identity(r);  // action of the processed prefix
    for (auto& [g, e] : w.runs()) {
        auto gi = static_cast<std::size_t>(g);
        if (gi >= sys.num_generators())
            throw std::invalid_argument("extend_abelian_cochain: generator out of range");
        std::vector<std::uint64_t> cg(cochain.begin() + gi * r, cochain.begin() + (gi + 1) * r);
        int steps = e < 0 ? -e : e;
        Matrix a = sys.actions[gi];
        Matrix ainv;
        std::vector<std::uint64_t> letter = cg;
        if (e < 0) {
            // c(x^-1) = -rho(x)^-1 c(x)
            ainv = mat_inv(a, m);
            letter = mat_apply(ainv, cg, m);
            for (auto& x : letter) x = mod_neg(x, m);
        }
        for (int t = 0; t < steps; ++t) {
            std::vector<std::uint64_t> moved = mat_apply(transport, letter, m);
            for (std::size_t i = 0; i < r; ++i) acc[i] = mod_add(acc[i], moved[i], m);
            transport = mat_mul(transport, e < 0 ? ainv : a, m);
        }
    }
    return acc;
}

TorsionProbeReport h0_torsion_probe(const DemuskinPresentation& pres, const AbelianSystem& sys,
                                    std::uint32_t S) {
    if (S < 2)
        throw std::invalid_argument("h0_torsion_probe: S >= 2 required (the probe is vacuous "
                                    "at field level for unipotent actions)");
    if (sys.m.s < S)
        throw std::invalid_argument("h0_torsion_probe: system precision below S");
    TorsionProbeReport rep{TorsionVerdict::NoFreeFixedVectors, {}};
    for (std::uint32_t t = 1; t <= S; ++t) {
        AbelianSystem red = sys.reduced(t);
        Matrix d1 = d1_matrix(pres, red);
        rep.h0_profiles.push_back(kernel(d1, red.m).profile);
    }
    const ModuleProfile& top = rep.h0_profiles.back();
    rep.verdict = top.max_order_exponent() >= S ? TorsionVerdict::FreeFixedVectorsPresent
                                                : TorsionVerdict::NoFreeFixedVectors;
    return rep;
}

}  // namespace demuskin
