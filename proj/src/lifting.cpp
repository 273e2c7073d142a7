#include "demuskin/lifting.hpp"

#include <algorithm>

namespace demuskin {

const char* tag_name(ObstructionTag t) {
    switch (t) {
        case ObstructionTag::CupNontrivial: return "cup-nontrivial";
        case ObstructionTag::CenterH2Zero: return "center-h2-zero";
        case ObstructionTag::AdH2Zero: return "ad-h2-zero";
        case ObstructionTag::OutsideHypotheses: return "outside-theorem-hypotheses";
    }
    return "?";
}

ObstructionCase classify(const NilpotentSystem& sys_in, const DemuskinPresentation& pres) {
    NilpotentSystem sys = sys_in.m.s == 1 ? sys_in : sys_in.reduced(1);
    RingModulus mp = sys.m;
    std::size_t g = sys.num_generators();
    Matrix d2_ad = d2_matrix(pres, sys.ad_system());
    Matrix d2_z = d2_matrix(pres, sys.z_system());
    ObstructionCase oc{ObstructionTag::OutsideHypotheses};
    oc.dim_h2_ad = sys.m_a - rank_mod_p(d2_ad, mp);
    oc.dim_h2_center = 1 - rank_mod_p(d2_z, mp);
    GramReport gr = gram_matrix(sys, pres);
    oc.mr2 = gr.mr2_verdict;

    bool pairing = false;
    if (oc.dim_h2_center > 0) {
        // H²(center) = C²(center) mod p here, so the pairing is nontrivial on
        // cohomology iff cup is nonzero on the mod-p cocycles
        Matrix zb = nullspace_mod_p(d2_ad, mp);
        Matrix zb_basis(zb.rows(), zb.cols());
        for (std::size_t i = 0; i < zb.rows(); ++i) {
            std::vector<std::uint64_t> row(zb.cols());
            for (std::size_t j = 0; j < zb.cols(); ++j) row[j] = zb(i, j);
            auto conv = to_basis_order(row, g, sys.m_a);
            for (std::size_t j = 0; j < zb.cols(); ++j) zb_basis(i, j) = conv[j];
        }
        Matrix w = mat_mul(zb_basis, mat_mul(gr.gram, transpose(zb_basis), mp), mp);
        pairing = !w.is_zero();
    }
    oc.pairing_nontrivial = pairing;

    if (pairing)
        oc.tag = ObstructionTag::CupNontrivial;
    else if (oc.dim_h2_center == 0)
        oc.tag = ObstructionTag::CenterH2Zero;
    else if (oc.dim_h2_ad == 0)
        oc.tag = ObstructionTag::AdH2Zero;
    else
        oc.tag = ObstructionTag::OutsideHypotheses;
    return oc;
}

namespace {

// Non-isotropic direction: a precision-t cocycle w with Q(w̄) a unit mod p.
// Canonical choice: first kernel generator in order, then pairwise sums,
// then seeded random combinations.
std::optional<Cochain1> find_nonisotropic(const NilpotentSystem& sys_t,
                                          const DemuskinPresentation& pres,
                                          const KernelData& kd, std::uint64_t seed) {
    const RingModulus& mt = sys_t.m;
    std::size_t g = sys_t.num_generators();
    NilpotentSystem sys_p = mt.s == 1 ? sys_t : sys_t.reduced(1);
    auto isotropic = [&](const Cochain1& w) {
        Cochain1 wbar = cochain_reduce(w, sys_p.m);
        return q_form(sys_p, pres, wbar) == 0;
    };
    auto gen_cochain = [&](std::size_t i) {
        std::vector<std::uint64_t> row(kd.gens.cols());
        for (std::size_t j = 0; j < kd.gens.cols(); ++j) row[j] = kd.gens(i, j);
        return cochain_from_ad_flat(row, g, sys_t.m_a);
    };
    for (std::size_t i = 0; i < kd.gens.rows(); ++i) {
        Cochain1 w = gen_cochain(i);
        if (!isotropic(w)) return w;
    }
    for (std::size_t i = 0; i < kd.gens.rows(); ++i)
        for (std::size_t j = i + 1; j < kd.gens.rows(); ++j) {
            Cochain1 w = cochain_add(gen_cochain(i), gen_cochain(j), sys_t);
            if (!isotropic(w)) return w;
        }
    Rng rng(seed ^ 0x6e6f6e69736fULL);
    for (int tries = 0; tries < 200; ++tries) {
        Cochain1 w = Cochain1::zero(g, sys_t.m_a);
        for (std::size_t i = 0; i < kd.gens.rows(); ++i) {
            std::uint64_t c = rng.residue(mt);
            if (c == 0) continue;
            w = cochain_add(w, cochain_scale(gen_cochain(i), c, sys_t), sys_t);
        }
        if (!w.is_zero() && !isotropic(w)) return w;
    }
    return std::nullopt;
}

std::uint64_t pow_u64(std::uint64_t b, std::uint32_t e) {
    std::uint64_t r = 1;
    for (std::uint32_t i = 0; i < e; ++i) r *= b;
    return r;
}

}  // namespace

std::vector<std::uint64_t> quadratic_roots_positive_valuation(std::uint64_t a, std::uint64_t b,
                                                              std::uint64_t c,
                                                              const RingModulus& m,
                                                              std::size_t cap) {
    auto f = [&](std::uint64_t lam) {
        return mod_add(a, mod_add(mod_mul(b, lam, m), mod_mul(c, mod_mul(lam, lam, m), m), m), m);
    };
    if (val_p(a, m) < 1) return {};
    std::vector<std::uint64_t> level = {0};  // roots mod p^1 with positive valuation
    for (std::uint32_t j = 1; j < m.s; ++j) {
        std::uint64_t pj = pow_u64(m.p, j);
        std::uint64_t pj1 = pj * m.p;
        std::vector<std::uint64_t> next;
        for (auto lam : level)
            for (std::uint64_t d = 0; d < m.p; ++d) {
                std::uint64_t cand = lam + d * pj;
                if (f(cand) % pj1 == 0) {
                    next.push_back(cand);
                    if (next.size() > cap) return {};  // degenerate: refuse to enumerate
                }
            }
        if (next.empty()) return {};
        level = std::move(next);
    }
    std::sort(level.begin(), level.end());
    std::vector<std::uint64_t> roots;
    for (auto lam : level)
        if (f(lam) == 0) roots.push_back(lam);
    return roots;
}

LiftState initial_state(const NilpotentSystem& sys, const DemuskinPresentation& pres,
                        const Cochain1& mod_p_cocycle) {
    NilpotentSystem sys_p = sys.reduced(1);
    Cochain1 cbar = cochain_reduce(mod_p_cocycle, sys_p.m);
    LieValue cert = d2_nilpotent(sys_p, pres, cbar);
    if (!cert.is_zero())
        throw std::invalid_argument("initial_state: input is not a mod-p cocycle");
    LiftState st;
    st.precision_reached = 1;
    st.cocycle = cbar;  // canonical residue lift into the working modulus
    st.certificate = cert;
    return st;
}

LiftResult lift_step(const NilpotentSystem& sys, const DemuskinPresentation& pres,
                     const LiftState& state, std::uint64_t seed) {
    const RingModulus& m = sys.m;
    std::uint32_t k = state.precision_reached;
    if (k < 1 || k >= m.s)
        throw std::invalid_argument("lift_step: target precision exceeds the working modulus");
    std::uint32_t t = k + 1;
    RingModulus mt = m.reduced(t);
    RingModulus mp = m.reduced(1);
    NilpotentSystem sys_t = sys.reduced(t);
    NilpotentSystem sys_p = sys.reduced(1);
    std::size_t g = sys.num_generators();
    std::size_t N = sys.m_a * g;
    std::uint64_t pk = pow_u64(m.p, k);

    Cochain1 cur = cochain_reduce(state.cocycle, mt);
    LieValue r = d2_nilpotent(sys_t, pres, cur);
    for (auto x : r.ad)
        if (x % pk != 0) throw std::invalid_argument("lift_step: state not certified at its level");
    if (r.z % pk != 0) throw std::invalid_argument("lift_step: state not certified at its level");

    LiftResult out;
    if (r.is_zero()) {
        LiftState st = state;
        st.precision_reached = t;
        st.cocycle = cur;
        st.certificate = r;
        out.state = st;
        return out;
    }

    // residuals one digit above the certified level
    std::vector<std::uint64_t> v_ad(sys.m_a);
    for (std::size_t i = 0; i < sys.m_a; ++i) v_ad[i] = (r.ad[i] / pk) % m.p;
    std::uint64_t v_z = (r.z / pk) % m.p;

    Matrix d2_ad_p = d2_matrix(pres, sys_p.ad_system());
    Matrix d2_z_p = d2_matrix(pres, sys_p.z_system());
    // pairing row: xi -> 2·cup(x̄, xi) as a functional in the generator-major layout
    Cochain1 xbar = cochain_reduce(cur, mp);
    GramReport gr = gram_matrix(sys_p, pres);
    std::vector<std::uint64_t> xb = to_basis_order(ad_flat(xbar), g, sys.m_a);
    std::vector<std::uint64_t> pairing_row_basis(N, 0);
    for (std::size_t j = 0; j < N; ++j) {
        std::uint64_t acc = 0;
        for (std::size_t i = 0; i < N; ++i)
            acc = mod_add(acc, mod_mul(xb[i], gr.gram(i, j), mp), mp);
        pairing_row_basis[j] = mod_mul(2 % mp.q, acc, mp);
    }
    std::vector<std::uint64_t> pairing_row = from_basis_order(pairing_row_basis, g, sys.m_a);

    Matrix joint(sys.m_a + 1, N + g);
    for (std::size_t i = 0; i < sys.m_a; ++i)
        for (std::size_t j = 0; j < N; ++j) joint(i, j) = d2_ad_p(i, j);
    for (std::size_t j = 0; j < N; ++j) joint(sys.m_a, j) = pairing_row[j];
    for (std::size_t j = 0; j < g; ++j) joint(sys.m_a, N + j) = d2_z_p(0, j);
    std::vector<std::uint64_t> rhs(sys.m_a + 1);
    for (std::size_t i = 0; i < sys.m_a; ++i) rhs[i] = mod_neg(v_ad[i], mp);
    rhs[sys.m_a] = mod_neg(v_z, mp);

    SolveResult sr = solve(joint, rhs, mp);
    if (sr.ok) {
        LiftState st = state;
        st.precision_reached = t;
        st.cocycle = cur;
        for (std::size_t i = 0; i < g; ++i) {
            for (std::size_t j = 0; j < sys.m_a; ++j)
                st.cocycle.values[i].ad[j] =
                    mod_add(st.cocycle.values[i].ad[j],
                            mod_mul(pk % mt.q, sr.x[i * sys.m_a + j], mt), mt);
            st.cocycle.values[i].z = mod_add(
                st.cocycle.values[i].z, mod_mul(pk % mt.q, sr.x[N + i], mt), mt);
        }
        st.certificate = d2_nilpotent(sys_t, pres, st.cocycle);
        if (!st.certificate.is_zero())
            throw std::logic_error("lift_step: linear correction failed to certify");
        out.state = st;
        return out;
    }

    // isolate the failing part: the ad equation alone
    SolveResult sr_ad = solve(d2_ad_p, std::vector<std::uint64_t>(rhs.begin(), rhs.begin() + sys.m_a),
                              mp);
    if (!sr_ad.ok) {
        LiftObstruction ob;
        ob.level = t;
        ob.kind = "ad";
        ob.cls = v_ad;
        ob.functional = sr_ad.certificate;
        out.obstruction = ob;
        return out;
    }

    // ad part fixed by the particular solution; repair the center equation by
    // the quadratic adjustment along a non-isotropic cocycle direction
    Cochain1 xfix = cur;
    for (std::size_t i = 0; i < g; ++i)
        for (std::size_t j = 0; j < sys.m_a; ++j)
            xfix.values[i].ad[j] = mod_add(xfix.values[i].ad[j],
                                           mod_mul(pk % mt.q, sr_ad.x[i * sys.m_a + j], mt), mt);

    Matrix d2_ad_t = d2_matrix(pres, sys_t.ad_system());
    KernelData kd = kernel(d2_ad_t, mt);
    // center residual A = Q(x) + d²_z y at precision t
    LieValue after = d2_nilpotent(sys_t, pres, xfix);
    std::uint64_t A = after.z;
    Matrix d2_z_t = d2_matrix(pres, sys_t.z_system());
    SolveResult sz = solve(d2_z_t, {mod_neg(A, mt)}, mt);
    if (sz.ok) {
        LiftState st = state;
        st.precision_reached = t;
        st.cocycle = xfix;
        for (std::size_t i = 0; i < g; ++i)
            st.cocycle.values[i].z = mod_add(st.cocycle.values[i].z, sz.x[i], mt);
        st.certificate = d2_nilpotent(sys_t, pres, st.cocycle);
        if (!st.certificate.is_zero())
            throw std::logic_error("lift_step: center correction failed to certify");
        out.state = st;
        return out;
    }

    std::optional<Cochain1> w = find_nonisotropic(sys_t, pres, kd, seed);
    if (w) {
        // x' = x + λw keeps the mod-p class for val(λ) >= 1 and stays an
        // ad-cocycle at this precision; solve A + 2λ(x∪w) + λ²Q(w) = 0
        Cochain1 wad = *w;
        std::uint64_t B = mod_mul(2 % mt.q, cup(sys_t, pres, ad_only(xfix), wad), mt);
        std::uint64_t C = q_form(sys_t, pres, wad);
        auto roots = quadratic_roots_positive_valuation(A, B, C, mt);
        if (!roots.empty()) {
            LiftState st = state;
            st.used_quadratic = true;
            st.precision_reached = t;
            st.cocycle = xfix;
            Cochain1 adj = cochain_scale(wad, roots.front(), sys_t);
            st.cocycle = cochain_add(st.cocycle, adj, sys_t);
            st.certificate = d2_nilpotent(sys_t, pres, st.cocycle);
            if (!st.certificate.is_zero())
                throw std::logic_error("lift_step: quadratic adjustment failed to certify");
            out.state = st;
            return out;
        }
    }

    LiftObstruction ob;
    ob.level = t;
    ob.kind = w ? "z" : "z-degenerate";
    std::uint32_t va = val_p(A, mt);
    ob.cls = {va >= mt.s ? 0 : (A / pow_u64(m.p, va)) % m.p};
    ob.functional = sz.certificate;
    out.obstruction = ob;
    return out;
}

LiftResult lift_to_precision(const NilpotentSystem& sys, const DemuskinPresentation& pres,
                             const Cochain1& mod_p_cocycle, std::uint32_t target,
                             std::uint64_t seed) {
    if (target < 1 || target > sys.m.s)
        throw std::invalid_argument("lift_to_precision: target out of range");
    LiftState st = initial_state(sys, pres, mod_p_cocycle);
    LiftResult out;
    bool used_quadratic = false;
    while (st.precision_reached < target) {
        NilpotentSystem sys_t = sys.reduced(std::min(sys.m.s, target));
        LiftResult step = lift_step(sys_t, pres, st, seed);
        if (!step.ok()) return step;
        used_quadratic = used_quadratic || step.state->used_quadratic;
        st = *step.state;
        st.used_quadratic = used_quadratic;
    }
    out.state = st;
    return out;
}

}  // namespace demuskin
