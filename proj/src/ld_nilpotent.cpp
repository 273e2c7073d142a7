#include "demuskin/ld_nilpotent.hpp"

namespace demuskin {

bool LieValue::is_zero() const {
    if (z != 0) return false;
    for (auto x : ad)
        if (x != 0) return false;
    return true;
}

LieValue lie_add(const LieValue& a, const LieValue& b, const NilpotentSystem& sys) {
    LieValue r = a;
    for (std::size_t i = 0; i < r.ad.size(); ++i) r.ad[i] = mod_add(r.ad[i], b.ad[i], sys.m);
    r.z = mod_add(r.z, b.z, sys.m);
    return r;
}

LieValue lie_sub(const LieValue& a, const LieValue& b, const NilpotentSystem& sys) {
    LieValue r = a;
    for (std::size_t i = 0; i < r.ad.size(); ++i) r.ad[i] = mod_sub(r.ad[i], b.ad[i], sys.m);
    r.z = mod_sub(r.z, b.z, sys.m);
    return r;
}

LieValue lie_scale(const LieValue& a, std::uint64_t c, const NilpotentSystem& sys) {
    LieValue r = a;
    for (auto& x : r.ad) x = mod_mul(x, c, sys.m);
    r.z = mod_mul(r.z, c, sys.m);
    return r;
}

LieValue lie_act(const NilpotentSystem& sys, std::size_t g, const LieValue& v, bool inverse) {
    LieValue r;
    if (inverse) {
        r.ad = mat_apply(mat_inv(sys.ad_actions[g], sys.m), v.ad, sys.m);
        r.z = mod_mul(mod_inv(sys.z_actions[g], sys.m), v.z, sys.m);
    } else {
        r.ad = mat_apply(sys.ad_actions[g], v.ad, sys.m);
        r.z = mod_mul(sys.z_actions[g], v.z, sys.m);
    }
    return r;
}

Cochain1 Cochain1::zero(std::size_t generators, std::size_t m_a) {
    Cochain1 c;
    c.values.assign(generators, LieValue::zero(m_a));
    return c;
}

bool Cochain1::is_zero() const {
    for (auto& v : values)
        if (!v.is_zero()) return false;
    return true;
}

bool Cochain1::has_zero_z() const {
    for (auto& v : values)
        if (v.z != 0) return false;
    return true;
}

Cochain1 cochain_add(const Cochain1& a, const Cochain1& b, const NilpotentSystem& sys) {
    Cochain1 r = a;
    for (std::size_t i = 0; i < r.values.size(); ++i)
        r.values[i] = lie_add(r.values[i], b.values[i], sys);
    return r;
}

Cochain1 cochain_scale(const Cochain1& a, std::uint64_t c, const NilpotentSystem& sys) {
    Cochain1 r = a;
    for (auto& v : r.values) v = lie_scale(v, c, sys);
    return r;
}

Cochain1 cochain_reduce(const Cochain1& a, const RingModulus& target) {
    Cochain1 r = a;
    for (auto& v : r.values) {
        for (auto& x : v.ad) x %= target.q;
        v.z %= target.q;
    }
    return r;
}

Cochain1 ad_only(const Cochain1& c) {
    Cochain1 r = c;
    for (auto& v : r.values) v.z = 0;
    return r;
}

std::vector<std::uint64_t> ad_flat(const Cochain1& c) {
    std::vector<std::uint64_t> out;
    for (auto& v : c.values) out.insert(out.end(), v.ad.begin(), v.ad.end());
    return out;
}

Cochain1 cochain_from_ad_flat(const std::vector<std::uint64_t>& v, std::size_t generators,
                              std::size_t m_a) {
    if (v.size() != generators * m_a)
        throw std::invalid_argument("cochain_from_ad_flat: size mismatch");
    Cochain1 c = Cochain1::zero(generators, m_a);
    for (std::size_t i = 0; i < generators; ++i)
        for (std::size_t j = 0; j < m_a; ++j) c.values[i].ad[j] = v[i * m_a + j];
    return c;
}

std::vector<std::uint64_t> z_flat(const Cochain1& c) {
    std::vector<std::uint64_t> out;
    for (auto& v : c.values) out.push_back(v.z);
    return out;
}

std::vector<std::uint64_t> to_basis_order(const std::vector<std::uint64_t>& gen_major,
                                          std::size_t generators, std::size_t m_a) {
    std::vector<std::uint64_t> out(gen_major.size());
    for (std::size_t i = 0; i < generators; ++i)
        for (std::size_t j = 0; j < m_a; ++j) out[j * generators + i] = gen_major[i * m_a + j];
    return out;
}

std::vector<std::uint64_t> from_basis_order(const std::vector<std::uint64_t>& basis_major,
                                            std::size_t generators, std::size_t m_a) {
    std::vector<std::uint64_t> out(basis_major.size());
    for (std::size_t i = 0; i < generators; ++i)
        for (std::size_t j = 0; j < m_a; ++j) out[i * m_a + j] = basis_major[j * generators + i];
    return out;
}

LieValue extend_cochain(const NilpotentSystem& sys, const Cochain1& c, const Word& w) {
    const RingModulus& m = sys.m;
    if (m.p == 2) throw std::invalid_argument("extend_cochain: p must be odd");
    if (c.values.size() != sys.num_generators())
        throw std::invalid_argument("extend_cochain: cochain size mismatch");
    std::uint64_t half = mod_inv(2, m);
    LieValue acc = LieValue::zero(sys.m_a);
    Matrix transport_ad = Matrix::identity(sys.m_a);
    std::uint64_t transport_z = 1;
    for (auto& [g, e] : w.runs()) {
        auto gi = static_cast<std::size_t>(g);
        if (gi >= sys.num_generators())
            throw std::invalid_argument("extend_cochain: generator out of range");
        bool inv = e < 0;
        int steps = inv ? -e : e;
        Matrix a = inv ? mat_inv(sys.ad_actions[gi], m) : sys.ad_actions[gi];
        std::uint64_t az = inv ? mod_inv(sys.z_actions[gi], m) : sys.z_actions[gi];
        LieValue letter = c.values[gi];
        if (inv) {
            // c(x^-1) = -x^-1·c(x); the class-2 correction vanishes
            letter = lie_act(sys, gi, letter, true);
            for (auto& x : letter.ad) x = mod_neg(x, m);
            letter.z = mod_neg(letter.z, m);
        }
        for (int t = 0; t < steps; ++t) {
            LieValue moved;
            moved.ad = mat_apply(transport_ad, letter.ad, m);
            moved.z = mod_mul(transport_z, letter.z, m);
            std::uint64_t br = sys.bracket_of(acc.ad, moved.ad);
            for (std::size_t i = 0; i < sys.m_a; ++i) acc.ad[i] = mod_add(acc.ad[i], moved.ad[i], m);
            acc.z = mod_add(acc.z, mod_add(moved.z, mod_mul(half, br, m), m), m);
            transport_ad = mat_mul(transport_ad, a, m);
            transport_z = mod_mul(transport_z, az, m);
        }
    }
    return acc;
}

LieValue d2_nilpotent(const NilpotentSystem& sys, const DemuskinPresentation& pres,
                      const Cochain1& c) {
    return extend_cochain(sys, c, pres.relator);
}

std::uint64_t q_form(const NilpotentSystem& sys, const DemuskinPresentation& pres,
                     const Cochain1& x) {
    if (!x.has_zero_z())
        throw std::invalid_argument("q_form: expected the canonical lift with zero center parts");
    return d2_nilpotent(sys, pres, x).z;
}

std::uint64_t cup(const NilpotentSystem& sys, const DemuskinPresentation& pres, const Cochain1& x,
                  const Cochain1& y) {
    const RingModulus& m = sys.m;
    std::uint64_t half = mod_inv(2, m);
    std::uint64_t qxy = q_form(sys, pres, cochain_add(x, y, sys));
    std::uint64_t qx = q_form(sys, pres, x);
    std::uint64_t qy = q_form(sys, pres, y);
    return mod_mul(half, mod_sub(qxy, mod_add(qx, qy, m), m), m);
}

GramReport gram_matrix(const NilpotentSystem& sys_in, const DemuskinPresentation& pres) {
    NilpotentSystem sys = sys_in.m.s == 1 ? sys_in : sys_in.reduced(1);
    const RingModulus& m = sys.m;
    if (m.p < 5)
        throw std::invalid_argument("gram_matrix: p >= 5 required");
    std::size_t g = sys.num_generators();
    if (g != static_cast<std::size_t>(pres.num_generators()))
        throw std::invalid_argument("gram_matrix: generator count mismatch");
    std::size_t N = sys.m_a * g;
    std::uint64_t half = mod_inv(2, m);

    auto basis_cochain = [&](std::size_t idx) {
        std::size_t j = idx / g, i = idx % g;
        Cochain1 c = Cochain1::zero(g, sys.m_a);
        c.values[i].ad[j] = 1;
        return c;
    };

    std::vector<std::uint64_t> qdiag(N);
    for (std::size_t a = 0; a < N; ++a) qdiag[a] = q_form(sys, pres, basis_cochain(a));

    GramReport rep;
    rep.m_a = sys.m_a;
    rep.generators = g;
    rep.gram = Matrix(N, N);
    for (std::size_t a = 0; a < N; ++a) {
        rep.gram(a, a) = qdiag[a];
        for (std::size_t b = a + 1; b < N; ++b) {
            std::uint64_t qab =
                q_form(sys, pres, cochain_add(basis_cochain(a), basis_cochain(b), sys));
            std::uint64_t v = mod_mul(half, mod_sub(qab, mod_add(qdiag[a], qdiag[b], m), m), m);
            rep.gram(a, b) = v;
            rep.gram(b, a) = v;
        }
    }
    rep.block_nonzero.assign(sys.m_a, std::vector<bool>(sys.m_a, false));
    for (std::size_t J = 0; J < sys.m_a; ++J)
        for (std::size_t L = 0; L < sys.m_a; ++L) {
            bool nz = false;
            for (std::size_t i = 0; i < g && !nz; ++i)
                for (std::size_t k = 0; k < g; ++k)
                    if (rep.gram(J * g + i, L * g + k) != 0) { nz = true; break; }
            rep.block_nonzero[J][L] = nz;
        }
    rep.anti_triangular = true;
    for (std::size_t J = 0; J < sys.m_a; ++J)
        for (std::size_t L = 0; L < sys.m_a; ++L)
            if (J + L + 2 <= sys.m_a && rep.block_nonzero[J][L]) rep.anti_triangular = false;
    rep.determinant = det_mod_p(rep.gram, m);
    rep.mr2_verdict = rep.determinant != 0;
    return rep;
}

bool mr2_check(const NilpotentSystem& sys, const DemuskinPresentation& pres) {
    return gram_matrix(sys, pres).mr2_verdict;
}

FiberSolveResult cocycle_fiber_solve(const NilpotentSystem& sys, const DemuskinPresentation& pres,
                                     const Cochain1& x) {
    const RingModulus& m = sys.m;
    if (!x.has_zero_z())
        throw std::invalid_argument("cocycle_fiber_solve: x must be ad-valued");
    Matrix d2_ad = d2_matrix(pres, sys.ad_system());
    std::vector<std::uint64_t> flat = ad_flat(x);
    for (auto v : mat_apply(d2_ad, flat, m))
        if (v != 0) throw std::invalid_argument("cocycle_fiber_solve: x is not an ad-cocycle");
    std::uint64_t qx = q_form(sys, pres, x);
    Matrix d2_z = d2_matrix(pres, sys.z_system());
    FiberSolveResult res;
    std::uint32_t e = m.s;
    for (std::size_t j = 0; j < d2_z.cols(); ++j) e = std::min(e, val_p(d2_z(0, j), m));
    res.ideal_exponent = e;
    SolveResult sr = solve(d2_z, {mod_neg(qx, m)}, m);
    if (sr.ok) {
        res.ok = true;
        res.y = sr.x;
        // certify: the assembled pair is a nonabelian cocycle
        Cochain1 full = x;
        for (std::size_t i = 0; i < full.values.size(); ++i) full.values[i].z = res.y[i];
        if (!d2_nilpotent(sys, pres, full).is_zero())
            throw std::logic_error("cocycle_fiber_solve: certificate failed");
    } else {
        res.ok = false;
        res.obstruction = qx;
    }
    return res;
}

KldReport kernel_and_kld(const NilpotentSystem& sys, const DemuskinPresentation& pres,
                         std::uint32_t s) {
    if (s == 0 || s > sys.m.s)
        throw std::invalid_argument("kernel_and_kld: precision out of range");
    NilpotentSystem sys_s = sys.m.s == s ? sys : sys.reduced(s);
    RingModulus mp = sys.m.reduced(1);
    std::size_t g = sys.num_generators();
    std::size_t N = sys.m_a * g;

    // Z = mod-p image of ker(d² at precision s), in generator-major layout
    Matrix d2s = d2_matrix(pres, sys_s.ad_system());
    KernelData kd = kernel(d2s, sys_s.m);
    Matrix zgens(kd.gens.rows(), N);
    for (std::size_t i = 0; i < kd.gens.rows(); ++i)
        for (std::size_t j = 0; j < N; ++j) zgens(i, j) = kd.gens(i, j) % mp.q;
    // independent rows mod p
    Matrix zb_raw = zgens;
    std::size_t zdim = rank_mod_p(zgens, mp);
    // reduced basis via Gaussian elimination
    Matrix zbasis(zdim, N);
    {
        Matrix w = reduce(zb_raw, mp);
        std::size_t r = 0;
        for (std::size_t col = 0; col < N && r < w.rows(); ++col) {
            std::size_t piv = r;
            while (piv < w.rows() && w(piv, col) == 0) ++piv;
            if (piv == w.rows()) continue;
            for (std::size_t j = 0; j < N; ++j) std::swap(w(piv, j), w(r, j));
            std::uint64_t c = mod_inv(w(r, col), mp);
            for (std::size_t j = 0; j < N; ++j) w(r, j) = mod_mul(w(r, j), c, mp);
            for (std::size_t i = 0; i < w.rows(); ++i) {
                if (i == r || w(i, col) == 0) continue;
                std::uint64_t f = w(i, col);
                for (std::size_t j = 0; j < N; ++j)
                    w(i, j) = mod_sub(w(i, j), mod_mul(f, w(r, j), mp), mp);
            }
            ++r;
        }
        for (std::size_t i = 0; i < zdim; ++i)
            for (std::size_t j = 0; j < N; ++j) zbasis(i, j) = w(i, j);
    }

    GramReport gr = gram_matrix(sys, pres);
    // convert basis rows to the Gram's basis order
    Matrix zb(zdim, N);
    for (std::size_t i = 0; i < zdim; ++i) {
        std::vector<std::uint64_t> row(N);
        for (std::size_t j = 0; j < N; ++j) row[j] = zbasis(i, j);
        auto conv = to_basis_order(row, g, sys.m_a);
        for (std::size_t j = 0; j < N; ++j) zb(i, j) = conv[j];
    }
    Matrix w = mat_mul(zb, mat_mul(gr.gram, transpose(zb), mp), mp);
    KldReport rep;
    rep.z_dim = zdim;
    rep.radical_dim = zdim - rank_mod_p(w, mp);

    // radical vectors back in generator-major layout
    Matrix rad_coeff = nullspace_mod_p(w, mp);  // rows: coefficients against zb
    Matrix rad = mat_mul(rad_coeff, zbasis, mp);

    Matrix d1 = reduce(d1_matrix(pres, sys.reduced(1).ad_system()), mp);
    rep.b1_dim = rank_mod_p(d1, mp);
    // stack B¹ generators (columns of d1, as rows) with the radical
    Matrix stack(d1.cols() + rad.rows(), N);
    for (std::size_t j = 0; j < d1.cols(); ++j)
        for (std::size_t i = 0; i < N; ++i) stack(j, i) = d1(i, j);
    for (std::size_t i = 0; i < rad.rows(); ++i)
        for (std::size_t j = 0; j < N; ++j) stack(d1.cols() + i, j) = rad(i, j);
    rep.kld_dim = rank_mod_p(stack, mp);
    return rep;
}

}  // namespace demuskin
