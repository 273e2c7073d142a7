#include "demuskin/unipotent.hpp"

namespace demuskin {

namespace {

// Evaluate an integer-valued polynomial given as (product of linear factors
// in q) / den: compute the numerator mod den*p^s, then divide exactly.
std::uint64_t int_valued(const std::vector<std::int64_t>& factors_of_q, std::uint64_t q,
                         std::uint64_t den, const RingModulus& m) {
    unsigned __int128 mod = static_cast<unsigned __int128>(den) * m.q;
    unsigned __int128 acc = 1;
    for (auto f : factors_of_q) {
        __int128 term = static_cast<__int128>(q) % static_cast<__int128>(mod);
        term += f;  // factor (q + f)
        term %= static_cast<__int128>(mod);
        if (term < 0) term += static_cast<__int128>(mod);
        acc = acc * static_cast<unsigned __int128>(term) % mod;
    }
    // acc ≡ numerator (mod den*p^s) and den | numerator, so acc/den is exact mod p^s
    if (acc % den != 0) throw std::logic_error("int_valued: expected divisibility failed");
    return static_cast<std::uint64_t>((acc / den) % m.q);
}

}  // namespace

std::uint64_t power_coeff_s1(std::uint64_t q, const RingModulus& m) {
    return int_valued({0, -1}, q, 2, m);
}

std::uint64_t power_coeff_s2(std::uint64_t q, const RingModulus& m) {
    // q(q-1)(2q-1)/6 = (2q)(2q-1)(2q-2)/24: keep linear factors in q
    unsigned __int128 mod = static_cast<unsigned __int128>(6) * m.q;
    unsigned __int128 qq = q % mod;
    unsigned __int128 acc = qq;
    acc = acc * ((qq + mod - 1) % mod) % mod;
    acc = acc * ((2 * qq + mod - 1) % mod) % mod;
    if (acc % 6 != 0) throw std::logic_error("power_coeff_s2: divisibility failed");
    return static_cast<std::uint64_t>((acc / 6) % m.q);
}

std::uint64_t power_coeff_s3(std::uint64_t q, const RingModulus& m) {
    std::uint64_t s1 = power_coeff_s1(q, m);
    return mod_mul(s1, s1, m);
}

std::uint64_t power_coeff_pair_sum(std::uint64_t q, const RingModulus& m) {
    return int_valued({-1, 0, 1}, q, 6, m);
}

std::uint64_t power_coeff_weighted(std::uint64_t q, const RingModulus& m) {
    // (q-1)q(q+1)(3q²-2)/60
    unsigned __int128 mod = static_cast<unsigned __int128>(60) * m.q;
    unsigned __int128 qq = q % mod;
    unsigned __int128 acc = (qq + mod - 1) % mod;
    acc = acc * qq % mod;
    acc = acc * ((qq + 1) % mod) % mod;
    unsigned __int128 q2 = qq * qq % mod;
    acc = acc * ((3 * q2 + mod - 2) % mod) % mod;
    if (acc % 60 != 0) throw std::logic_error("power_coeff_weighted: divisibility failed");
    return static_cast<std::uint64_t>((acc / 60) % m.q);
}

Matrix UnipotentModel::levi_ad(std::uint64_t l) const {
    LeviData levi{modulus(), {l}};
    switch (kind) {
        case Kind::G2Short:
            return sym_power_twist(levi, 3, -2).actions[0];
        case Kind::G2LongHeisenberg:
            return levi.matrix(0);
    }
    throw std::logic_error("UnipotentModel::levi_ad: bad kind");
}

GroupElement UnipotentModel::identity() const {
    return GroupElement{0, LieValue::zero(m_a())};
}

UnipotentModel g2_short_model(const RingModulus& m) {
    LeviData trivial{m, std::vector<std::uint64_t>(4, 0)};
    return UnipotentModel{UnipotentModel::Kind::G2Short, g2_short_root(trivial)};
}

UnipotentModel g2_long_model(const RingModulus& m) {
    LeviData trivial{m, std::vector<std::uint64_t>(4, 0)};
    return UnipotentModel{UnipotentModel::Kind::G2LongHeisenberg, g2_long_heisenberg(trivial)};
}

LieValue bch_multiply(const NilpotentSystem& sys, const LieValue& u, const LieValue& v) {
    const RingModulus& m = sys.m;
    std::uint64_t half = mod_inv(2, m);
    LieValue r = lie_add(u, v, sys);
    r.z = mod_add(r.z, mod_mul(half, sys.bracket_of(u.ad, v.ad), m), m);
    return r;
}

GroupElement semidirect_multiply(const UnipotentModel& model, const GroupElement& g,
                                 const GroupElement& h) {
    const RingModulus& m = model.modulus();
    LieValue hu_moved;
    hu_moved.ad = mat_apply(model.levi_ad(g.levi_l), h.u.ad, m);
    hu_moved.z = h.u.z;  // det of a unipotent Levi element is 1
    GroupElement r;
    r.levi_l = mod_add(g.levi_l, h.levi_l, m);
    r.u = bch_multiply(model.bracket_carrier, g.u, hu_moved);
    return r;
}

GroupElement semidirect_inverse(const UnipotentModel& model, const GroupElement& g) {
    const RingModulus& m = model.modulus();
    GroupElement r;
    r.levi_l = mod_neg(g.levi_l, m);
    r.u.ad = mat_apply(model.levi_ad(r.levi_l), g.u.ad, m);
    for (auto& x : r.u.ad) x = mod_neg(x, m);
    r.u.z = mod_neg(g.u.z, m);
    return r;
}

GroupElement power_iterated(const UnipotentModel& model, const GroupElement& g, std::uint64_t q) {
    GroupElement acc = model.identity();
    GroupElement base = g;
    while (q) {
        if (q & 1) acc = semidirect_multiply(model, acc, base);
        base = semidirect_multiply(model, base, base);
        q >>= 1;
    }
    return acc;
}

GroupElement power_closed_form(const GroupElement& g, std::uint64_t q, const RingModulus& m) {
    if (q < 1) throw std::invalid_argument("power_closed_form: q >= 1 required");
    if (g.u.ad.size() != 4)
        throw std::invalid_argument("power_closed_form: short-root coordinates (l; u0..u3; u4) required");
    std::uint64_t l = g.levi_l % m.q;
    std::uint64_t l2 = mod_mul(l, l, m), l3 = mod_mul(l2, l, m);
    const auto& u = g.u.ad;
    std::uint64_t qq = q % m.q;
    std::uint64_t s1 = power_coeff_s1(q, m);
    std::uint64_t s2 = power_coeff_s2(q, m);
    std::uint64_t s3 = power_coeff_s3(q, m);
    std::uint64_t pp = power_coeff_pair_sum(q, m);
    std::uint64_t ww = power_coeff_weighted(q, m);

    GroupElement r;
    r.levi_l = mod_mul(qq, l, m);
    r.u.ad.resize(4);
    r.u.ad[0] = mod_add(mod_mul(qq, u[0], m),
                        mod_add(mod_mul(mod_mul(s1, l, m), u[1], m),
                                mod_add(mod_mul(mod_mul(s2, l2, m), u[2], m),
                                        mod_mul(mod_mul(s3, l3, m), u[3], m), m),
                                m),
                        m);
    r.u.ad[1] = mod_add(mod_mul(qq, u[1], m),
                        mod_add(mod_mul(mod_mul(mod_mul(2 % m.q, s1, m), l, m), u[2], m),
                                mod_mul(mod_mul(mod_mul(3 % m.q, s2, m), l2, m), u[3], m), m),
                        m);
    r.u.ad[2] = mod_add(mod_mul(qq, u[2], m),
                        mod_mul(mod_mul(mod_mul(3 % m.q, s1, m), l, m), u[3], m), m);
    r.u.ad[3] = mod_mul(qq, u[3], m);

    std::uint64_t u2sq = mod_mul(u[2], u[2], m);
    std::uint64_t u1u3 = mod_mul(u[1], u[3], m);
    std::uint64_t u3sq = mod_mul(u[3], u[3], m);
    std::uint64_t zc = mod_mul(qq, g.u.z, m);
    zc = mod_add(zc,
                 mod_mul(mod_mul(pp, l, m),
                         mod_sub(u2sq, mod_mul(3 % m.q, u1u3, m), m), m),
                 m);
    std::uint64_t half = mod_inv(2, m);
    std::uint64_t w_term = mod_mul(mod_mul(mod_mul(3 % m.q, half, m), ww, m),
                                   mod_mul(l3, u3sq, m), m);
    r.u.z = mod_sub(zc, w_term, m);
    return r;
}

}  // namespace demuskin
