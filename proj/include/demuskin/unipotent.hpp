#pragma once

#include "demuskin/ld_nilpotent.hpp"

namespace demuskin {

// Element (exp(u), m(l)) of U ⋊ L_unip in log-coordinates: l parameterizes
// the Levi element [[1, l], [0, 1]], u lives in Lie U = U^ad ⊕ Z.
struct GroupElement {
    std::uint64_t levi_l = 0;
    LieValue u;

    bool operator==(const GroupElement&) const = default;
};

// One-parameter semidirect model: the bracket and the graded action of the
// Levi parameter. Covers the short-root system (sym³ on U^ad) and the
// long-root Heisenberg quotient (std on U^ad); z is always det = 1 here.
struct UnipotentModel {
    enum class Kind { G2Short, G2LongHeisenberg };
    Kind kind;
    NilpotentSystem bracket_carrier;  // bracket + modulus; per-generator actions unused

    const RingModulus& modulus() const { return bracket_carrier.m; }
    std::size_t m_a() const { return bracket_carrier.m_a; }
    Matrix levi_ad(std::uint64_t l) const;

    GroupElement identity() const;
};

UnipotentModel g2_short_model(const RingModulus& m);
UnipotentModel g2_long_model(const RingModulus& m);

// u + v + ½[u, v]; exact for class 2.
LieValue bch_multiply(const NilpotentSystem& sys, const LieValue& u, const LieValue& v);

GroupElement semidirect_multiply(const UnipotentModel& model, const GroupElement& g,
                                 const GroupElement& h);
GroupElement semidirect_inverse(const UnipotentModel& model, const GroupElement& g);

// q-fold product by square-and-multiply.
GroupElement power_iterated(const UnipotentModel& model, const GroupElement& g, std::uint64_t q);

// Closed form for g^q in the short-root model with the default bracket
// normalization B(E0,E3) = 3, B(E1,E2) = -1, monomial-basis coordinates:
//   levi     q·l
//   ad_0     q·u0 + S1·l·u1 + S2·l²·u2 + S3·l³·u3
//   ad_1     q·u1 + 2·S1·l·u2 + 3·S2·l²·u3
//   ad_2     q·u2 + 3·S1·l·u3
//   ad_3     q·u3
//   z        q·u4 + P·l·(u2² - 3·u1·u3) - (3/2)·W·l³·u3²
// with S1 = q(q-1)/2, S2 = q(q-1)(2q-1)/6, S3 = S1², P = (q-1)q(q+1)/6 and
// W = (q-1)q(q+1)(3q²-2)/60 (all integers; the lone ½ uses that p is odd).
GroupElement power_closed_form(const GroupElement& g, std::uint64_t q, const RingModulus& m);

// Integer-valued coefficient polynomials evaluated exactly mod p^s.
std::uint64_t power_coeff_s1(std::uint64_t q, const RingModulus& m);
std::uint64_t power_coeff_s2(std::uint64_t q, const RingModulus& m);
std::uint64_t power_coeff_s3(std::uint64_t q, const RingModulus& m);
std::uint64_t power_coeff_pair_sum(std::uint64_t q, const RingModulus& m);   // (q-1)q(q+1)/6
std::uint64_t power_coeff_weighted(std::uint64_t q, const RingModulus& m);   // (q-1)q(q+1)(3q²-2)/60

}  // namespace demuskin
