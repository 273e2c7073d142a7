#pragma once

#include "demuskin/ld_abelian.hpp"

namespace demuskin {

// Element of the graded Lie algebra Lie U = U^ad ⊕ Z(U), center rank 1.
struct LieValue {
    std::vector<std::uint64_t> ad;
    std::uint64_t z = 0;

    static LieValue zero(std::size_t m_a) { return LieValue{std::vector<std::uint64_t>(m_a, 0), 0}; }
    bool is_zero() const;
    bool operator==(const LieValue&) const = default;
};

LieValue lie_add(const LieValue& a, const LieValue& b, const NilpotentSystem& sys);
LieValue lie_sub(const LieValue& a, const LieValue& b, const NilpotentSystem& sys);
LieValue lie_scale(const LieValue& a, std::uint64_t c, const NilpotentSystem& sys);
// graded action of generator g
LieValue lie_act(const NilpotentSystem& sys, std::size_t g, const LieValue& v, bool inverse = false);

// One Lie-algebra value per generator.
struct Cochain1 {
    std::vector<LieValue> values;

    static Cochain1 zero(std::size_t generators, std::size_t m_a);
    bool is_zero() const;
    bool has_zero_z() const;
    bool operator==(const Cochain1&) const = default;
};

Cochain1 cochain_add(const Cochain1& a, const Cochain1& b, const NilpotentSystem& sys);
Cochain1 cochain_scale(const Cochain1& a, std::uint64_t c, const NilpotentSystem& sys);
Cochain1 cochain_reduce(const Cochain1& a, const RingModulus& target);
Cochain1 ad_only(const Cochain1& c);  // copy with center parts zeroed

// Flat layouts. Generator-major: index i*m_a + j (the abelian complex layout
// for ad parts). Basis order 𝓑: height-major, index j*(n+2) + i.
std::vector<std::uint64_t> ad_flat(const Cochain1& c);
Cochain1 cochain_from_ad_flat(const std::vector<std::uint64_t>& v, std::size_t generators,
                              std::size_t m_a);
std::vector<std::uint64_t> z_flat(const Cochain1& c);
std::vector<std::uint64_t> to_basis_order(const std::vector<std::uint64_t>& gen_major,
                                          std::size_t generators, std::size_t m_a);
std::vector<std::uint64_t> from_basis_order(const std::vector<std::uint64_t>& basis_major,
                                            std::size_t generators, std::size_t m_a);

// BCH extension of a 1-cochain to the free group:
// c(gh) = c(g) + g·c(h) + ½[c(g), g·c(h)], c(x_i^-1) = -x_i^-1·c(x_i).
LieValue extend_cochain(const NilpotentSystem& sys, const Cochain1& c, const Word& w);

// d²(c) = c(R); c is a nonabelian 1-cocycle iff this vanishes.
LieValue d2_nilpotent(const NilpotentSystem& sys, const DemuskinPresentation& pres,
                      const Cochain1& c);

// Q(x) = pr(d²(x̃)) on the canonical zero-center lift of an ad-valued cochain.
std::uint64_t q_form(const NilpotentSystem& sys, const DemuskinPresentation& pres,
                     const Cochain1& x);

// x∪y = ½(Q(x+y) - Q(x) - Q(y)).
std::uint64_t cup(const NilpotentSystem& sys, const DemuskinPresentation& pres, const Cochain1& x,
                  const Cochain1& y);

struct GramReport {
    Matrix gram;                                  // N x N over F_p, N = m_a*(n+2)
    std::size_t m_a = 0;
    std::size_t generators = 0;
    std::vector<std::vector<bool>> block_nonzero;  // m_a x m_a height blocks
    bool anti_triangular = false;
    std::uint64_t determinant = 0;                // mod p
    bool mr2_verdict = false;
};

// Cup-product Gram matrix on the basis x_i^*E_j ordered by root height then
// generator. Computed mod p (the system is reduced to precision 1).
GramReport gram_matrix(const NilpotentSystem& sys, const DemuskinPresentation& pres);

bool mr2_check(const NilpotentSystem& sys, const DemuskinPresentation& pres);

// Solve Q(x) + d²_z(y) = 0 for a z-valued cochain y given an ad-cocycle x.
struct FiberSolveResult {
    bool ok = false;
    std::vector<std::uint64_t> y;           // z-cochain, one residue per generator
    std::uint64_t obstruction = 0;          // Q(x) when unsolvable
    std::uint32_t ideal_exponent = 0;       // im(d²_z) = p^e * R
};

FiberSolveResult cocycle_fiber_solve(const NilpotentSystem& sys, const DemuskinPresentation& pres,
                                     const Cochain1& x);

struct KldReport {
    std::size_t z_dim = 0;        // dim of the mod-p image of ker d² at precision s
    std::size_t radical_dim = 0;  // dim of the cup radical restricted to that image
    std::size_t b1_dim = 0;       // dim of the mod-p coboundaries
    std::size_t kld_dim = 0;      // dim of B¹ + radical
};

// Kernel of the cup pairing on the mod-p image of the precision-s cocycles,
// and the resulting K_LD = B¹ + ker(∪) dimension.
KldReport kernel_and_kld(const NilpotentSystem& sys, const DemuskinPresentation& pres,
                         std::uint32_t s);

}  // namespace demuskin
