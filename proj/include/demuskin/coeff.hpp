#pragma once

#include <optional>
#include <string>

#include "demuskin/free_group.hpp"
#include "demuskin/zmod.hpp"

namespace demuskin {

// Levi tuple: generator x_i acts through [[1, l_i], [0, 1]].
struct LeviData {
    RingModulus m;
    std::vector<std::uint64_t> l;

    Matrix matrix(std::size_t i) const;
    std::vector<Matrix> matrices() const;
};

// Abelian coefficient module: one invertible action matrix per generator,
// expected simultaneously unitriangularizable mod p.
struct AbelianSystem {
    std::size_t rank = 0;
    std::vector<Matrix> actions;
    RingModulus m;

    std::size_t num_generators() const { return actions.size(); }
    AbelianSystem reduced(std::uint32_t t) const;
};

AbelianSystem trivial_system(std::size_t rank, std::size_t generators, const RingModulus& m);
AbelianSystem direct_sum(const AbelianSystem& a, const AbelianSystem& b);

// Class-2 nilpotent coefficients with rank-1 center: graded module
// Lie U = U^ad ⊕ Z with an antisymmetric center-valued bracket on U^ad.
struct NilpotentSystem {
    std::size_t m_a = 0;              // rank of U^ad
    Matrix bracket;                   // m_a x m_a, antisymmetric, B[i][j] = B(E_i, E_j)
    std::vector<Matrix> ad_actions;   // per generator on U^ad
    std::vector<std::uint64_t> z_actions;  // unit scalar per generator on Z(U)
    RingModulus m;

    std::size_t num_generators() const { return ad_actions.size(); }
    std::uint64_t pair(std::size_t i, std::size_t j) const { return bracket(i, j); }
    std::uint64_t bracket_of(const std::vector<std::uint64_t>& x,
                             const std::vector<std::uint64_t>& y) const;

    AbelianSystem ad_system() const;
    AbelianSystem z_system() const;
    AbelianSystem lie_system() const;  // graded sum U^ad ⊕ Z as one abelian module
    NilpotentSystem reduced(std::uint32_t t) const;
};

// Default bracket constants for the short-root system; fixed by solving the
// equivariance constraint B(gx, gy) = det(g)·B(x,y) on the monomial basis
// of sym^3, which forces B(E0,E3) = -3·B(E1,E2). Normalized to integers.
inline constexpr std::int64_t kG2ShortB03 = 3;
inline constexpr std::int64_t kG2ShortB12 = -1;

// sym^k of the Levi action twisted by det^d (= identity twist for unipotent
// Levi matrices) on the monomial basis {e1^k, e1^{k-1}e2, ..., e2^k}.
AbelianSystem sym_power_twist(const LeviData& levi, unsigned k, int d);

NilpotentSystem g2_short_root(const LeviData& levi,
                              std::optional<std::int64_t> b03 = std::nullopt,
                              std::optional<std::int64_t> b12 = std::nullopt);

NilpotentSystem g2_long_heisenberg(const LeviData& levi);

// General-Levi variants: the graded action of an invertible 2x2 matrix g is
// det(g)^{-2}·sym³(g) on U^ad and det(g)^{-1} on the center (short root),
// respectively std and det (long-root Heisenberg quotient). The unipotent
// LeviData builders are the special case with unit diagonal.
AbelianSystem sym_cube_det_twist(const std::vector<Matrix>& levi2x2, const RingModulus& m);
NilpotentSystem g2_short_root_general(const std::vector<Matrix>& levi2x2, const RingModulus& m,
                                      std::optional<std::int64_t> b03 = std::nullopt,
                                      std::optional<std::int64_t> b12 = std::nullopt);
NilpotentSystem g2_long_heisenberg_general(const std::vector<Matrix>& levi2x2,
                                           const RingModulus& m);

NilpotentSystem generic_heisenberg(std::size_t m_a, Matrix bracket,
                                   std::vector<Matrix> ad_actions,
                                   std::vector<std::uint64_t> z_actions, const RingModulus& m);

struct ValidationReport {
    bool unitriangularizable = false;      // simultaneous, mod p
    bool actions_invertible = false;
    bool bracket_antisymmetric = true;     // nilpotent systems only
    bool equivariant = true;               // nilpotent systems only
    bool generator_order_ok = false;       // rho(x_i)^p = I mod p for every generator
    std::string first_violation;

    bool ok() const {
        return unitriangularizable && actions_invertible && bracket_antisymmetric &&
               equivariant && generator_order_ok;
    }
};

ValidationReport validate_system(const AbelianSystem& sys);
ValidationReport validate_system(const NilpotentSystem& sys);

// Exhaustive check that the generated matrix group is a p-group; exponential,
// intended for rank <= 2 and p <= 7 only.
bool exhaustive_p_group_check(const std::vector<Matrix>& actions, const RingModulus& m,
                              std::size_t max_order = 1u << 20);

}  // namespace demuskin
