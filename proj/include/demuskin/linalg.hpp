#pragma once

#include <optional>

#include "demuskin/zmod.hpp"

namespace demuskin {

// Isomorphism type of a finite module over Z/p^s: a sum of cyclic pieces
// Z/p^c with 1 <= c <= s. Pieces of full order p^s are counted by free_rank
// (at precision s they are indistinguishable from genuinely free summands);
// the rest are listed by their order exponents, sorted nondecreasing.
struct ModuleProfile {
    std::uint32_t precision = 0;
    std::size_t free_rank = 0;
    std::vector<std::uint32_t> torsion_exponents;

    std::size_t dim_mod_p() const { return free_rank + torsion_exponents.size(); }
    std::uint32_t max_order_exponent() const;
    bool is_trivial() const { return free_rank == 0 && torsion_exponents.empty(); }
    bool operator==(const ModuleProfile&) const = default;
};

// U*M*V = D with U, V invertible and D diagonal with entries p^e
// (exponents[i] = e; e = s encodes the zero entry). Valid over the local
// ring Z/p^s because any entry of minimal valuation divides all others.
struct SmithDecomposition {
    Matrix u, v;
    std::vector<std::uint32_t> exponents;  // length min(rows, cols)
};

SmithDecomposition smith(const Matrix& mat, const RingModulus& m);

// Row-module canonical form. H = U * A where A is `mat`, extended by zero
// rows when the canonical generating set is larger than rows(mat) (that
// padding is reported). Membership in the row module is decidable against H
// by back-substitution, and the form is idempotent.
struct HowellForm {
    Matrix h;
    Matrix u;            // invertible, h = u * (mat padded with `padded` zero rows)
    std::size_t padded = 0;
    ModuleProfile profile;  // row-module structure
};

HowellForm canonical_form(const Matrix& mat, const RingModulus& m);

// Is v in the row module of a canonical form H?
bool row_member(const HowellForm& hf, const std::vector<std::uint64_t>& v, const RingModulus& m);

// Kernel {v : M v = 0} of the column action, with structure data that lets
// callers express kernel elements in coordinates adapted to the cyclic
// decomposition.
struct KernelData {
    Matrix gens;                        // one generator per row
    std::vector<std::uint32_t> order_exp;  // additive order p^order_exp[i] of gens row i
    ModuleProfile profile;

    Matrix vinv;                        // change of basis used internally
    std::vector<std::size_t> coord;     // column index in Smith coordinates per generator
    std::vector<std::uint32_t> shift;   // gens[i] = p^shift[i] * (basis col), order p^(s-shift)
    RingModulus m;

    bool contains(const std::vector<std::uint64_t>& v) const;
    // Coordinates of v in ⊕ Z/p^{order_exp[i]}; throws if v is not in the kernel.
    std::vector<std::uint64_t> coordinates(const std::vector<std::uint64_t>& v) const;
};

KernelData kernel(const Matrix& mat, const RingModulus& m);

// Profile of coker(M) = R^rows / (column span of M).
ModuleProfile cokernel_profile(const Matrix& mat, const RingModulus& m);

// Solve M x = b; on failure returns a certificate functional f with
// f * M = 0 but f . b != 0.
struct SolveResult {
    bool ok = false;
    std::vector<std::uint64_t> x;
    std::vector<std::uint64_t> certificate;
};

SolveResult solve(const Matrix& mat, const std::vector<std::uint64_t>& b, const RingModulus& m);

// Profile of ker(d_out) / im(d_in), where im(d_in) is the column span of
// d_in and is required to lie inside ker(d_out).
ModuleProfile subquotient_profile(const Matrix& d_out, const Matrix& d_in, const RingModulus& m);

// Field-level helpers (work mod p regardless of the precision of m).
std::size_t rank_mod_p(const Matrix& mat, const RingModulus& m);
std::uint64_t det_mod_p(const Matrix& mat, const RingModulus& m);
// Basis rows of the mod-p null space {v : M v = 0 mod p}.
Matrix nullspace_mod_p(const Matrix& mat, const RingModulus& m);

ModuleProfile profile_from_orders(std::uint32_t precision, std::vector<std::uint32_t> order_exps);

}  // namespace demuskin
