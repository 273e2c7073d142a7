#pragma once

#include <optional>

#include "demuskin/ld_nilpotent.hpp"
#include "demuskin/rng.hpp"

namespace demuskin {

// Outcome of the mod-p trichotomy behind the lifting strategy: either the
// H¹-level pairing is nontrivial, or one of the two H² groups vanishes.
enum class ObstructionTag { CupNontrivial, CenterH2Zero, AdH2Zero, OutsideHypotheses };

struct ObstructionCase {
    ObstructionTag tag;
    std::size_t dim_h2_center = 0;
    std::size_t dim_h2_ad = 0;
    bool pairing_nontrivial = false;  // cup on the mod-p cocycles, modulo im d²_z
    bool mr2 = false;
};

const char* tag_name(ObstructionTag t);

ObstructionCase classify(const NilpotentSystem& sys, const DemuskinPresentation& pres);

// A certified nonabelian cocycle at a given precision: d² vanishes there and
// the mod-p reduction is the original input.
struct LiftState {
    std::uint32_t precision_reached = 0;
    Cochain1 cocycle;
    LieValue certificate;       // d2_nilpotent at precision_reached (must be 0)
    bool used_quadratic = false;  // whether the λ-adjustment was needed
};

struct LiftObstruction {
    std::uint32_t level = 0;          // precision at which lifting failed
    std::string kind;                 // "ad", "z", or "z-degenerate"
    std::vector<std::uint64_t> cls;   // obstruction class (mod-p residues)
    std::vector<std::uint64_t> functional;  // certificate functional, f·d² = 0, f·cls != 0
};

struct LiftResult {
    std::optional<LiftState> state;
    std::optional<LiftObstruction> obstruction;
    bool ok() const { return state.has_value(); }
};

// One precision step k -> k+1. Corrections are found by a joint linear solve
// at level k; when the linear system alone is unsolvable and the pairing is
// nontrivial, a quadratic λ-adjustment along a non-isotropic cocycle
// direction repairs the center equation (λ has positive valuation, so the
// mod-p class is preserved).
LiftResult lift_step(const NilpotentSystem& sys, const DemuskinPresentation& pres,
                     const LiftState& state, std::uint64_t seed = 0);

// Iterate to the target precision; reports the failing level and obstruction
// class otherwise. Deterministic for a fixed seed: the non-isotropic
// direction is the first basis-ordered kernel vector with unit self-pairing,
// with a seeded random fallback.
LiftResult lift_to_precision(const NilpotentSystem& sys, const DemuskinPresentation& pres,
                             const Cochain1& mod_p_cocycle, std::uint32_t target,
                             std::uint64_t seed = 0);

// Initial state from a certified mod-p cocycle.
LiftState initial_state(const NilpotentSystem& sys, const DemuskinPresentation& pres,
                        const Cochain1& mod_p_cocycle);

// All roots λ ≡ 0 (mod p) of A + Bλ + Cλ² = 0 (mod p^s), found digit by
// digit; empty when none exists or the search degenerates.
std::vector<std::uint64_t> quadratic_roots_positive_valuation(std::uint64_t a, std::uint64_t b,
                                                              std::uint64_t c,
                                                              const RingModulus& m,
                                                              std::size_t cap = 4096);

}  // namespace demuskin
