#pragma once

#include "demuskin/coeff.hpp"
#include "demuskin/linalg.hpp"

namespace demuskin {

// Cochain complex  A --d1--> A^{n+2} --d2--> A  over Z/p^s with
// d1 block i = rho(x_i) - I and d2 block i = rho(∂R/∂x_i).
struct AbelianComplex {
    DemuskinPresentation pres;
    AbelianSystem sys;
    Matrix d1;  // rank*(n+2) x rank
    Matrix d2;  // rank x rank*(n+2)
};

// Throws std::invalid_argument when the system fails validation or does not
// kill the relator at this precision (the complex property d2∘d1 = 0 is
// equivalent to rho(R) = I); throws std::logic_error if d2·d1 != 0 while
// rho(R) = I, which would indicate a Fox-calculus defect.
AbelianComplex build_complex(const DemuskinPresentation& pres, const AbelianSystem& sys,
                             bool skip_validation = false);

// d2 matrix alone; defined for any invertible action tuple (no relator
// triviality needed), which is what kernel-only computations consume.
Matrix d2_matrix(const DemuskinPresentation& pres, const AbelianSystem& sys);
Matrix d1_matrix(const DemuskinPresentation& pres, const AbelianSystem& sys);

struct CohomologyProfiles {
    ModuleProfile h0, h1, h2;
};

CohomologyProfiles cohomology(const AbelianComplex& cx);

// Word-extension evaluation of a 1-cochain: c(gh) = c(g) + g·c(h), c(x_i)
// given per generator. Cochain layout: generator-major blocks of size rank.
std::vector<std::uint64_t> extend_abelian_cochain(const AbelianSystem& sys, const Word& w,
                                                  const std::vector<std::uint64_t>& cochain);

enum class TorsionVerdict { NoFreeFixedVectors, FreeFixedVectorsPresent };

struct TorsionProbeReport {
    TorsionVerdict verdict;
    std::vector<ModuleProfile> h0_profiles;  // ker d1 profile at s = 1..S
};

// Finite-precision probe of "no characteristic-0 fixed vectors": the kernel
// of d1 at precision S must contain no element of full additive order p^S.
TorsionProbeReport h0_torsion_probe(const DemuskinPresentation& pres, const AbelianSystem& sys,
                                    std::uint32_t S);

}  // namespace demuskin
