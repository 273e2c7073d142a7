#include <doctest.h>

#include <set>

#include "demuskin/linalg.hpp"
#include "demuskin/rng.hpp"

using namespace demuskin;

namespace {

Matrix random_matrix(Rng& rng, std::size_t r, std::size_t c, const RingModulus& m) {
    Matrix a(r, c);
    for (std::size_t i = 0; i < r; ++i)
        for (std::size_t j = 0; j < c; ++j) a(i, j) = rng.residue(m);
    return a;
}

// every vector of the row module, by brute-force coefficient enumeration
std::set<std::vector<std::uint64_t>> enumerate_row_module(const Matrix& mat, const RingModulus& m) {
    std::set<std::vector<std::uint64_t>> out;
    std::vector<std::uint64_t> coeff(mat.rows(), 0);
    for (;;) {
        std::vector<std::uint64_t> v(mat.cols(), 0);
        for (std::size_t i = 0; i < mat.rows(); ++i)
            for (std::size_t j = 0; j < mat.cols(); ++j)
                v[j] = mod_add(v[j], mod_mul(coeff[i], mat(i, j), m), m);
        out.insert(v);
        std::size_t k = 0;
        while (k < coeff.size() && ++coeff[k] == m.q) coeff[k++] = 0;
        if (k == coeff.size()) break;
    }
    return out;
}

}  // namespace

TEST_CASE("canonical form: identity stays identity") {
    RingModulus m = RingModulus::make(5, 2);
    HowellForm hf = canonical_form(Matrix::identity(3), m);
    CHECK(hf.h == Matrix::identity(3));
    CHECK(hf.padded == 0);
}

TEST_CASE("canonical form: diagonal (p,1) case mod p^2") {
    RingModulus m = RingModulus::make(5, 2);
    Matrix a = Matrix::from_rows(2, 2, {5, 0, 0, 1});
    HowellForm hf = canonical_form(a, m);
    // rows sorted by pivot column; (p,0) pivots col 0, (0,1) pivots col 1
    CHECK(hf.h == Matrix::from_rows(2, 2, {5, 0, 0, 1}));
    // row-module index p inside the full module: 25*5 = 125 of 625 vectors
    CHECK(enumerate_row_module(hf.h, m).size() == 125);
}

TEST_CASE("canonical form: rank-1 row module, enumeration oracle") {
    RingModulus m = RingModulus::make(5, 1);
    Matrix a = Matrix::from_rows(2, 2, {1, 1, 1, 1});
    HowellForm hf = canonical_form(a, m);
    CHECK(hf.h == Matrix::from_rows(2, 2, {1, 1, 0, 0}));
    CHECK(enumerate_row_module(hf.h, m) == enumerate_row_module(a, m));
}

TEST_CASE("canonical form: idempotent and row-module preserving") {
    Rng rng(7);
    for (std::uint64_t p : {5ull, 7ull}) {
        for (std::uint32_t s : {1u, 2u, 3u}) {
            RingModulus m = RingModulus::make(p, s);
            for (int trial = 0; trial < 20; ++trial) {
                Matrix a = random_matrix(rng, 1 + rng.below(4), 1 + rng.below(4), m);
                HowellForm hf = canonical_form(a, m);
                HowellForm hf2 = canonical_form(hf.h, m);
                CHECK(hf2.h == hf.h);
                for (std::size_t i = 0; i < a.rows(); ++i) {
                    std::vector<std::uint64_t> row(a.cols());
                    for (std::size_t j = 0; j < a.cols(); ++j) row[j] = a(i, j);
                    CHECK(row_member(hf, row, m));
                }
                // random combinations of H rows lie in the module of A and back
                HowellForm hfa = canonical_form(a, m);
                for (int t = 0; t < 5; ++t) {
                    std::vector<std::uint64_t> v(a.cols(), 0);
                    for (std::size_t i = 0; i < hf.h.rows(); ++i) {
                        std::uint64_t c = rng.residue(m);
                        for (std::size_t j = 0; j < a.cols(); ++j)
                            v[j] = mod_add(v[j], mod_mul(c, hf.h(i, j), m), m);
                    }
                    CHECK(row_member(hfa, v, m));
                }
            }
        }
    }
}

TEST_CASE("canonical form: closure row appears for wide torsion input") {
    RingModulus m = RingModulus::make(5, 2);
    Matrix a = Matrix::from_rows(1, 2, {5, 1});
    HowellForm hf = canonical_form(a, m);
    REQUIRE(hf.h.rows() == 2);  // padded: Howell basis is larger than the input
    CHECK(hf.padded == 1);
    CHECK(enumerate_row_module(hf.h, m) == enumerate_row_module(a, m));
    CHECK(row_member(hf, {0, 5}, m));
    CHECK_FALSE(row_member(hf, {0, 1}, m));
}

TEST_CASE("kernel: zero matrix has free kernel") {
    RingModulus m = RingModulus::make(5, 2);
    KernelData kd = kernel(Matrix(2, 2), m);
    CHECK(kd.profile.free_rank == 2);
    CHECK(kd.profile.torsion_exponents.empty());
}

TEST_CASE("kernel: [[p,0],[0,1]] mod p^2, full enumeration oracle") {
    RingModulus m = RingModulus::make(5, 2);
    Matrix a = Matrix::from_rows(2, 2, {5, 0, 0, 1});
    KernelData kd = kernel(a, m);
    CHECK(kd.profile.free_rank == 0);
    CHECK(kd.profile.torsion_exponents == std::vector<std::uint32_t>{1});
    std::set<std::vector<std::uint64_t>> truth;
    for (std::uint64_t x = 0; x < 25; ++x)
        for (std::uint64_t y = 0; y < 25; ++y)
            if (mod_mul(5, x, m) == 0 && y == 0) truth.insert({x, y});
    CHECK(enumerate_row_module(kd.gens, m) == truth);
    for (auto& v : truth) CHECK(kd.contains(v));
}

TEST_CASE("kernel: identity has trivial kernel") {
    RingModulus m = RingModulus::make(7, 3);
    KernelData kd = kernel(Matrix::identity(3), m);
    CHECK(kd.profile.is_trivial());
}

TEST_CASE("kernel generators are killed by the matrix; field-case rank-nullity") {
    Rng rng(11);
    for (std::uint64_t p : {5ull, 7ull}) {
        for (std::uint32_t s : {1u, 2u, 3u}) {
            RingModulus m = RingModulus::make(p, s);
            for (int trial = 0; trial < 25; ++trial) {
                std::size_t r = 1 + rng.below(4), c = 1 + rng.below(4);
                Matrix a = random_matrix(rng, r, c, m);
                KernelData kd = kernel(a, m);
                for (std::size_t i = 0; i < kd.gens.rows(); ++i) {
                    std::vector<std::uint64_t> g(c);
                    for (std::size_t j = 0; j < c; ++j) g[j] = kd.gens(i, j);
                    for (auto x : mat_apply(a, g, m)) CHECK(x == 0);
                }
                if (s == 1) CHECK(kd.profile.dim_mod_p() + rank_mod_p(a, m) == c);
            }
        }
    }
}

TEST_CASE("solve: identity, valuation obstruction, 2x2 example") {
    RingModulus m5 = RingModulus::make(5, 1);
    SolveResult r = solve(Matrix::identity(2), {3, 4}, m5);
    REQUIRE(r.ok);
    CHECK(r.x == std::vector<std::uint64_t>{3, 4});

    RingModulus m25 = RingModulus::make(5, 2);
    Matrix a = Matrix::from_rows(1, 1, {5});
    SolveResult r2 = solve(a, {1}, m25);
    REQUIRE_FALSE(r2.ok);
    REQUIRE(r2.certificate.size() == 1);
    // certificate functional vanishes on the column module but not on b
    CHECK(mod_mul(r2.certificate[0], 5, m25) == 0);
    CHECK(mod_mul(r2.certificate[0], 1, m25) != 0);

    Matrix b = Matrix::from_rows(2, 2, {2, 1, 0, 1});
    SolveResult r3 = solve(b, {3, 1}, m5);
    REQUIRE(r3.ok);
    CHECK(r3.x == std::vector<std::uint64_t>{1, 1});
}

TEST_CASE("solve: random consistent systems round-trip") {
    Rng rng(13);
    for (std::uint64_t p : {5ull, 7ull}) {
        for (std::uint32_t s : {1u, 3u}) {
            RingModulus m = RingModulus::make(p, s);
            for (int trial = 0; trial < 30; ++trial) {
                std::size_t r = 1 + rng.below(4), c = 1 + rng.below(4);
                Matrix a = random_matrix(rng, r, c, m);
                std::vector<std::uint64_t> v(c);
                for (auto& x : v) x = rng.residue(m);
                std::vector<std::uint64_t> b = mat_apply(a, v, m);
                SolveResult sr = solve(a, b, m);
                REQUIRE(sr.ok);
                CHECK(mat_apply(a, sr.x, m) == b);
            }
        }
    }
}

TEST_CASE("solve: certificates are genuine on unsolvable systems") {
    Rng rng(17);
    RingModulus m = RingModulus::make(5, 3);
    int found = 0;
    for (int trial = 0; trial < 200 && found < 25; ++trial) {
        std::size_t r = 1 + rng.below(4), c = 1 + rng.below(4);
        Matrix a = random_matrix(rng, r, c, m);
        std::vector<std::uint64_t> b(r);
        for (auto& x : b) x = rng.residue(m);
        SolveResult sr = solve(a, b, m);
        if (sr.ok) continue;
        ++found;
        // f * A = 0 and f . b != 0
        std::vector<std::uint64_t> fa(c, 0);
        std::uint64_t fb = 0;
        for (std::size_t i = 0; i < r; ++i) {
            for (std::size_t j = 0; j < c; ++j)
                fa[j] = mod_add(fa[j], mod_mul(sr.certificate[i], a(i, j), m), m);
            fb = mod_add(fb, mod_mul(sr.certificate[i], b[i], m), m);
        }
        for (auto x : fa) CHECK(x == 0);
        CHECK(fb != 0);
    }
    CHECK(found > 0);
}

TEST_CASE("smith decomposition: U M V = D with invertible transforms") {
    Rng rng(19);
    RingModulus m = RingModulus::make(5, 3);
    for (int trial = 0; trial < 30; ++trial) {
        std::size_t r = 1 + rng.below(4), c = 1 + rng.below(4);
        Matrix a = random_matrix(rng, r, c, m);
        SmithDecomposition sd = smith(a, m);
        CHECK(is_invertible(sd.u, m));
        CHECK(is_invertible(sd.v, m));
        Matrix d = mat_mul(sd.u, mat_mul(a, sd.v, m), m);
        for (std::size_t i = 0; i < r; ++i)
            for (std::size_t j = 0; j < c; ++j) {
                if (i == j && i < sd.exponents.size()) {
                    std::uint64_t pe = 1;
                    for (std::uint32_t t = 0; t < sd.exponents[i] && sd.exponents[i] < m.s; ++t)
                        pe *= m.p;
                    CHECK(d(i, j) == (sd.exponents[i] >= m.s ? 0 : pe));
                } else {
                    CHECK(d(i, j) == 0);
                }
            }
    }
}

TEST_CASE("cokernel profile: diagonal example") {
    RingModulus m = RingModulus::make(5, 2);
    Matrix a = Matrix::from_rows(2, 2, {5, 0, 0, 1});
    ModuleProfile pr = cokernel_profile(a, m);
    CHECK(pr.free_rank == 0);
    CHECK(pr.torsion_exponents == std::vector<std::uint32_t>{1});
}

TEST_CASE("subquotient profile: kernel mod image") {
    RingModulus m = RingModulus::make(5, 2);
    // d_out = 0 (2x2), d_in has columns spanning {(5a, b)}: ker/im = Z/5 ⊕ 0
    Matrix d_out(2, 2);
    Matrix d_in = Matrix::from_rows(2, 2, {5, 0, 0, 1});
    ModuleProfile pr = subquotient_profile(d_out, d_in, m);
    CHECK(pr.free_rank == 0);
    CHECK(pr.torsion_exponents == std::vector<std::uint32_t>{1});
}
