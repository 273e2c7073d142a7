#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace demuskin {

// Coefficient ring Z/p^s, p an odd prime. All arithmetic in the library is
// exact arithmetic in this ring; residues are canonical representatives in
// [0, p^s). The modulus is capped so that products fit in 128-bit
// intermediates even after clearing small denominators (factors up to 120).
struct RingModulus {
    std::uint64_t p = 0;   // odd prime
    std::uint32_t s = 0;   // precision exponent, >= 1
    std::uint64_t q = 0;   // p^s

    static RingModulus make(std::uint64_t p, std::uint32_t s);

    // Same p, precision t <= s.
    RingModulus reduced(std::uint32_t t) const;

    bool operator==(const RingModulus&) const = default;
};

inline std::uint64_t mod_add(std::uint64_t a, std::uint64_t b, const RingModulus& m) {
    std::uint64_t r = a + b;
    return r >= m.q ? r - m.q : r;
}

inline std::uint64_t mod_sub(std::uint64_t a, std::uint64_t b, const RingModulus& m) {
    return a >= b ? a - b : a + m.q - b;
}

inline std::uint64_t mod_neg(std::uint64_t a, const RingModulus& m) {
    return a == 0 ? 0 : m.q - a;
}

inline std::uint64_t mod_mul(std::uint64_t a, std::uint64_t b, const RingModulus& m) {
    return static_cast<std::uint64_t>((static_cast<unsigned __int128>(a) * b) % m.q);
}

// Canonical residue of a signed integer.
inline std::uint64_t mod_of(std::int64_t a, const RingModulus& m) {
    std::int64_t r = a % static_cast<std::int64_t>(m.q);
    if (r < 0) r += static_cast<std::int64_t>(m.q);
    return static_cast<std::uint64_t>(r);
}

std::uint64_t mod_pow(std::uint64_t a, std::uint64_t e, const RingModulus& m);

// Inverse of a unit; throws std::invalid_argument if p | a.
std::uint64_t mod_inv(std::uint64_t a, const RingModulus& m);

// p-adic valuation of a canonical residue; val(0) = s by convention.
std::uint32_t val_p(std::uint64_t a, const RingModulus& m);

bool is_unit(std::uint64_t a, const RingModulus& m);

// Dense matrix over Z/p^s, row-major, entries canonical.
class Matrix {
  public:
    Matrix() = default;
    Matrix(std::size_t rows, std::size_t cols)
        : rows_(rows), cols_(cols), a_(rows * cols, 0) {}

    static Matrix identity(std::size_t n);
    static Matrix from_rows(std::size_t rows, std::size_t cols,
                            std::vector<std::uint64_t> entries);

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }

    std::uint64_t& operator()(std::size_t i, std::size_t j) { return a_[i * cols_ + j]; }
    std::uint64_t operator()(std::size_t i, std::size_t j) const { return a_[i * cols_ + j]; }

    const std::vector<std::uint64_t>& data() const { return a_; }

    bool is_zero() const;
    bool is_identity() const;
    bool operator==(const Matrix&) const = default;

  private:
    std::size_t rows_ = 0, cols_ = 0;
    std::vector<std::uint64_t> a_;
};

Matrix mat_mul(const Matrix& a, const Matrix& b, const RingModulus& m);
Matrix mat_add(const Matrix& a, const Matrix& b, const RingModulus& m);
Matrix mat_sub(const Matrix& a, const Matrix& b, const RingModulus& m);
Matrix mat_scale(const Matrix& a, std::uint64_t c, const RingModulus& m);
Matrix mat_pow(const Matrix& a, std::uint64_t e, const RingModulus& m);
Matrix transpose(const Matrix& a);
Matrix reduce(const Matrix& a, const RingModulus& target);

std::vector<std::uint64_t> mat_apply(const Matrix& a, const std::vector<std::uint64_t>& v,
                                     const RingModulus& m);

// Inverse of an invertible matrix (unit determinant mod p); throws if singular.
Matrix mat_inv(const Matrix& a, const RingModulus& m);

bool is_invertible(const Matrix& a, const RingModulus& m);

}  // namespace demuskin
