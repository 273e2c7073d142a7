#include "demuskin/zmod.hpp"

namespace demuskin {

namespace {

bool is_prime_u64(std::uint64_t n) {
    if (n < 2) return false;
    for (std::uint64_t d = 2; d * d <= n; ++d)
        if (n % d == 0) return false;
    return true;
}

}  // namespace

RingModulus RingModulus::make(std::uint64_t p, std::uint32_t s) {
    if (s == 0) throw std::invalid_argument("RingModulus: precision s must be >= 1");
    if (p < 3 || p % 2 == 0 || !is_prime_u64(p))
        throw std::invalid_argument("RingModulus: p must be an odd prime, got " + std::to_string(p));
    unsigned __int128 q = 1;
    for (std::uint32_t i = 0; i < s; ++i) {
        q *= p;
        if (q >= (static_cast<unsigned __int128>(1) << 57))
            throw std::invalid_argument("RingModulus: p^s exceeds the 2^57 exact-integer range");
    }
    return RingModulus{p, s, static_cast<std::uint64_t>(q)};
}

RingModulus RingModulus::reduced(std::uint32_t t) const {
    if (t == 0 || t > s) throw std::invalid_argument("RingModulus::reduced: bad precision");
    std::uint64_t qq = 1;
    for (std::uint32_t i = 0; i < t; ++i) qq *= p;
    return RingModulus{p, t, qq};
}

std::uint64_t mod_pow(std::uint64_t a, std::uint64_t e, const RingModulus& m) {
    std::uint64_t r = 1 % m.q;
    a %= m.q;
    while (e) {
        if (e & 1) r = mod_mul(r, a, m);
        a = mod_mul(a, a, m);
        e >>= 1;
    }
    return r;
}

std::uint64_t mod_inv(std::uint64_t a, const RingModulus& m) {
    a %= m.q;
    if (a % m.p == 0)
        throw std::invalid_argument("mod_inv: not a unit mod p^s");
    // extended Euclid on (a, q)
    std::int64_t t = 0, newt = 1;
    std::int64_t r = static_cast<std::int64_t>(m.q), newr = static_cast<std::int64_t>(a);
    while (newr != 0) {
        std::int64_t quot = r / newr;
        std::int64_t tmp = t - quot * newt;
        t = newt; newt = tmp;
        tmp = r - quot * newr;
        r = newr; newr = tmp;
    }
    if (t < 0) t += static_cast<std::int64_t>(m.q);
    return static_cast<std::uint64_t>(t);
}

std::uint32_t val_p(std::uint64_t a, const RingModulus& m) {
    if (a == 0) return m.s;
    std::uint32_t v = 0;
    while (a % m.p == 0) { a /= m.p; ++v; }
    return v;
}

bool is_unit(std::uint64_t a, const RingModulus& m) { return (a % m.p) != 0; }

Matrix Matrix::identity(std::size_t n) {
    Matrix r(n, n);
    for (std::size_t i = 0; i < n; ++i) r(i, i) = 1;
    return r;
}

Matrix Matrix::from_rows(std::size_t rows, std::size_t cols, std::vector<std::uint64_t> entries) {
    if (entries.size() != rows * cols)
        throw std::invalid_argument("Matrix::from_rows: entry count mismatch");
    Matrix r(rows, cols);
    r.a_ = std::move(entries);
    return r;
}

bool Matrix::is_zero() const {
    for (auto x : a_) if (x != 0) return false;
    return true;
}

bool Matrix::is_identity() const {
    if (rows_ != cols_) return false;
    for (std::size_t i = 0; i < rows_; ++i)
        for (std::size_t j = 0; j < cols_; ++j)
            if ((*this)(i, j) != (i == j ? 1u : 0u)) return false;
    return true;
}

Matrix mat_mul(const Matrix& a, const Matrix& b, const RingModulus& m) {
    if (a.cols() != b.rows()) throw std::invalid_argument("mat_mul: dimension mismatch");
    Matrix r(a.rows(), b.cols());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t k = 0; k < a.cols(); ++k) {
            std::uint64_t aik = a(i, k);
            if (aik == 0) continue;
            for (std::size_t j = 0; j < b.cols(); ++j)
                r(i, j) = mod_add(r(i, j), mod_mul(aik, b(k, j), m), m);
        }
    return r;
}

Matrix mat_add(const Matrix& a, const Matrix& b, const RingModulus& m) {
    if (a.rows() != b.rows() || a.cols() != b.cols())
        throw std::invalid_argument("mat_add: dimension mismatch");
    Matrix r(a.rows(), a.cols());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j) r(i, j) = mod_add(a(i, j), b(i, j), m);
    return r;
}

Matrix mat_sub(const Matrix& a, const Matrix& b, const RingModulus& m) {
    if (a.rows() != b.rows() || a.cols() != b.cols())
        throw std::invalid_argument("mat_sub: dimension mismatch");
    Matrix r(a.rows(), a.cols());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j) r(i, j) = mod_sub(a(i, j), b(i, j), m);
    return r;
}

Matrix mat_scale(const Matrix& a, std::uint64_t c, const RingModulus& m) {
    Matrix r(a.rows(), a.cols());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j) r(i, j) = mod_mul(a(i, j), c, m);
    return r;
}

Matrix mat_pow(const Matrix& a, std::uint64_t e, const RingModulus& m) {
    if (a.rows() != a.cols()) throw std::invalid_argument("mat_pow: square matrix required");
    Matrix r = Matrix::identity(a.rows());
    Matrix base = a;
    while (e) {
        if (e & 1) r = mat_mul(r, base, m);
        base = mat_mul(base, base, m);
        e >>= 1;
    }
    return r;
}

Matrix transpose(const Matrix& a) {
    Matrix r(a.cols(), a.rows());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j) r(j, i) = a(i, j);
    return r;
}

Matrix reduce(const Matrix& a, const RingModulus& target) {
    Matrix r(a.rows(), a.cols());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j) r(i, j) = a(i, j) % target.q;
    return r;
}

std::vector<std::uint64_t> mat_apply(const Matrix& a, const std::vector<std::uint64_t>& v,
                                     const RingModulus& m) {
    if (a.cols() != v.size()) throw std::invalid_argument("mat_apply: dimension mismatch");
    std::vector<std::uint64_t> r(a.rows(), 0);
    for (std::size_t i = 0; i < a.rows(); ++i) {
        unsigned __int128 acc = 0;
        for (std::size_t j = 0; j < a.cols(); ++j)
            acc += static_cast<unsigned __int128>(a(i, j)) * v[j] % m.q;
        r[i] = static_cast<std::uint64_t>(acc % m.q);
    }
    return r;
}

Matrix mat_inv(const Matrix& a, const RingModulus& m) {
    if (a.rows() != a.cols()) throw std::invalid_argument("mat_inv: square matrix required");
    std::size_t n = a.rows();
    Matrix w = a;
    Matrix inv = Matrix::identity(n);
    for (std::size_t col = 0; col < n; ++col) {
        // pivot on a unit entry; a matrix invertible mod p^s has one in every column step
        std::size_t piv = col;
        while (piv < n && !is_unit(w(piv, col), m)) ++piv;
        if (piv == n) throw std::invalid_argument("mat_inv: matrix not invertible mod p^s");
        if (piv != col) {
            for (std::size_t j = 0; j < n; ++j) {
                std::swap(w(piv, j), w(col, j));
                std::swap(inv(piv, j), inv(col, j));
            }
        }
        std::uint64_t c = mod_inv(w(col, col), m);
        for (std::size_t j = 0; j < n; ++j) {
            w(col, j) = mod_mul(w(col, j), c, m);
            inv(col, j) = mod_mul(inv(col, j), c, m);
        }
        for (std::size_t i = 0; i < n; ++i) {
            if (i == col || w(i, col) == 0) continue;
            std::uint64_t f = w(i, col);
            for (std::size_t j = 0; j < n; ++j) {
                w(i, j) = mod_sub(w(i, j), mod_mul(f, w(col, j), m), m);
                inv(i, j) = mod_sub(inv(i, j), mod_mul(f, inv(col, j), m), m);
            }
        }
    }
    return inv;
}

bool is_invertible(const Matrix& a, const RingModulus& m) {
    if (a.rows() != a.cols()) return false;
    try {
        mat_inv(a, m);
        return true;
    } catch (const std::invalid_argument&) {
        return false;
    }
}

}  // namespace demuskin
