#include "demuskin/linalg.hpp"

#include <algorithm>

namespace demuskin {

std::uint32_t ModuleProfile::max_order_exponent() const {
    if (free_rank > 0) return precision;
    std::uint32_t r = 0;
    for (auto e : torsion_exponents) r = std::max(r, e);
    return r;
}

ModuleProfile profile_from_orders(std::uint32_t precision, std::vector<std::uint32_t> order_exps) {
    ModuleProfile pr;
    pr.precision = precision;
    for (auto e : order_exps) {
        if (e == 0) continue;
        if (e >= precision)
            pr.free_rank++;
        else
            pr.torsion_exponents.push_back(e);
    }
    std::sort(pr.torsion_exponents.begin(), pr.torsion_exponents.end());
    return pr;
}

SmithDecomposition smith(const Matrix& mat, const RingModulus& m) {
    std::size_t r = mat.rows(), c = mat.cols();
    Matrix d = reduce(mat, m);
    Matrix u = Matrix::identity(r);
    Matrix v = Matrix::identity(c);
    std::size_t steps = std::min(r, c);
    std::vector<std::uint32_t> exps(steps, m.s);
    for (std::size_t k = 0; k < steps; ++k) {
        // pivot of minimal valuation in the trailing block; it divides every
        // other entry there, so a single sweep clears its row and column
        std::uint32_t best = m.s;
        std::size_t pi = k, pj = k;
        for (std::size_t i = k; i < r; ++i)
            for (std::size_t j = k; j < c; ++j) {
                std::uint32_t vv = val_p(d(i, j), m);
                if (vv < best) { best = vv; pi = i; pj = j; }
            }
        if (best == m.s) break;  // trailing block is zero
        if (pi != k) {
            for (std::size_t j = 0; j < c; ++j) std::swap(d(pi, j), d(k, j));
            for (std::size_t j = 0; j < r; ++j) std::swap(u(pi, j), u(k, j));
        }
        if (pj != k) {
            for (std::size_t i = 0; i < r; ++i) std::swap(d(i, pj), d(i, k));
            for (std::size_t i = 0; i < c; ++i) std::swap(v(i, pj), v(i, k));
        }
        std::uint64_t pe = 1;
        for (std::uint32_t t = 0; t < best; ++t) pe *= m.p;
        std::uint64_t unit = mod_inv(d(k, k) / pe, m);
        for (std::size_t j = 0; j < c; ++j) d(k, j) = mod_mul(d(k, j), unit, m);
        for (std::size_t j = 0; j < r; ++j) u(k, j) = mod_mul(u(k, j), unit, m);
        for (std::size_t i = k + 1; i < r; ++i) {
            if (d(i, k) == 0) continue;
            std::uint64_t f = d(i, k) / pe;
            for (std::size_t j = 0; j < c; ++j)
                d(i, j) = mod_sub(d(i, j), mod_mul(f, d(k, j), m), m);
            for (std::size_t j = 0; j < r; ++j)
                u(i, j) = mod_sub(u(i, j), mod_mul(f, u(k, j), m), m);
        }
        for (std::size_t j = k + 1; j < c; ++j) {
            if (d(k, j) == 0) continue;
            std::uint64_t f = d(k, j) / pe;
            for (std::size_t i = 0; i < r; ++i)
                d(i, j) = mod_sub(d(i, j), mod_mul(f, d(i, k), m), m);
            for (std::size_t i = 0; i < c; ++i)
                v(i, j) = mod_sub(v(i, j), mod_mul(f, v(i, k), m), m);
        }
        exps[k] = best;
    }
    return SmithDecomposition{std::move(u), std::move(v), std::move(exps)};
}

namespace {

struct HowellWork {
    Matrix w;  // row span workspace
    Matrix u;  // tracked transform, w = u * w_initial
    std::size_t basis = 0;
};

// Howell normalization with transform tracking. The workspace must carry
// enough zero rows at the bottom for closure rows (cols many suffice).
HowellWork howell_padded(const Matrix& mat, std::size_t extra, const RingModulus& m) {
    std::size_t rows = mat.rows() + extra, cols = mat.cols();
    HowellWork hw;
    hw.w = Matrix(rows, cols);
    for (std::size_t i = 0; i < mat.rows(); ++i)
        for (std::size_t j = 0; j < cols; ++j) hw.w(i, j) = mat(i, j) % m.q;
    hw.u = Matrix::identity(rows);
    Matrix& w = hw.w;
    Matrix& u = hw.u;

    auto row_addmul = [&](std::size_t dst, std::size_t src, std::uint64_t f) {
        for (std::size_t j = 0; j < cols; ++j)
            w(dst, j) = mod_add(w(dst, j), mod_mul(f, w(src, j), m), m);
        for (std::size_t j = 0; j < rows; ++j)
            u(dst, j) = mod_add(u(dst, j), mod_mul(f, u(src, j), m), m);
    };
    auto row_scale = [&](std::size_t i, std::uint64_t c) {
        for (std::size_t j = 0; j < cols; ++j) w(i, j) = mod_mul(w(i, j), c, m);
        for (std::size_t j = 0; j < rows; ++j) u(i, j) = mod_mul(u(i, j), c, m);
    };
    auto row_swap = [&](std::size_t a, std::size_t b) {
        if (a == b) return;
        for (std::size_t j = 0; j < cols; ++j) std::swap(w(a, j), w(b, j));
        for (std::size_t j = 0; j < rows; ++j) std::swap(u(a, j), u(b, j));
    };
    auto row_is_zero = [&](std::size_t i) {
        for (std::size_t j = 0; j < cols; ++j)
            if (w(i, j) != 0) return false;
        return true;
    };

    std::size_t next = 0;
    std::vector<std::pair<std::size_t, std::uint32_t>> pivots;  // (column, valuation)
    for (std::size_t col = 0; col < cols && next < rows; ++col) {
        std::uint32_t best = m.s;
        std::size_t pi = next;
        for (std::size_t i = next; i < rows; ++i) {
            std::uint32_t vv = val_p(w(i, col), m);
            if (vv < best) { best = vv; pi = i; }
        }
        if (best == m.s) continue;
        row_swap(next, pi);
        std::uint64_t pe = 1;
        for (std::uint32_t t = 0; t < best; ++t) pe *= m.p;
        row_scale(next, mod_inv(w(next, col) / pe, m));
        for (std::size_t i = next + 1; i < rows; ++i) {
            if (w(i, col) == 0) continue;
            row_addmul(i, next, mod_neg(w(i, col) / pe, m));
        }
        if (best > 0) {
            // closure row p^{s-best} * pivot row: same row module, pivot
            // entry zero, keeps membership decidable by back-substitution
            for (std::size_t slot = rows; slot-- > next + 1;) {
                if (!row_is_zero(slot)) continue;
                std::uint64_t mult = 1;
                for (std::uint32_t t = 0; t < m.s - best; ++t) mult = mod_mul(mult, m.p, m);
                row_addmul(slot, next, mult);
                row_swap(next + 1, slot);
                break;
            }
        }
        pivots.emplace_back(col, best);
        ++next;
    }
    // canonicalize entries above each pivot, left pivot columns first
    for (std::size_t k = 0; k < pivots.size(); ++k) {
        auto [col, e] = pivots[k];
        std::uint64_t pe = 1;
        for (std::uint32_t t = 0; t < e; ++t) pe *= m.p;
        for (std::size_t i = 0; i < k; ++i) {
            std::uint64_t entry = w(i, col);
            std::uint64_t rem = entry % pe;
            if (entry == rem) continue;
            row_addmul(i, k, mod_neg((entry - rem) / pe, m));
        }
    }
    hw.basis = pivots.size();
    return hw;
}

}  // namespace

HowellForm canonical_form(const Matrix& mat, const RingModulus& m) {
    HowellWork hw = howell_padded(mat, mat.cols(), m);
    std::vector<std::uint32_t> orders;
    for (std::size_t i = 0; i < hw.basis; ++i) {
        for (std::size_t j = 0; j < mat.cols(); ++j)
            if (hw.w(i, j) != 0) { orders.push_back(m.s - val_p(hw.w(i, j), m)); break; }
    }
    HowellForm hf;
    std::size_t out_rows = std::max(mat.rows(), hw.basis);
    hf.padded = out_rows - mat.rows();
    hf.h = Matrix(out_rows, mat.cols());
    for (std::size_t i = 0; i < hw.basis; ++i)
        for (std::size_t j = 0; j < mat.cols(); ++j) hf.h(i, j) = hw.w(i, j);
    // the tracked transform certifies h (zero-extended to the workspace row
    // count) as an invertible transform of mat (likewise zero-extended)
    hf.u = hw.u;
    hf.profile = profile_from_orders(m.s, orders);
    return hf;
}

bool row_member(const HowellForm& hf, const std::vector<std::uint64_t>& v, const RingModulus& m) {
    if (v.size() != hf.h.cols()) throw std::invalid_argument("row_member: dimension mismatch");
    std::vector<std::uint64_t> r = v;
    for (auto& x : r) x %= m.q;
    for (std::size_t i = 0; i < hf.h.rows(); ++i) {
        std::size_t col = 0;
        while (col < hf.h.cols() && hf.h(i, col) == 0) ++col;
        if (col == hf.h.cols()) break;
        if (r[col] == 0) continue;
        std::uint32_t pe_exp = val_p(hf.h(i, col), m);
        if (val_p(r[col], m) < pe_exp) return false;
        std::uint64_t pe = 1;
        for (std::uint32_t t = 0; t < pe_exp; ++t) pe *= m.p;
        std::uint64_t f = r[col] / pe;
        for (std::size_t j = col; j < hf.h.cols(); ++j)
            r[j] = mod_sub(r[j], mod_mul(f, hf.h(i, j), m), m);
    }
    for (auto x : r)
        if (x != 0) return false;
    return true;
}

KernelData kernel(const Matrix& mat, const RingModulus& m) {
    SmithDecomposition sd = smith(mat, m);
    std::size_t c = mat.cols();
    std::size_t steps = sd.exponents.size();
    KernelData kd;
    kd.m = m;
    std::vector<std::vector<std::uint64_t>> gens;
    for (std::size_t j = 0; j < c; ++j) {
        std::uint32_t e = j < steps ? sd.exponents[j] : m.s;  // zero column beyond the diagonal
        if (e == 0) continue;  // unit pivot: no kernel in this coordinate
        std::uint32_t sh = m.s - e;
        std::uint64_t sc = 1;
        for (std::uint32_t t = 0; t < sh; ++t) sc *= m.p;
        std::vector<std::uint64_t> g(c, 0);
        for (std::size_t i = 0; i < c; ++i) g[i] = mod_mul(sd.v(i, j), sc % m.q, m);
        gens.push_back(std::move(g));
        kd.order_exp.push_back(e);
        kd.coord.push_back(j);
        kd.shift.push_back(sh);
    }
    kd.gens = Matrix(gens.size(), c);
    for (std::size_t i = 0; i < gens.size(); ++i)
        for (std::size_t j = 0; j < c; ++j) kd.gens(i, j) = gens[i][j];
    kd.vinv = mat_inv(sd.v, m);
    kd.profile = profile_from_orders(m.s, kd.order_exp);
    return kd;
}

bool KernelData::contains(const std::vector<std::uint64_t>& v) const {
    std::vector<std::uint64_t> w = mat_apply(vinv, v, m);
    std::size_t gi = 0;
    for (std::size_t j = 0; j < w.size(); ++j) {
        bool kernel_coord = gi < coord.size() && coord[gi] == j;
        if (kernel_coord) {
            if (val_p(w[j], m) < shift[gi]) return false;
            ++gi;
        } else if (w[j] != 0) {
            return false;
        }
    }
    return true;
}

std::vector<std::uint64_t> KernelData::coordinates(const std::vector<std::uint64_t>& v) const {
    std::vector<std::uint64_t> w = mat_apply(vinv, v, m);
    std::vector<std::uint64_t> out(coord.size(), 0);
    std::size_t gi = 0;
    for (std::size_t j = 0; j < w.size(); ++j) {
        bool kernel_coord = gi < coord.size() && coord[gi] == j;
        if (kernel_coord) {
            if (val_p(w[j], m) < shift[gi])
                throw std::invalid_argument("KernelData::coordinates: vector not in kernel");
            std::uint64_t pe = 1;
            for (std::uint32_t t = 0; t < shift[gi]; ++t) pe *= m.p;
            std::uint64_t mod_order = 1;
            for (std::uint32_t t = 0; t < order_exp[gi]; ++t) mod_order *= m.p;
            out[gi] = (w[j] / pe) % mod_order;
            ++gi;
        } else if (w[j] != 0) {
            throw std::invalid_argument("KernelData::coordinates: vector not in kernel");
        }
    }
    return out;
}

ModuleProfile cokernel_profile(const Matrix& mat, const RingModulus& m) {
    SmithDecomposition sd = smith(mat, m);
    std::vector<std::uint32_t> orders;
    std::size_t steps = sd.exponents.size();
    for (std::size_t i = 0; i < mat.rows(); ++i)
        orders.push_back(i < steps ? sd.exponents[i] : m.s);
    return profile_from_orders(m.s, orders);
}

SolveResult solve(const Matrix& mat, const std::vector<std::uint64_t>& b, const RingModulus& m) {
    if (b.size() != mat.rows()) throw std::invalid_argument("solve: dimension mismatch");
    SmithDecomposition sd = smith(mat, m);
    std::vector<std::uint64_t> c = mat_apply(sd.u, b, m);
    std::size_t steps = sd.exponents.size();
    SolveResult res;
    std::vector<std::uint64_t> w(mat.cols(), 0);
    for (std::size_t i = 0; i < mat.rows(); ++i) {
        std::uint32_t e = i < steps ? sd.exponents[i] : m.s;
        std::uint32_t vv = val_p(c[i], m);
        if (vv >= e && e < m.s) {
            std::uint64_t pe = 1;
            for (std::uint32_t t = 0; t < e; ++t) pe *= m.p;
            if (i < w.size()) w[i] = c[i] / pe;
            continue;
        }
        if (c[i] == 0) continue;
        // unsolvable at row i: functional p^{s-e} * (row i of U) vanishes on
        // the column module of mat but not on b
        res.ok = false;
        std::uint64_t mult = 1;
        for (std::uint32_t t = 0; t < m.s - e && e < m.s; ++t) mult *= m.p;
        res.certificate.resize(mat.rows());
        for (std::size_t j = 0; j < mat.rows(); ++j)
            res.certificate[j] = mod_mul(sd.u(i, j), mult % m.q, m);
        return res;
    }
    res.ok = true;
    res.x = mat_apply(sd.v, w, m);
    return res;
}

ModuleProfile subquotient_profile(const Matrix& d_out, const Matrix& d_in, const RingModulus& m) {
    if (d_out.cols() != d_in.rows())
        throw std::invalid_argument("subquotient_profile: dimension mismatch");
    KernelData kd = kernel(d_out, m);
    std::size_t t = kd.order_exp.size();
    // present ker/im as the cokernel of [diag(p^{o_i}) | image coordinates]
    Matrix pres(t, t + d_in.cols());
    for (std::size_t i = 0; i < t; ++i) {
        std::uint64_t pe = 1;
        for (std::uint32_t k = 0; k < kd.order_exp[i]; ++k) pe *= m.p;
        pres(i, i) = pe % m.q;
    }
    for (std::size_t j = 0; j < d_in.cols(); ++j) {
        std::vector<std::uint64_t> col(d_in.rows());
        for (std::size_t i = 0; i < d_in.rows(); ++i) col[i] = d_in(i, j);
        std::vector<std::uint64_t> coords = kd.coordinates(col);  // throws if im ⊄ ker
        for (std::size_t i = 0; i < t; ++i) pres(i, t + j) = coords[i];
    }
    return cokernel_profile(pres, m);
}

std::size_t rank_mod_p(const Matrix& mat, const RingModulus& m) {
    RingModulus f = m.reduced(1);
    Matrix w = reduce(mat, f);
    std::size_t rows = w.rows(), cols = w.cols();
    std::size_t r = 0;
    for (std::size_t col = 0; col < cols && r < rows; ++col) {
        std::size_t piv = r;
        while (piv < rows && w(piv, col) == 0) ++piv;
        if (piv == rows) continue;
        for (std::size_t j = 0; j < cols; ++j) std::swap(w(piv, j), w(r, j));
        std::uint64_t c = mod_inv(w(r, col), f);
        for (std::size_t j = 0; j < cols; ++j) w(r, j) = mod_mul(w(r, j), c, f);
        for (std::size_t i = 0; i < rows; ++i) {
            if (i == r || w(i, col) == 0) continue;
            std::uint64_t fct = w(i, col);
            for (std::size_t j = 0; j < cols; ++j)
                w(i, j) = mod_sub(w(i, j), mod_mul(fct, w(r, j), f), f);
        }
        ++r;
    }
    return r;
}

std::uint64_t det_mod_p(const Matrix& mat, const RingModulus& m) {
    if (mat.rows() != mat.cols()) throw std::invalid_argument("det_mod_p: square matrix required");
    RingModulus f = m.reduced(1);
    Matrix w = reduce(mat, f);
    std::uint64_t det = 1;
    std::size_t n = w.rows();
    for (std::size_t col = 0; col < n; ++col) {
        std::size_t piv = col;
        while (piv < n && w(piv, col) == 0) ++piv;
        if (piv == n) return 0;
        if (piv != col) {
            for (std::size_t j = 0; j < n; ++j) std::swap(w(piv, j), w(col, j));
            det = mod_neg(det, f);
        }
        det = mod_mul(det, w(col, col), f);
        std::uint64_t inv = mod_inv(w(col, col), f);
        for (std::size_t i = col + 1; i < n; ++i) {
            if (w(i, col) == 0) continue;
            std::uint64_t fct = mod_mul(w(i, col), inv, f);
            for (std::size_t j = col; j < n; ++j)
                w(i, j) = mod_sub(w(i, j), mod_mul(fct, w(col, j), f), f);
        }
    }
    return det;
}

Matrix nullspace_mod_p(const Matrix& mat, const RingModulus& m) {
    RingModulus f = m.reduced(1);
    Matrix w = reduce(mat, f);
    std::size_t rows = w.rows(), cols = w.cols();
    std::vector<std::size_t> pivot_col;
    std::size_t r = 0;
    for (std::size_t col = 0; col < cols && r < rows; ++col) {
        std::size_t piv = r;
        while (piv < rows && w(piv, col) == 0) ++piv;
        if (piv == rows) continue;
        for (std::size_t j = 0; j < cols; ++j) std::swap(w(piv, j), w(r, j));
        std::uint64_t c = mod_inv(w(r, col), f);
        for (std::size_t j = 0; j < cols; ++j) w(r, j) = mod_mul(w(r, j), c, f);
        for (std::size_t i = 0; i < rows; ++i) {
            if (i == r || w(i, col) == 0) continue;
            std::uint64_t fct = w(i, col);
            for (std::size_t j = 0; j < cols; ++j)
                w(i, j) = mod_sub(w(i, j), mod_mul(fct, w(r, j), f), f);
        }
        pivot_col.push_back(col);
        ++r;
    }
    std::vector<bool> is_pivot(cols, false);
    for (auto c : pivot_col) is_pivot[c] = true;
    Matrix basis(cols - pivot_col.size(), cols);
    std::size_t bi = 0;
    for (std::size_t col = 0; col < cols; ++col) {
        if (is_pivot[col]) continue;
        basis(bi, col) = 1;
        for (std::size_t k = 0; k < pivot_col.size(); ++k)
            basis(bi, pivot_col[k]) = mod_neg(w(k, col), f);
        ++bi;
    }
    return basis;
}

}  // namespace demuskin
