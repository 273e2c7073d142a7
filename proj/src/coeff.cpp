#include "demuskin/coeff.hpp"

#include <set>

#include "demuskin/linalg.hpp"

namespace demuskin {

Matrix LeviData::matrix(std::size_t i) const {
    Matrix g = Matrix::identity(2);
    g(0, 1) = l.at(i) % m.q;
    return g;
}

std::vector<Matrix> LeviData::matrices() const {
    std::vector<Matrix> r;
    for (std::size_t i = 0; i < l.size(); ++i) r.push_back(matrix(i));
    return r;
}

AbelianSystem AbelianSystem::reduced(std::uint32_t t) const {
    AbelianSystem r;
    r.rank = rank;
    r.m = m.reduced(t);
    for (auto& a : actions) r.actions.push_back(reduce(a, r.m));
    return r;
}

AbelianSystem trivial_system(std::size_t rank, std::size_t generators, const RingModulus& m) {
    AbelianSystem s;
    s.rank = rank;
    s.m = m;
    s.actions.assign(generators, Matrix::identity(rank));
    return s;
}

AbelianSystem direct_sum(const AbelianSystem& a, const AbelianSystem& b) {
    if (a.num_generators() != b.num_generators() || !(a.m == b.m))
        throw std::invalid_argument("direct_sum: incompatible systems");
    AbelianSystem s;
    s.rank = a.rank + b.rank;
    s.m = a.m;
    for (std::size_t g = 0; g < a.num_generators(); ++g) {
        Matrix blk(s.rank, s.rank);
        for (std::size_t i = 0; i < a.rank; ++i)
            for (std::size_t j = 0; j < a.rank; ++j) blk(i, j) = a.actions[g](i, j);
        for (std::size_t i = 0; i < b.rank; ++i)
            for (std::size_t j = 0; j < b.rank; ++j)
                blk(a.rank + i, a.rank + j) = b.actions[g](i, j);
        s.actions.push_back(std::move(blk));
    }
    return s;
}

std::uint64_t NilpotentSystem::bracket_of(const std::vector<std::uint64_t>& x,
                                          const std::vector<std::uint64_t>& y) const {
    if (x.size() != m_a || y.size() != m_a)
        throw std::invalid_argument("bracket_of: dimension mismatch");
    unsigned __int128 acc = 0;
    for (std::size_t i = 0; i < m_a; ++i)
        for (std::size_t j = 0; j < m_a; ++j) {
            std::uint64_t b = bracket(i, j);
            if (b == 0) continue;
            acc += static_cast<unsigned __int128>(mod_mul(x[i], y[j], m)) * b % m.q;
        }
    return static_cast<std::uint64_t>(acc % m.q);
}

AbelianSystem NilpotentSystem::ad_system() const {
    AbelianSystem s;
    s.rank = m_a;
    s.m = m;
    s.actions = ad_actions;
    return s;
}

AbelianSystem NilpotentSystem::z_system() const {
    AbelianSystem s;
    s.rank = 1;
    s.m = m;
    for (auto z : z_actions) s.actions.push_back(Matrix::from_rows(1, 1, {z % m.q}));
    return s;
}

AbelianSystem NilpotentSystem::lie_system() const { return direct_sum(ad_system(), z_system()); }

NilpotentSystem NilpotentSystem::reduced(std::uint32_t t) const {
    NilpotentSystem r;
    r.m_a = m_a;
    r.m = m.reduced(t);
    r.bracket = reduce(bracket, r.m);
    for (auto& a : ad_actions) r.ad_actions.push_back(reduce(a, r.m));
    for (auto z : z_actions) r.z_actions.push_back(z % r.m.q);
    return r;
}

AbelianSystem sym_power_twist(const LeviData& levi, unsigned k, int d) {
    const RingModulus& m = levi.m;
    std::size_t rank = k + 1;
    AbelianSystem s;
    s.rank = rank;
    s.m = m;
    // precompute binomials C(j, t) for j <= k
    std::vector<std::vector<std::uint64_t>> binom(rank, std::vector<std::uint64_t>(rank, 0));
    for (std::size_t j = 0; j < rank; ++j) {
        binom[j][0] = 1;
        for (std::size_t t = 1; t <= j; ++t)
            binom[j][t] = mod_add(binom[j - 1][t - 1], t <= j - 1 ? binom[j - 1][t] : 0, m);
    }
    for (std::size_t g = 0; g < levi.l.size(); ++g) {
        std::uint64_t l = levi.l[g] % m.q;
        Matrix a(rank, rank);
        // E_j = e1^{k-j} e2^j maps to sum_t C(j,t) l^{j-t} E_t; det twist is
        // trivial for unipotent Levi matrices (det = 1), any d
        for (std::size_t j = 0; j < rank; ++j) {
            std::uint64_t lp = 1;
            for (std::size_t t = j + 1; t-- > 0;) {
                a(t, j) = mod_mul(binom[j][t], lp, m);
                lp = mod_mul(lp, l, m);
            }
        }
        (void)d;
        s.actions.push_back(std::move(a));
    }
    return s;
}

namespace {

// Checks B(rho_ad(g) x, rho_ad(g) y) = rho_z(g) B(x, y) on all basis pairs.
bool check_equivariance(const NilpotentSystem& sys, std::string* violation) {
    for (std::size_t g = 0; g < sys.num_generators(); ++g) {
        const Matrix& a = sys.ad_actions[g];
        for (std::size_t i = 0; i < sys.m_a; ++i)
            for (std::size_t j = i + 1; j < sys.m_a; ++j) {
                std::vector<std::uint64_t> x(sys.m_a, 0), y(sys.m_a, 0);
                for (std::size_t t = 0; t < sys.m_a; ++t) {
                    x[t] = a(t, i);
                    y[t] = a(t, j);
                }
                std::uint64_t lhs = sys.bracket_of(x, y);
                std::uint64_t rhs = mod_mul(sys.z_actions[g] % sys.m.q, sys.bracket(i, j), sys.m);
                if (lhs != rhs) {
                    if (violation)
                        *violation = "equivariance fails at generator x" + std::to_string(g) +
                                     ", basis pair (E" + std::to_string(i) + ", E" +
                                     std::to_string(j) + ")";
                    return false;
                }
            }
    }
    return true;
}

bool check_antisymmetric(const Matrix& b, const RingModulus& m, std::string* violation) {
    for (std::size_t i = 0; i < b.rows(); ++i)
        for (std::size_t j = 0; j < b.cols(); ++j) {
            if (i == j && b(i, i) != 0) {
                if (violation) *violation = "bracket diagonal nonzero at " + std::to_string(i);
                return false;
            }
            if (b(i, j) != mod_neg(b(j, i), m)) {
                if (violation)
                    *violation = "bracket not antisymmetric at (" + std::to_string(i) + "," +
                                 std::to_string(j) + ")";
                return false;
            }
        }
    return true;
}

// Simultaneous unitriangularizability mod p: intersect the fixed spaces of
// all actions, quotient, recurse.
bool unitriangularizable_mod_p(std::vector<Matrix> actions, const RingModulus& mm) {
    RingModulus f = mm.reduced(1);
    std::size_t dim = actions.empty() ? 0 : actions[0].rows();
    for (auto& a : actions) a = reduce(a, f);
    while (dim > 0) {
        // common fixed space = intersection of ker(a - I)
        Matrix stacked(actions.size() * dim, dim);
        for (std::size_t g = 0; g < actions.size(); ++g)
            for (std::size_t i = 0; i < dim; ++i)
                for (std::size_t j = 0; j < dim; ++j)
                    stacked(g * dim + i, j) =
                        mod_sub(actions[g](i, j), i == j ? 1u : 0u, f);
        Matrix fixed = nullspace_mod_p(stacked, f);
        std::size_t fdim = fixed.rows();
        if (fdim == 0) return false;
        if (fdim == dim) return true;
        // quotient by the fixed space: extend `fixed` to a basis, express the
        // induced action on the complement
        Matrix basis(dim, dim);
        for (std::size_t i = 0; i < fdim; ++i)
            for (std::size_t j = 0; j < dim; ++j) basis(i, j) = fixed(i, j);
        std::size_t have = fdim;
        for (std::size_t e = 0; e < dim && have < dim; ++e) {
            Matrix trial = basis;
            trial(have, e) = 1;
            Matrix top(have + 1, dim);
            for (std::size_t i = 0; i <= have; ++i)
                for (std::size_t j = 0; j < dim; ++j) top(i, j) = trial(i, j);
            if (rank_mod_p(top, f) == have + 1) {
                basis = trial;
                ++have;
            }
        }
        Matrix binv = mat_inv(transpose(basis), f);  // columns of basis^T are the basis vectors
        std::vector<Matrix> quot;
        std::size_t qdim = dim - fdim;
        for (auto& a : actions) {
            Matrix conj = mat_mul(binv, mat_mul(a, transpose(basis), f), f);
            Matrix qa(qdim, qdim);
            for (std::size_t i = 0; i < qdim; ++i)
                for (std::size_t j = 0; j < qdim; ++j) qa(i, j) = conj(fdim + i, fdim + j);
            quot.push_back(std::move(qa));
        }
        actions = std::move(quot);
        dim = qdim;
    }
    return true;
}

bool generator_orders_ok(const std::vector<Matrix>& actions, const RingModulus& mm) {
    RingModulus f = mm.reduced(1);
    for (auto& a : actions) {
        Matrix ap = mat_pow(reduce(a, f), f.p, f);
        if (!ap.is_identity()) return false;
    }
    return true;
}

}  // namespace

NilpotentSystem g2_short_root(const LeviData& levi, std::optional<std::int64_t> b03_opt,
                              std::optional<std::int64_t> b12_opt) {
    const RingModulus& m = levi.m;
    if (m.p < 5)
        throw std::invalid_argument("g2_short_root: p >= 5 required");
    std::uint64_t b03 = mod_of(b03_opt.value_or(kG2ShortB03), m);
    std::uint64_t b12 = mod_of(b12_opt.value_or(kG2ShortB12), m);
    if (!is_unit(b03, m) || !is_unit(b12, m))
        throw std::invalid_argument("g2_short_root: bracket constants must be units");
    NilpotentSystem sys;
    sys.m = m;
    sys.m_a = 4;
    sys.bracket = Matrix(4, 4);
    sys.bracket(0, 3) = b03;
    sys.bracket(3, 0) = mod_neg(b03, m);
    sys.bracket(1, 2) = b12;
    sys.bracket(2, 1) = mod_neg(b12, m);
    sys.ad_actions = sym_power_twist(levi, 3, -2).actions;
    sys.z_actions.assign(levi.l.size(), 1);
    std::string violation;
    if (!check_equivariance(sys, &violation))
        throw std::invalid_argument("g2_short_root: " + violation);
    return sys;
}

AbelianSystem sym_cube_det_twist(const std::vector<Matrix>& levi2x2, const RingModulus& m) {
    AbelianSystem s;
    s.rank = 4;
    s.m = m;
    for (auto& g : levi2x2) {
        if (g.rows() != 2 || g.cols() != 2)
            throw std::invalid_argument("sym_cube_det_twist: 2x2 Levi matrices required");
        std::uint64_t a = g(0, 0), b = g(0, 1), c = g(1, 0), d = g(1, 1);
        std::uint64_t det = mod_sub(mod_mul(a, d, m), mod_mul(b, c, m), m);
        if (!is_unit(det, m))
            throw std::invalid_argument("sym_cube_det_twist: Levi matrix not invertible");
        // column j of sym³(g): image of e1^{3-j} e2^j = (a e1 + c e2)^{3-j} (b e1 + d e2)^j
        Matrix s3(4, 4);
        for (int j = 0; j <= 3; ++j) {
            // coefficient of e1^{3-t} e2^t: sum over how many of the (3-j)
            // first factors and the j second factors contribute e2
            std::vector<std::uint64_t> poly(4, 0);
            auto binom = [&](int nn, int kk) {
                std::uint64_t r = 1;
                for (int t = 0; t < kk; ++t) r = mod_mul(r, mod_of(nn - t, m), m);
                for (int t = 2; t <= kk; ++t) r = mod_mul(r, mod_inv(t, m), m);
                return r;
            };
            for (int u = 0; u <= 3 - j; ++u)
                for (int v = 0; v <= j; ++v) {
                    // C(3-j, u) a^{3-j-u} c^u * C(j, v) b^{j-v} d^v on e1^{3-u-v} e2^{u+v}
                    std::uint64_t coeff = binom(3 - j, u);
                    coeff = mod_mul(coeff, mod_pow(a, 3 - j - u, m), m);
                    coeff = mod_mul(coeff, mod_pow(c, u, m), m);
                    coeff = mod_mul(coeff, binom(j, v), m);
                    coeff = mod_mul(coeff, mod_pow(b, j - v, m), m);
                    coeff = mod_mul(coeff, mod_pow(d, v, m), m);
                    poly[u + v] = mod_add(poly[u + v], coeff, m);
                }
            for (int t = 0; t <= 3; ++t) s3(t, j) = poly[t];
        }
        std::uint64_t det_inv2 = mod_inv(mod_mul(det, det, m), m);
        s.actions.push_back(mat_scale(s3, det_inv2, m));
    }
    return s;
}

NilpotentSystem g2_short_root_general(const std::vector<Matrix>& levi2x2, const RingModulus& m,
                                      std::optional<std::int64_t> b03_opt,
                                      std::optional<std::int64_t> b12_opt) {
    if (m.p < 5) throw std::invalid_argument("g2_short_root_general: p >= 5 required");
    std::uint64_t b03 = mod_of(b03_opt.value_or(kG2ShortB03), m);
    std::uint64_t b12 = mod_of(b12_opt.value_or(kG2ShortB12), m);
    if (!is_unit(b03, m) || !is_unit(b12, m))
        throw std::invalid_argument("g2_short_root_general: bracket constants must be units");
    NilpotentSystem sys;
    sys.m = m;
    sys.m_a = 4;
    sys.bracket = Matrix(4, 4);
    sys.bracket(0, 3) = b03;
    sys.bracket(3, 0) = mod_neg(b03, m);
    sys.bracket(1, 2) = b12;
    sys.bracket(2, 1) = mod_neg(b12, m);
    sys.ad_actions = sym_cube_det_twist(levi2x2, m).actions;
    for (auto& g : levi2x2) {
        std::uint64_t det = mod_sub(mod_mul(g(0, 0), g(1, 1), m), mod_mul(g(0, 1), g(1, 0), m), m);
        sys.z_actions.push_back(mod_inv(det, m));
    }
    std::string violation;
    if (!check_equivariance(sys, &violation))
        throw std::invalid_argument("g2_short_root_general: " + violation);
    return sys;
}

NilpotentSystem g2_long_heisenberg_general(const std::vector<Matrix>& levi2x2,
                                           const RingModulus& m) {
    NilpotentSystem sys;
    sys.m = m;
    sys.m_a = 2;
    sys.bracket = Matrix(2, 2);
    sys.bracket(0, 1) = 1;
    sys.bracket(1, 0) = mod_neg(1, m);
    for (auto& g : levi2x2) {
        if (g.rows() != 2 || g.cols() != 2 || !is_invertible(g, m))
            throw std::invalid_argument("g2_long_heisenberg_general: invertible 2x2 required");
        sys.ad_actions.push_back(reduce(g, m));
        sys.z_actions.push_back(
            mod_sub(mod_mul(g(0, 0), g(1, 1), m), mod_mul(g(0, 1), g(1, 0), m), m));
    }
    return sys;
}

NilpotentSystem g2_long_heisenberg(const LeviData& levi) {
    const RingModulus& m = levi.m;
    NilpotentSystem sys;
    sys.m = m;
    sys.m_a = 2;
    sys.bracket = Matrix(2, 2);
    sys.bracket(0, 1) = 1;
    sys.bracket(1, 0) = mod_neg(1, m);
    sys.ad_actions = levi.matrices();
    sys.z_actions.assign(levi.l.size(), 1);
    return sys;
}

NilpotentSystem generic_heisenberg(std::size_t m_a, Matrix bracket,
                                   std::vector<Matrix> ad_actions,
                                   std::vector<std::uint64_t> z_actions, const RingModulus& m) {
    NilpotentSystem sys;
    sys.m = m;
    sys.m_a = m_a;
    sys.bracket = reduce(bracket, m);
    sys.ad_actions = std::move(ad_actions);
    for (auto& a : sys.ad_actions) a = reduce(a, m);
    sys.z_actions = std::move(z_actions);
    for (auto& z : sys.z_actions) z %= m.q;
    if (sys.bracket.rows() != m_a || sys.bracket.cols() != m_a)
        throw std::invalid_argument("generic_heisenberg: bracket shape mismatch");
    if (sys.z_actions.size() != sys.ad_actions.size())
        throw std::invalid_argument("generic_heisenberg: z_actions count mismatch");
    std::string violation;
    if (!check_antisymmetric(sys.bracket, m, &violation))
        throw std::invalid_argument("generic_heisenberg: " + violation);
    for (auto& a : sys.ad_actions)
        if (a.rows() != m_a || a.cols() != m_a || !is_invertible(a, m))
            throw std::invalid_argument("generic_heisenberg: ad action not invertible");
    for (auto z : sys.z_actions)
        if (!is_unit(z, m))
            throw std::invalid_argument("generic_heisenberg: z action not a unit");
    if (!check_equivariance(sys, &violation))
        throw std::invalid_argument("generic_heisenberg: " + violation);
    return sys;
}

ValidationReport validate_system(const AbelianSystem& sys) {
    ValidationReport r;
    r.actions_invertible = true;
    for (auto& a : sys.actions)
        if (a.rows() != sys.rank || a.cols() != sys.rank || !is_invertible(a, sys.m)) {
            r.actions_invertible = false;
            r.first_violation = "action not invertible";
        }
    if (!r.actions_invertible) return r;
    r.unitriangularizable = unitriangularizable_mod_p(sys.actions, sys.m);
    if (!r.unitriangularizable && r.first_violation.empty())
        r.first_violation = "no common fixed vector mod p";
    r.generator_order_ok = generator_orders_ok(sys.actions, sys.m);
    if (!r.generator_order_ok && r.first_violation.empty())
        r.first_violation = "some rho(x_i)^p != I mod p";
    return r;
}

ValidationReport validate_system(const NilpotentSystem& sys) {
    ValidationReport r;
    r.actions_invertible = true;
    for (auto& a : sys.ad_actions)
        if (a.rows() != sys.m_a || a.cols() != sys.m_a || !is_invertible(a, sys.m))
            r.actions_invertible = false;
    for (auto z : sys.z_actions)
        if (!is_unit(z, sys.m)) r.actions_invertible = false;
    if (!r.actions_invertible) {
        r.first_violation = "action not invertible";
        return r;
    }
    r.bracket_antisymmetric = check_antisymmetric(sys.bracket, sys.m, &r.first_violation);
    r.equivariant = check_equivariance(sys, r.first_violation.empty() ? &r.first_violation : nullptr);
    auto graded = sys.lie_system();
    r.unitriangularizable = unitriangularizable_mod_p(graded.actions, sys.m);
    if (!r.unitriangularizable && r.first_violation.empty())
        r.first_violation = "no common fixed vector mod p";
    r.generator_order_ok = generator_orders_ok(graded.actions, sys.m);
    if (!r.generator_order_ok && r.first_violation.empty())
        r.first_violation = "some rho(x_i)^p != I mod p";
    return r;
}

bool exhaustive_p_group_check(const std::vector<Matrix>& actions, const RingModulus& m,
                              std::size_t max_order) {
    std::set<std::vector<std::uint64_t>> seen;
    std::vector<Matrix> frontier;
    std::size_t dim = actions.empty() ? 1 : actions[0].rows();
    Matrix id = Matrix::identity(dim);
    seen.insert(id.data());
    frontier.push_back(id);
    while (!frontier.empty()) {
        std::vector<Matrix> next;
        for (auto& g : frontier)
            for (auto& a : actions) {
                Matrix h = mat_mul(g, a, m);
                if (seen.insert(h.data()).second) {
                    next.push_back(h);
                    if (seen.size() > max_order)
                        throw std::invalid_argument("exhaustive_p_group_check: group too large");
                }
            }
        frontier = std::move(next);
    }
    std::size_t order = seen.size();
    while (order % m.p == 0) order /= m.p;
    return order == 1;
}

}  // namespace demuskin
