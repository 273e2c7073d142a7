#include "demuskin/report.hpp"

#include <chrono>

namespace demuskin {

using nlohmann::json;

RunConfig RunConfig::from_json(const json& j) {
    RunConfig c;
    auto get = [&](const char* key, auto& field) {
        if (j.contains(key)) field = j.at(key).get<std::decay_t<decltype(field)>>();
    };
    get("p", c.p);
    get("s", c.s);
    get("n", c.n);
    get("q_exponent", c.q_exponent);
    get("levi", c.levi);
    get("system", c.system);
    get("rank", c.rank);
    get("m_a", c.m_a);
    get("bracket", c.bracket);
    get("ad_actions", c.ad_actions);
    get("z_actions", c.z_actions);
    get("seed", c.seed);
    get("trials", c.trials);
    get("target_precision", c.target_precision);
    get("sweep_p", c.sweep_p);
    get("max_precision", c.max_precision);
    return c;
}

json RunConfig::to_json() const {
    json j{{"p", p},
           {"s", s},
           {"n", n},
           {"q_exponent", q_exponent},
           {"levi", levi},
           {"system", system},
           {"rank", rank},
           {"seed", seed},
           {"trials", trials},
           {"target_precision", target_precision},
           {"sweep_p", sweep_p},
           {"max_precision", max_precision}};
    if (system == "custom") {
        j["m_a"] = m_a;
        j["bracket"] = bracket;
        j["ad_actions"] = ad_actions;
        j["z_actions"] = z_actions;
    }
    return j;
}

RingModulus RunConfig::modulus() const { return RingModulus::make(p, s); }

std::uint64_t RunConfig::q_value() const {
    std::uint64_t q = 1;
    for (std::uint32_t i = 0; i < q_exponent; ++i) q *= p;
    return q;
}

DemuskinPresentation RunConfig::presentation() const {
    if (n < 2 || n % 2 != 0)
        throw std::invalid_argument("config: n must be even and >= 2");
    if (q_exponent < 1) throw std::invalid_argument("config: q_exponent must be >= 1");
    return build_relator(n, q_value());
}

LeviData RunConfig::levi_data() const {
    RingModulus m = modulus();
    std::size_t g = static_cast<std::size_t>(n) + 2;
    std::vector<std::uint64_t> l(g, 0);
    if (!levi.empty()) {
        if (levi.size() != g)
            throw std::invalid_argument("config: levi must have n+2 entries");
        for (std::size_t i = 0; i < g; ++i) l[i] = mod_of(levi[i], m);
    }
    return LeviData{m, l};
}

NilpotentSystem RunConfig::nilpotent_system() const {
    RingModulus m = modulus();
    if (system == "g2-short") {
        if (p < 5) throw std::invalid_argument("config: g2-short requires p >= 5");
        return g2_short_root(levi_data());
    }
    if (system == "g2-long-heisenberg") return g2_long_heisenberg(levi_data());
    if (system == "custom") {
        std::size_t g = static_cast<std::size_t>(n) + 2;
        if (ad_actions.size() != g || z_actions.size() != g)
            throw std::invalid_argument("config: custom system needs n+2 actions");
        Matrix b(m_a, m_a);
        if (bracket.size() != m_a)
            throw std::invalid_argument("config: bracket must be m_a x m_a");
        for (std::size_t i = 0; i < m_a; ++i) {
            if (bracket[i].size() != m_a)
                throw std::invalid_argument("config: bracket must be m_a x m_a");
            for (std::size_t j = 0; j < m_a; ++j) b(i, j) = mod_of(bracket[i][j], m);
        }
        std::vector<Matrix> acts;
        for (auto& rows : ad_actions) {
            Matrix a(m_a, m_a);
            if (rows.size() != m_a)
                throw std::invalid_argument("config: ad action must be m_a x m_a");
            for (std::size_t i = 0; i < m_a; ++i) {
                if (rows[i].size() != m_a)
                    throw std::invalid_argument("config: ad action must be m_a x m_a");
                for (std::size_t j = 0; j < m_a; ++j) a(i, j) = mod_of(rows[i][j], m);
            }
            acts.push_back(std::move(a));
        }
        std::vector<std::uint64_t> z;
        for (auto v : z_actions) z.push_back(mod_of(v, m));
        return generic_heisenberg(m_a, b, acts, z, m);
    }
    throw std::invalid_argument("config: system '" + system + "' is not a nilpotent system");
}

AbelianSystem RunConfig::abelian_system() const {
    RingModulus m = modulus();
    std::size_t g = static_cast<std::size_t>(n) + 2;
    if (system == "trivial") return trivial_system(rank, g, m);
    if (system == "sym3") return sym_power_twist(levi_data(), 3, -2);
    return nilpotent_system().lie_system();
}

json conventions_record() {
    return json{
        {"commutator", "(x,y) = x^-1 y^-1 x y"},
        {"d1_sign", "d1(v)_i = rho(x_i)v - v"},
        {"bracket_constants", {{"b03", kG2ShortB03}, {"b12", kG2ShortB12}}},
        {"basis_order", "generator-major within root-height blocks, E0 = e1^3 block first"},
        {"power_formula",
         "monomial coordinates (l; u0..u3; u4); z(g^q) = q*u4 + P*l*(u2^2 - 3*u1*u3) - "
         "(3/2)*W*l^3*u3^2 with P = (q-1)q(q+1)/6, W = (q-1)q(q+1)(3q^2-2)/60"},
    };
}

json profile_to_json(const ModuleProfile& p) {
    return json{{"free_rank", p.free_rank},
                {"torsion_exponents", p.torsion_exponents},
                {"dim_mod_p", p.dim_mod_p()}};
}

namespace {

json base_report(const char* command, const RunConfig& cfg) {
    return json{{"command", command},
                {"version", kVersion},
                {"config", cfg.to_json()},
                {"conventions", conventions_record()}};
}

struct Timer {
    std::chrono::steady_clock::time_point t0 = std::chrono::steady_clock::now();
    double ms() const {
        return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0)
            .count();
    }
};

json validation_to_json(const ValidationReport& v) {
    return json{{"unitriangularizable_mod_p", v.unitriangularizable},
                {"actions_invertible", v.actions_invertible},
                {"bracket_antisymmetric", v.bracket_antisymmetric},
                {"equivariant", v.equivariant},
                {"generator_order_ok", v.generator_order_ok},
                {"first_violation", v.first_violation},
                {"ok", v.ok()}};
}

}  // namespace

std::vector<std::uint64_t> random_levi(Rng& rng, const RingModulus& m, std::size_t count) {
    std::vector<std::uint64_t> l(count);
    for (auto& x : l) x = rng.residue(m);
    return l;
}

Cochain1 random_mod_p_cocycle(const NilpotentSystem& sys, const DemuskinPresentation& pres,
                              Rng& rng) {
    NilpotentSystem sp = sys.m.s == 1 ? sys : sys.reduced(1);
    const RingModulus mp = sp.m;
    std::size_t g = sp.num_generators();
    Matrix d2_ad = d2_matrix(pres, sp.ad_system());
    Matrix d2_z = d2_matrix(pres, sp.z_system());
    Matrix zbasis = nullspace_mod_p(d2_ad, mp);
    Matrix ybasis = nullspace_mod_p(d2_z, mp);
    for (int tries = 0; tries < 4096; ++tries) {
        std::vector<std::uint64_t> x(d2_ad.cols(), 0);
        for (std::size_t i = 0; i < zbasis.rows(); ++i) {
            std::uint64_t c = rng.residue(mp);
            for (std::size_t j = 0; j < x.size(); ++j)
                x[j] = mod_add(x[j], mod_mul(c, zbasis(i, j), mp), mp);
        }
        Cochain1 xc = cochain_from_ad_flat(x, g, sp.m_a);
        std::uint64_t qx = q_form(sp, pres, xc);
        SolveResult sr = solve(d2_z, {mod_neg(qx, mp)}, mp);
        if (!sr.ok) continue;
        // particular y plus a random element of ker d2_z
        std::vector<std::uint64_t> y = sr.x;
        for (std::size_t i = 0; i < ybasis.rows(); ++i) {
            std::uint64_t c = rng.residue(mp);
            for (std::size_t j = 0; j < g; ++j)
                y[j] = mod_add(y[j], mod_mul(c, ybasis(i, j), mp), mp);
        }
        for (std::size_t j = 0; j < g; ++j) xc.values[j].z = y[j];
        if (!d2_nilpotent(sp, pres, xc).is_zero())
            throw std::logic_error("random_mod_p_cocycle: certification failed");
        return xc;
    }
    throw std::invalid_argument("random_mod_p_cocycle: no cocycle found (degenerate system)");
}

CommandResult cmd_cohomology(const RunConfig& cfg) {
    Timer timer;
    json rep = base_report("cohomology", cfg);
    AbelianSystem sys = cfg.abelian_system();
    DemuskinPresentation pres = cfg.presentation();
    AbelianComplex cx = build_complex(pres, sys);
    CohomologyProfiles h = cohomology(cx);
    rep["results"] = {{"h0", profile_to_json(h.h0)},
                      {"h1", profile_to_json(h.h1)},
                      {"h2", profile_to_json(h.h2)},
                      {"rank", sys.rank}};
    bool ok = true;
    if (cfg.s == 1) {
        std::int64_t euler = static_cast<std::int64_t>(h.h0.dim_mod_p()) -
                             static_cast<std::int64_t>(h.h1.dim_mod_p()) +
                             static_cast<std::int64_t>(h.h2.dim_mod_p());
        std::int64_t expect = -static_cast<std::int64_t>(cfg.n) * static_cast<std::int64_t>(sys.rank);
        rep["results"]["euler_characteristic"] = euler;
        rep["results"]["euler_expected"] = expect;
        ok = euler == expect;
    }
    rep["verdicts"] = {{"ok", ok}};
    rep["timing_ms"] = timer.ms();
    return {rep, ok ? 0 : 1};
}

CommandResult cmd_mr2(const RunConfig& cfg) {
    Timer timer;
    json rep = base_report("mr2", cfg);
    DemuskinPresentation pres = cfg.presentation();
    std::vector<std::uint64_t> ps = cfg.sweep_p.empty() ? std::vector<std::uint64_t>{cfg.p}
                                                        : cfg.sweep_p;
    bool all_ok = true;
    json instances = json::array();
    for (auto pv : ps) {
        RingModulus m = RingModulus::make(pv, 1);
        for (std::uint32_t t = 0; t < std::max<std::uint32_t>(cfg.trials, 1); ++t) {
            Rng rng(cfg.seed + 1000003ULL * pv + t);
            RunConfig inst = cfg;
            inst.p = pv;
            inst.s = 1;
            NilpotentSystem sys;
            std::vector<std::uint64_t> l;
            if (cfg.system == "custom") {
                sys = inst.nilpotent_system();
            } else {
                l = random_levi(rng, m, static_cast<std::size_t>(cfg.n) + 2);
                LeviData levi{m, l};
                sys = cfg.system == "g2-long-heisenberg" ? g2_long_heisenberg(levi)
                                                         : g2_short_root(levi);
            }
            GramReport gr = gram_matrix(sys, pres);
            all_ok = all_ok && gr.mr2_verdict;
            instances.push_back(json{{"p", pv},
                                     {"levi", l},
                                     {"anti_triangular", gr.anti_triangular},
                                     {"determinant_mod_p", gr.determinant},
                                     {"mr2", gr.mr2_verdict}});
            if (cfg.system == "custom") break;  // a custom instance has no levi sweep
        }
    }
    rep["results"] = {{"instances", instances}};
    rep["verdicts"] = {{"ok", all_ok}};
    rep["timing_ms"] = timer.ms();
    return {rep, all_ok ? 0 : 1};
}

CommandResult cmd_gram(const RunConfig& cfg) {
    Timer timer;
    json rep = base_report("gram", cfg);
    DemuskinPresentation pres = cfg.presentation();
    NilpotentSystem sys = cfg.nilpotent_system();
    GramReport gr = gram_matrix(sys, pres);
    json grid = json::array();
    for (std::size_t i = 0; i < gr.gram.rows(); ++i) {
        json row = json::array();
        for (std::size_t j = 0; j < gr.gram.cols(); ++j) row.push_back(gr.gram(i, j));
        grid.push_back(row);
    }
    json blocks = json::array();
    for (auto& r : gr.block_nonzero) {
        json row = json::array();
        for (bool b : r) row.push_back(b);
        blocks.push_back(row);
    }
    rep["results"] = {{"gram_mod_p", grid},
                      {"block_nonzero", blocks},
                      {"anti_triangular", gr.anti_triangular},
                      {"determinant_mod_p", gr.determinant},
                      {"mr2", gr.mr2_verdict}};
    rep["verdicts"] = {{"ok", gr.mr2_verdict}};
    rep["timing_ms"] = timer.ms();
    return {rep, gr.mr2_verdict ? 0 : 1};
}

CommandResult cmd_power_check(const RunConfig& cfg) {
    Timer timer;
    json rep = base_report("power-check", cfg);
    RingModulus m = cfg.modulus();
    UnipotentModel model = g2_short_model(m);
    Rng rng(cfg.seed);
    std::size_t closed_fail = 0, order_fail = 0;
    std::uint32_t trials = std::max<std::uint32_t>(cfg.trials, 1);
    for (std::uint32_t t = 0; t < trials; ++t) {
        GroupElement g;
        g.levi_l = rng.residue(m);
        g.u.ad = {rng.residue(m), rng.residue(m), rng.residue(m), rng.residue(m)};
        g.u.z = rng.residue(m);
        std::uint64_t q = 1 + rng.below(100);
        if (!(power_closed_form(g, q, m) == power_iterated(model, g, q))) ++closed_fail;
        // order check mod p
        RingModulus mp = m.reduced(1);
        UnipotentModel model_p = g2_short_model(mp);
        GroupElement gp{g.levi_l % mp.q,
                        LieValue{{g.u.ad[0] % mp.q, g.u.ad[1] % mp.q, g.u.ad[2] % mp.q,
                                  g.u.ad[3] % mp.q},
                                 g.u.z % mp.q}};
        if (!(power_iterated(model_p, gp, m.p) == model_p.identity())) ++order_fail;
    }
    bool ok = closed_fail == 0 && order_fail == 0;
    rep["results"] = {{"trials", trials},
                      {"closed_form_mismatches", closed_fail},
                      {"order_p_failures", order_fail}};
    rep["verdicts"] = {{"ok", ok}};
    rep["timing_ms"] = timer.ms();
    return {rep, ok ? 0 : 1};
}

CommandResult cmd_lift(const RunConfig& cfg) {
    Timer timer;
    json rep = base_report("lift", cfg);
    if (cfg.target_precision > cfg.s)
        throw std::invalid_argument("config: target_precision exceeds s");
    DemuskinPresentation pres = cfg.presentation();
    NilpotentSystem sys = cfg.nilpotent_system();
    ObstructionCase oc = classify(sys, pres);
    Rng rng(cfg.seed);
    json table = json::array();
    bool ok = true;
    std::uint32_t trials = std::max<std::uint32_t>(cfg.trials, 1);
    for (std::uint32_t t = 0; t < trials; ++t) {
        Cochain1 cbar = random_mod_p_cocycle(sys, pres, rng);
        LiftResult lr = lift_to_precision(sys, pres, cbar, cfg.target_precision, cfg.seed + t);
        json entry{{"trial", t}};
        if (lr.ok()) {
            entry["lifted"] = true;
            entry["precision"] = lr.state->precision_reached;
            entry["used_quadratic"] = lr.state->used_quadratic;
            entry["certificate_zero"] = lr.state->certificate.is_zero();
            // independent recomputation of the certificate
            NilpotentSystem sys_t = sys.reduced(lr.state->precision_reached);
            bool recheck = d2_nilpotent(sys_t, pres, lr.state->cocycle).is_zero();
            bool mod_p_match =
                cochain_reduce(lr.state->cocycle, sys.m.reduced(1)) ==
                cochain_reduce(cbar, sys.m.reduced(1));
            entry["recheck"] = recheck && mod_p_match;
            ok = ok && recheck && mod_p_match;
        } else {
            entry["lifted"] = false;
            entry["level"] = lr.obstruction->level;
            entry["kind"] = lr.obstruction->kind;
            entry["obstruction_class"] = lr.obstruction->cls;
            bool cls_nonzero = false;
            for (auto v : lr.obstruction->cls) cls_nonzero = cls_nonzero || v != 0;
            entry["class_nonzero"] = cls_nonzero;
            ok = ok && cls_nonzero;
        }
        table.push_back(entry);
    }
    rep["results"] = {{"classification", tag_name(oc.tag)},
                      {"dim_h2_center", oc.dim_h2_center},
                      {"dim_h2_ad", oc.dim_h2_ad},
                      {"pairing_nontrivial", oc.pairing_nontrivial},
                      {"mr2", oc.mr2},
                      {"outcomes", table}};
    rep["verdicts"] = {{"ok", ok}};
    rep["timing_ms"] = timer.ms();
    return {rep, ok ? 0 : 1};
}

CommandResult cmd_delta_probe(const RunConfig& cfg) {
    Timer timer;
    json rep = base_report("delta-probe", cfg);
    DemuskinPresentation pres = cfg.presentation();
    if (cfg.max_precision < 2 || cfg.max_precision > cfg.s)
        throw std::invalid_argument("config: max_precision must be in [2, s]");
    NilpotentSystem sys = cfg.nilpotent_system();
    json levels = json::array();
    std::size_t last_kld = 0;
    bool stabilized = true;
    std::vector<std::size_t> klds;
    for (std::uint32_t t = 1; t <= cfg.max_precision; ++t) {
        KldReport kr = kernel_and_kld(sys, pres, t);
        levels.push_back(json{{"s", t},
                              {"z_dim", kr.z_dim},
                              {"radical_dim", kr.radical_dim},
                              {"b1_dim", kr.b1_dim},
                              {"kld_dim", kr.kld_dim}});
        klds.push_back(kr.kld_dim);
        last_kld = kr.kld_dim;
    }
    for (std::size_t i = 1; i < klds.size(); ++i) stabilized = stabilized && klds[i] == klds[i - 1];
    TorsionProbeReport tp = h0_torsion_probe(pres, sys.ad_system(), cfg.max_precision);
    json profs = json::array();
    for (auto& p : tp.h0_profiles) profs.push_back(profile_to_json(p));
    rep["results"] = {
        {"levels", levels},
        {"kld_stabilized", stabilized},
        {"kld_final", last_kld},
        {"mr1_proxy",
         tp.verdict == TorsionVerdict::NoFreeFixedVectors ? "no-free-fixed-vectors"
                                                          : "free-fixed-vectors-present"},
        {"h0_profiles", profs}};
    rep["verdicts"] = {{"ok", true}};
    rep["timing_ms"] = timer.ms();
    return {rep, 0};
}

CommandResult cmd_validate(const RunConfig& cfg) {
    Timer timer;
    json rep = base_report("validate", cfg);
    bool ok;
    if (cfg.system == "trivial" || cfg.system == "sym3") {
        ValidationReport v = validate_system(cfg.abelian_system());
        rep["results"] = validation_to_json(v);
        ok = v.ok();
    } else {
        ValidationReport v = validate_system(cfg.nilpotent_system());
        rep["results"] = validation_to_json(v);
        ok = v.ok();
    }
    rep["verdicts"] = {{"ok", ok}};
    rep["timing_ms"] = timer.ms();
    return {rep, ok ? 0 : 1};
}

}  // namespace demuskin
