#include <CLI11.hpp>
#include <fstream>
#include <iostream>

#include "demuskin/report.hpp"

using namespace demuskin;
using nlohmann::json;

namespace {

struct Flags {
    std::string config_path;
    std::string out_path;
    bool quiet = false;
    std::optional<std::uint64_t> p;
    std::optional<std::uint32_t> s;
    std::optional<int> n;
    std::optional<std::uint32_t> q_exponent;
    std::optional<std::string> levi_csv;
    std::optional<std::string> system;
    std::optional<std::size_t> rank;
    std::optional<std::uint64_t> seed;
    std::optional<std::uint32_t> trials;
    std::optional<std::uint32_t> target_precision;
    std::optional<std::string> sweep_p_csv;
    std::optional<std::uint32_t> max_precision;
};

std::vector<std::int64_t> parse_csv(const std::string& csv) {
    std::vector<std::int64_t> out;
    std::string cur;
    for (char ch : csv + ",") {
        if (ch == ',') {
            if (!cur.empty()) out.push_back(std::stoll(cur));
            cur.clear();
        } else {
            cur += ch;
        }
    }
    return out;
}

RunConfig assemble(const Flags& f) {
    RunConfig cfg;
    if (!f.config_path.empty()) {
        std::ifstream in(f.config_path);
        if (!in) throw std::invalid_argument("cannot open config file: " + f.config_path);
        json j = json::parse(in);
        cfg = RunConfig::from_json(j);
    }
    if (f.p) cfg.p = *f.p;
    if (f.s) cfg.s = *f.s;
    if (f.n) cfg.n = *f.n;
    if (f.q_exponent) cfg.q_exponent = *f.q_exponent;
    if (f.levi_csv) cfg.levi = parse_csv(*f.levi_csv);
    if (f.system) cfg.system = *f.system;
    if (f.rank) cfg.rank = *f.rank;
    if (f.seed) cfg.seed = *f.seed;
    if (f.trials) cfg.trials = *f.trials;
    if (f.target_precision) cfg.target_precision = *f.target_precision;
    if (f.sweep_p_csv) {
        cfg.sweep_p.clear();
        for (auto v : parse_csv(*f.sweep_p_csv)) cfg.sweep_p.push_back(static_cast<std::uint64_t>(v));
    }
    if (f.max_precision) cfg.max_precision = *f.max_precision;
    return cfg;
}

void add_common(CLI::App* sub, Flags& f) {
    sub->add_option("--config", f.config_path, "JSON config file");
    sub->add_option("--out", f.out_path, "write the JSON report to this path");
    sub->add_flag("--quiet", f.quiet, "suppress the human-readable summary");
    sub->add_option("--p", f.p, "odd prime p");
    sub->add_option("--s", f.s, "precision exponent s (modulus p^s)");
    sub->add_option("--n", f.n, "even n >= 2; the presentation has n+2 generators");
    sub->add_option("--q-exponent", f.q_exponent, "relator exponent q = p^e");
    sub->add_option("--levi", f.levi_csv, "comma-separated Levi entries l_0..l_{n+1}");
    sub->add_option("--system", f.system,
                    "trivial | sym3 | g2-short | g2-long-heisenberg | custom");
    sub->add_option("--rank", f.rank, "rank of the trivial system");
    sub->add_option("--seed", f.seed, "RNG seed");
    sub->add_option("--trials", f.trials, "number of randomized trials");
    sub->add_option("--target-precision", f.target_precision, "lift target precision");
    sub->add_option("--sweep-p", f.sweep_p_csv, "comma-separated primes for sweeps");
    sub->add_option("--max-precision", f.max_precision, "S for the delta probe");
}

void summarize(const json& rep, bool quiet) {
    if (quiet) return;
    std::cout << rep["command"].get<std::string>() << ": "
              << (rep["verdicts"]["ok"].get<bool>() ? "ok" : "FAILED") << "\n";
    if (rep.contains("results")) {
        const json& r = rep["results"];
        for (auto it = r.begin(); it != r.end(); ++it) {
            if (it.value().is_structured() && it.value().size() > 8) {
                std::cout << "  " << it.key() << ": [" << it.value().size() << " entries]\n";
            } else {
                std::cout << "  " << it.key() << ": " << it.value().dump() << "\n";
            }
        }
    }
}

int run(const Flags& f, CommandResult (*fn)(const RunConfig&)) {
    RunConfig cfg = assemble(f);
    CommandResult res = fn(cfg);
    if (!f.out_path.empty()) {
        std::ofstream out(f.out_path);
        out << res.report.dump(2) << "\n";
    }
    summarize(res.report, f.quiet);
    return res.exit_code;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Lyndon-Demuškin complexes, cup products and cocycle lifting over Z/p^s"};
    app.require_subcommand(1);
    Flags f;

    struct Cmd {
        const char* name;
        const char* help;
        CommandResult (*fn)(const RunConfig&);
    };
    const Cmd cmds[] = {
        {"cohomology", "H^0/H^1/H^2 profiles of the abelian complex", cmd_cohomology},
        {"mr2", "cup-product Gram non-degeneracy, optionally sweeping p", cmd_mr2},
        {"gram", "full Gram matrix with block structure", cmd_gram},
        {"power-check", "closed-form powers vs iterated products; order checks", cmd_power_check},
        {"lift", "classification and batch cocycle lifting", cmd_lift},
        {"delta-probe", "kernel/K_LD dimensions across precisions", cmd_delta_probe},
        {"validate", "coefficient-system validation report", cmd_validate},
    };
    std::map<std::string, CommandResult (*)(const RunConfig&)> dispatch;
    for (auto& c : cmds) {
        CLI::App* sub = app.add_subcommand(c.name, c.help);
        add_common(sub, f);
        dispatch[c.name] = c.fn;
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        return run(f, dispatch.at(app.get_subcommands().front()->get_name()));
    } catch (const std::invalid_argument& e) {
        std::cerr << "invalid input: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
