#pragma once

#include <json.hpp>

#include "demuskin/lifting.hpp"
#include "demuskin/unipotent.hpp"

namespace demuskin {

inline constexpr const char* kVersion = "0.1.0";

// Run configuration shared by all CLI commands; loadable from a JSON config
// document, overridable by flags.
struct RunConfig {
    std::uint64_t p = 5;
    std::uint32_t s = 1;
    int n = 2;
    std::uint32_t q_exponent = 1;  // q = p^q_exponent
    std::vector<std::int64_t> levi;  // length n+2; empty means all zero
    std::string system = "g2-short";  // trivial | sym3 | g2-short | g2-long-heisenberg | custom
    std::size_t rank = 1;             // for the trivial system
    // custom payload
    std::size_t m_a = 0;
    std::vector<std::vector<std::int64_t>> bracket;
    std::vector<std::vector<std::vector<std::int64_t>>> ad_actions;
    std::vector<std::int64_t> z_actions;

    std::uint64_t seed = 12345;
    std::uint32_t trials = 20;
    std::uint32_t target_precision = 4;
    std::vector<std::uint64_t> sweep_p;
    std::uint32_t max_precision = 3;  // S for the delta probe

    static RunConfig from_json(const nlohmann::json& j);
    nlohmann::json to_json() const;

    RingModulus modulus() const;
    std::uint64_t q_value() const;
    DemuskinPresentation presentation() const;
    LeviData levi_data() const;                 // residues of the levi entries
    NilpotentSystem nilpotent_system() const;   // for g2-short / g2-long-heisenberg / custom
    AbelianSystem abelian_system() const;       // trivial/sym3, or Lie U of a nilpotent system
};

nlohmann::json conventions_record();

struct CommandResult {
    nlohmann::json report;
    int exit_code = 0;  // 0 pass, 1 property failed, 2 invalid input
};

CommandResult cmd_cohomology(const RunConfig& cfg);
CommandResult cmd_mr2(const RunConfig& cfg);
CommandResult cmd_gram(const RunConfig& cfg);
CommandResult cmd_power_check(const RunConfig& cfg);
CommandResult cmd_lift(const RunConfig& cfg);
CommandResult cmd_delta_probe(const RunConfig& cfg);
CommandResult cmd_validate(const RunConfig& cfg);

// Deterministic samplers used by the commands and the test suites.
std::vector<std::uint64_t> random_levi(Rng& rng, const RingModulus& m, std::size_t count);
Cochain1 random_mod_p_cocycle(const NilpotentSystem& sys, const DemuskinPresentation& pres,
                              Rng& rng);

nlohmann::json profile_to_json(const ModuleProfile& p);

}  // namespace demuskin
