// qsm — scenario-driven front end for the statistical-mechanics workbench.
//
// Usage:
//   qsm run --scenario FILE [--out DIR] [--seed N] [--set key=value ...] [--format text|json]
//
// Kind-named subcommands (ergotropy, passivity, thermalize, isothermal,
// entropy-protocol, cycle, verify) take the same flags and additionally require
// the scenario file to carry the matching kind.
//
// Exit codes: 0 success, 1 verify-suite margin breach, 2 schema violation,
// 3 numerical rejection, 4 I/O failure.

#include "qsm/scenario.hpp"

#include <CLI11.hpp>

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

namespace {

struct CommonFlags {
    std::string scenario_path;
    std::string out_dir;
    std::optional<std::uint64_t> seed;
    std::vector<std::string> overrides;
    std::string format = "text";
};

void add_common_flags(CLI::App* cmd, CommonFlags& flags) {
    cmd->add_option("--scenario", flags.scenario_path, "Scenario JSON file")->required();
    cmd->add_option("--out", flags.out_dir, "Output directory (default $QSM_OUT_DIR or ./qsm-out)");
    cmd->add_option("--seed", flags.seed, "Override the scenario seed");
    cmd->add_option("--set", flags.overrides, "Override a scenario field, key=value (repeatable)");
    cmd->add_option("--format", flags.format, "Console output format")
        ->check(CLI::IsMember({"text", "json"}));
}

int execute(const CommonFlags& flags, const std::optional<std::string>& required_kind) {
    std::string out_dir = flags.out_dir;
    if (out_dir.empty()) {
        const char* env = std::getenv("QSM_OUT_DIR");
        out_dir = (env && *env) ? env : "qsm-out";
    }
    std::vector<std::string> overrides = flags.overrides;
    if (flags.seed) overrides.push_back("seed=" + std::to_string(*flags.seed));
    if (required_kind) {
        // Kind-named subcommands refuse mismatched scenarios up front.
        std::ifstream in(flags.scenario_path);
        if (!in) {
            std::cerr << "error: cannot read scenario file '" << flags.scenario_path << "'\n";
            return 4;
        }
        const qsm::Json doc = qsm::Json::parse(in, nullptr, false, true);
        if (doc.is_discarded() || !doc.is_object() || !doc.contains("kind") ||
            !doc.at("kind").is_string()) {
            std::cerr << "schema error: scenario has no usable 'kind' field\n";
            return 2;
        }
        if (doc.at("kind").get<std::string>() != *required_kind) {
            std::cerr << "schema error: subcommand expects kind '" << *required_kind
                      << "' but scenario declares '" << doc.at("kind").get<std::string>() << "'\n";
            return 2;
        }
    }

    std::string console;
    const int code = qsm::run_scenario_file(flags.scenario_path, out_dir, overrides, flags.format,
                                            console);
    ((code == 0 || code == 1) ? std::cout : std::cerr) << console;
    return code;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Finite-dimensional quantum statistical-mechanics workbench"};
    app.require_subcommand(1);

    struct SubcommandSpec {
        const char* name;
        const char* description;
        std::optional<std::string> kind;
    };
    const std::vector<SubcommandSpec> specs = {
        {"run", "Run any scenario file", std::nullopt},
        {"ergotropy", "Passive form and work extraction", "ergotropy"},
        {"passivity", "N-passivity and complete passivity of a level system", "passivity"},
        {"thermalize", "Collision-model contact with an ideal bath", "thermalize"},
        {"isothermal", "Quasistatic isothermal drive", "isothermal"},
        {"entropy-protocol", "Three-stage reversible entropy protocol", "entropy_protocol"},
        {"cycle", "Thermal cycle with a Clausius-sum ledger", "cycle"},
        {"verify", "Randomized inequality battery", "verify"},
    };

    std::vector<CommonFlags> flag_blocks(specs.size());
    std::vector<CLI::App*> commands;
    for (std::size_t i = 0; i < specs.size(); ++i) {
        CLI::App* cmd = app.add_subcommand(specs[i].name, specs[i].description);
        add_common_flags(cmd, flag_blocks[i]);
        commands.push_back(cmd);
    }

    CLI11_PARSE(app, argc, argv);

    for (std::size_t i = 0; i < specs.size(); ++i) {
        if (commands[i]->parsed()) return execute(flag_blocks[i], specs[i].kind);
    }
    return 2;
}
