// scenario.hpp — JSON scenario files, dispatch to the library, and artifact
// output (human summary, structured record, CSV trajectories).
#pragma once

#include "qsm/types.hpp"

#include <nlohmann/json.hpp>

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

namespace qsm {

using Json = nlohmann::ordered_json;

enum class ScenarioKind { ergotropy, passivity, thermalize, isothermal, entropy_protocol, cycle, verify };

ScenarioKind scenario_kind_from_string(const std::string& s);
std::string to_string(ScenarioKind kind);

struct Scenario {
    ScenarioKind kind;
    std::uint64_t seed = 1;
    Units units;
    Json payload;

    static Scenario parse(const Json& doc);
    Json to_json() const;
};

// Matrix <-> JSON: {"dim": d, "entries": [[re, im] x d*d]} row-major.
// States accept {"matrix": M}, {"probabilities": [...], "basis"?: M},
// {"hamiltonian": M, "beta": b} or {"hamiltonian": M, "mean_energy": E}.
Json matrix_to_json(const Matrix& m);
Matrix matrix_from_json(const Json& j, const std::string& field);

// Applies one `key=value` override to a scenario document; dotted keys index
// into nested objects and are created as needed. Values parse as JSON when
// possible, else as strings.
void apply_override(Json& doc, const std::string& assignment);

struct RunArtifacts {
    Json record;          // deterministic structured result
    std::string summary;  // human-readable text (may include runtime)
    std::vector<std::pair<std::string, std::string>> csv_files; // name -> contents
};

// Executes a parsed scenario. Throws validation_error / numerical_error.
RunArtifacts run_scenario(const Scenario& scenario);

// File-level front end: reads the scenario, applies overrides, runs it, writes
// summary.txt / result.json / CSVs into out_dir. Returns the process exit code
// (0 ok, 2 schema violation, 3 numerical rejection, 4 I/O).
int run_scenario_file(const std::filesystem::path& scenario_path,
                      const std::filesystem::path& out_dir,
                      const std::vector<std::string>& overrides,
                      const std::string& format, std::string& console_output);

} // namespace qsm
