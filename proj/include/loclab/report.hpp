// report.hpp - experiment configs, trial reports, CSV/JSON persistence, and
// the property-verification suites behind the CLI.
#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "loclab/dynamics.hpp"
#include "loclab/montecarlo.hpp"

namespace loclab {

inline constexpr int kSchemaVersion = 1;

struct ScheduleSpec {
    ScheduleFramework framework = ScheduleFramework::fmm;
    ScheduleInputs inputs;
    bool allow_infeasible = false;
};

struct ExperimentConfig {
    std::string kind; // classify | estimate | induction | coverage | two_volume | dynamics | verify
    int graph_dim = 1;
    int graph_n = 0; // explicit vertex count (0 = auto-sized centered lattice)
    Ensemble ensemble;
    ScaleParams params;
    long long trials = 0;
    std::uint64_t seed_base = 0;
    std::optional<double> energy;
    std::optional<Interval> interval;
    std::optional<double> grid_step;
    int scale = 0;
    std::string quantity;       // estimate: Pk | Qk | wegner | nu_modulus
    std::string mode;           // induction: section5 | section8; dynamics: decay | correlator_audit
    std::string suite = "all";  // verify
    std::optional<ScheduleSpec> schedule;
    std::vector<int> distances;          // dynamics decay
    std::vector<int> pair;               // dynamics correlator_audit vertices {x, y}
    std::vector<double> epsilons;        // wegner
    std::vector<double> s_values;        // nu_modulus
    bool sweep_centers = false;          // estimate Pk: classify every contained center
    int threads = 1;
    std::string output_csv;
    std::string output_json;
    nlohmann::json raw; // verbatim echo of the parsed document
};

// Strict parse: unknown fields anywhere raise ConfigError.
ExperimentConfig parse_config(const nlohmann::json& doc);
ExperimentConfig parse_config_text(const std::string& text);

nlohmann::json resolved_config_json(const ExperimentConfig& cfg);

struct RunResult {
    int exit_code = 0;
    nlohmann::json summary;
    std::vector<std::string> csv_lines; // header + rows, before persistence
};

// Executes the experiment and persists CSV/JSON when paths are configured.
// Exit codes: 0 success, 2 asserted-invariant violation, 3 config error,
// 4 I/O failure.
RunResult run_experiment(const ExperimentConfig& cfg, std::ostream& log);

int run_config_file(const std::string& path, std::ostream& log);

struct SuiteResult {
    std::string name;
    int checks = 0;
    int failures = 0;
    std::vector<std::string> messages; // one per failed check
};

SuiteResult verify_lemmas(int threads, std::ostream& log);
SuiteResult verify_operators(int threads, std::ostream& log);
SuiteResult verify_schedules(int threads, std::ostream& log);

// suite: lemmas | operators | schedules | all. Returns process exit code.
int run_verify(const std::string& suite, int threads, std::ostream& log);

std::string format_double(double v); // shortest round-trip decimal form

} // namespace loclab
