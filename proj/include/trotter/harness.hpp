// harness.hpp: config-driven experiment runner behind the trotterbench CLI.

#pragma once

#include "trotter/error.hpp"
#include "trotter/problem_families.hpp"

#include <json.hpp>

#include <optional>
#include <string>
#include <vector>

namespace trotter::harness {

// Process exit codes.
inline constexpr int kExitOk = 0;
inline constexpr int kExitCheckFailed = 2;
inline constexpr int kExitSlopeFailed = 3;
inline constexpr int kExitSemigroupFailed = 4;
inline constexpr int kExitBoundsFailed = 5;
inline constexpr int kExitConfig = 64;
inline constexpr int kExitIndivisible = 65;
inline constexpr int kExitNumeric = 70;

struct ExperimentConfig {
    std::optional<nlohmann::json> family; // required by check, converge, semigroup
    std::optional<long> dim;
    double horizon = 1.0;
    double alpha = 0.0;
    std::vector<long> n_list{2, 4, 8, 16, 32, 64, 128, 256};
    std::optional<int> grid_n;
    double tol = 1e-10;
    nlohmann::json command_options = nlohmann::json::object();
};

// Throws Error(ConfigParse) on malformed JSON, unknown keys or invariant
// violations (n_list strictly increasing, tol in [1e-12, 1e-6], alpha in [0,1)).
ExperimentConfig parse_config(const std::string& text);
ExperimentConfig load_config(const std::string& path);

struct Problem {
    SpectralOperator a;
    TimeDependentFamily family;
};

// Builds A and the family described by config.family, with declared alpha set
// to config.alpha.
Problem build_problem(const ExperimentConfig& config);

struct RunResult {
    int exit_code = kExitOk;
    nlohmann::json report;
    std::string csv; // header + rows, LF endings
    std::string summary; // one human-readable line for stderr
};

RunResult run_check(const ExperimentConfig& config, unsigned threads = 1);
RunResult run_converge(const ExperimentConfig& config, unsigned threads = 1);
RunResult run_semigroup(const ExperimentConfig& config, unsigned threads = 1);
RunResult run_bounds(const ExperimentConfig& config, unsigned threads = 1);

// Dispatches on "check", "converge", "semigroup", "bounds".
RunResult run_command(const std::string& command, const ExperimentConfig& config, unsigned threads = 1);

// %.17g: round-trip exact for doubles.
std::string format_real(double x);

// Writes report.json and table.csv into dir (created if missing).
void write_outputs(const RunResult& result, const std::string& dir);

// Maps a library error code to the CLI exit code.
int exit_code_for(const Error& e);

} // namespace trotter::harness
