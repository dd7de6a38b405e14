#pragma once

// Executes .hopt programs: declarations first, then check statements against
// the library suites, with JSON or text reports and the CLI exit codes.

#include "hopt/dsl.hpp"
#include "hopt/law.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace hopt {

struct RunConfig {
    std::uint64_t max_size = 3;
    std::size_t samples = 200;
    std::uint64_t seed = 0;
    std::size_t depth = 4;       // closure depth, tower depth
    std::size_t per_carrier = 4; // Karoubi idempotent cap
    std::string format = "json";
    std::size_t jobs = 1;
    bool strict_bounds = false;
    bool timing = false;
    std::string model = "finset"; // used until a model statement appears
};

/// Restricts a run to one statement and one violation instance.
struct ReplayTarget {
    std::size_t statement = 0;
    std::string law;
    std::string instance;
};

struct SuiteResult {
    std::size_t statement = 0; // index of the check statement in the program
    std::string source;        // "check enriched max_size=2"
    LawReport report;
    std::optional<std::string> error;
    bool bound_error = false;
};

struct RunResult {
    std::vector<SuiteResult> suites;
    /// Parse or type error before any check ran.
    std::optional<std::string> fatal;
    int exit_code = 0;
};

/// Exit codes.
inline constexpr int kExitPass = 0;
inline constexpr int kExitFail = 1;
inline constexpr int kExitParse = 2;
inline constexpr int kExitBounds = 3;

RunResult run(const dsl::Program& program, const RunConfig& config,
              const std::optional<ReplayTarget>& replay = std::nullopt);
/// Parses and runs; a ParseError becomes exit code 2.
RunResult run_source(const std::string& source, const RunConfig& config,
                     const std::optional<ReplayTarget>& replay = std::nullopt);

/// {version, seed, config, suites, exit_code}; deterministic for fixed
/// (source, config). elapsed_ms is null unless config.timing.
std::string report_json(const RunResult& r, const RunConfig& config, const std::string& source);
std::string report_text(const RunResult& r, const RunConfig& config);

/// Reads back the config and source embedded in a JSON report, and the
/// statement, law and instance of its violation number `index` (0-based,
/// counted across suites).
struct ReplayRequest {
    RunConfig config;
    std::string source;
    ReplayTarget target;
    std::string lhs;
    std::string rhs;
};
ReplayRequest load_replay(const std::string& report_json_text, std::size_t index);

inline constexpr const char* kReportVersion = "1.0";

} // namespace hopt
