#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include <phaseq/config.hpp>

namespace phaseq {

// One verification check: `pass` is `value relation bound` with relation
// either "<=" or ">=".
struct CheckResult {
    std::string name;
    double value = 0.0;
    double bound = 0.0;
    std::string relation = "<=";
    bool pass = false;
};

struct RunReport {
    std::string task;
    nlohmann::ordered_json config_echo;
    std::vector<CheckResult> checks;
    nlohmann::ordered_json details;
    double wall_seconds = 0.0;  // console summary only; never serialized

    bool all_passed() const;
};

// Execute the configured task. Throws domain_error / numeric_error on
// invalid inputs or failed numerics; check failures are reported, not thrown.
RunReport run_task(const RunConfig& config);

// Deterministic serializations: identical configs on the same build yield
// identical bytes (no timestamps, no timing).
nlohmann::ordered_json run_report_json(const RunReport& report);
std::string run_report_csv(const RunReport& report);

void write_report(const RunReport& report, const std::string& path, const std::string& format);

// Worker cap: TOOL_THREADS when set (minimum 1), hardware concurrency
// otherwise.
unsigned worker_count();

// Full command-line entry point; returns the process exit code
// (0 pass, 1 check failure, 2 config/domain error, 3 numeric error).
int dispatch(const std::vector<std::string>& args);

}  // namespace phaseq
