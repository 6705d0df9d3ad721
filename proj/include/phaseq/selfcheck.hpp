#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include <json.hpp>

namespace phaseq {

struct CriterionResult {
    int index = 0;
    std::string name;
    bool pass = false;
    std::string detail;
};

// The bundled verification suite at pinned grids and tolerances. perturb_b
// shifts the B coefficient before its identity comparison (fault-injection
// hook for harness tests). with_determinism appends a final criterion that
// reruns the whole suite and byte-compares the serialized results.
std::vector<CriterionResult> run_acceptance_criteria(double perturb_b = 0.0,
                                                     bool with_determinism = true);

std::vector<std::string> acceptance_criterion_names();

nlohmann::ordered_json criteria_report_json(const std::vector<CriterionResult>& results);

// The `selfcheck` subcommand: prints the matrix (or just the names with
// list_only) to `out`; returns 0 when everything passes, 1 otherwise.
int selfcheck_command(bool list_only, double perturb_b, std::ostream& out);

}  // namespace phaseq
