#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>

#include <json.hpp>

#include <phaseq/fluctuation.hpp>
#include <phaseq/grid.hpp>
#include <phaseq/hamiltonian.hpp>
#include <phaseq/wavefunction.hpp>

namespace phaseq {

enum class TaskKind { quantize, uncertainty, commutators, fundamental_residual, fluctuation, all };

std::string to_string(TaskKind task);
TaskKind task_from_string(const std::string& name);

// State generator selection plus the union of generator parameters; only the
// fields for the chosen generator are read.
struct StateConfig {
    std::string generator = "gaussian";  // gaussian | free_particle | random

    // gaussian
    double center_a = 0.0;
    double center_b = 0.0;
    double sigma_a = 1.0;
    double sigma_b = 1.0;

    // free_particle
    double mass = 1.0;
    double p0 = 2.0;
    double time = 0.0;
    double edge_fraction = 0.2;
    std::size_t slice_count = 0;
    double slice_spacing = 0.0;

    // random
    std::uint64_t seed = 1;
    double action_scale = 0.75;
};

struct RunConfig {
    std::string schema_version = "1";
    TaskKind task = TaskKind::uncertainty;
    double hbar = 1.0;
    std::optional<HamiltonianSpec> hamiltonian;
    std::optional<PhaseGrid> grid;
    std::optional<StateConfig> state;
    std::optional<PathEnsemble> ensemble;
    int level_max = 10;                     // quantize: solve n = 1..level_max
    std::map<std::string, double> tolerances;  // per-check overrides by name
    std::string output_path;                // empty = no file written
    std::string output_format = "json";     // json | csv
    nlohmann::ordered_json echo;            // the document as parsed
};

// Parse and validate a config document. Throws domain_error on malformed
// JSON (message keeps the parser's line/column text), unknown fields of the
// wrong shape, missing task-specific sections, or grid counts below 9.
RunConfig parse_run_config(const std::string& text);

// parse_run_config over the file's contents; domain_error if unreadable.
RunConfig load_run_config(const std::string& path);

// Sub-parsers, exposed for reuse and tests.
HamiltonianSpec hamiltonian_from_json(const nlohmann::json& j, double hbar);
PhaseGrid grid_from_json(const nlohmann::json& j);
StateConfig state_from_json(const nlohmann::json& j);

// Instantiate the configured state on the configured grid.
PhaseWaveFunction make_state(const RunConfig& config);

}  // namespace phaseq
