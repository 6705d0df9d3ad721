#include <phaseq/config.hpp>

#include <fstream>
#include <sstream>

namespace phaseq {

namespace {

[[noreturn]] void fail(const std::string& what) { throw domain_error("config: " + what); }

double positive_number(const nlohmann::json& j, const char* name) {
    const double value = j.at(name).get<double>();
    if (!(value > 0.0)) fail(std::string(name) + " must be positive");
    return value;
}

Grid1D axis_from_json(const nlohmann::json& j, const char* name) {
    if (!j.contains(name)) fail(std::string("grid is missing ") + name);
    const nlohmann::json& axis = j.at(name);
    const double lower = axis.at("lower").get<double>();
    const double upper = axis.at("upper").get<double>();
    const auto count = axis.at("count").get<std::size_t>();
    const bool periodic = axis.value("periodic", false);
    if (!(lower < upper)) fail(std::string(name) + ": lower must be below upper");
    if (count < 9) fail(std::string(name) + ": count must be >= 9, got " + std::to_string(count));
    return Grid1D{lower, upper, count, periodic};
}

}  // namespace

std::string to_string(TaskKind task) {
    switch (task) {
        case TaskKind::quantize: return "quantize";
        case TaskKind::uncertainty: return "uncertainty";
        case TaskKind::commutators: return "commutators";
        case TaskKind::fundamental_residual: return "fundamental-residual";
        case TaskKind::fluctuation: return "fluctuation";
        case TaskKind::all: return "all";
    }
    throw domain_error("unknown task kind");
}

TaskKind task_from_string(const std::string& name) {
    if (name == "quantize") return TaskKind::quantize;
    if (name == "uncertainty") return TaskKind::uncertainty;
    if (name == "commutators") return TaskKind::commutators;
    if (name == "fundamental-residual") return TaskKind::fundamental_residual;
    if (name == "fluctuation") return TaskKind::fluctuation;
    if (name == "all") return TaskKind::all;
    fail("unknown task \"" + name +
         "\" (expected quantize, uncertainty, commutators, fundamental-residual, fluctuation, "
         "or all)");
}

HamiltonianSpec hamiltonian_from_json(const nlohmann::json& j, double hbar) {
    const double mass = positive_number(j, "mass");
    if (!j.contains("potential")) fail("hamiltonian is missing potential");
    const nlohmann::json& pot = j.at("potential");
    const std::string kind = pot.at("kind").get<std::string>();
    if (kind == "harmonic")
        return HamiltonianSpec(mass, HarmonicPotential{positive_number(pot, "omega")}, hbar);
    if (kind == "box")
        return HamiltonianSpec(mass, BoxPotential{positive_number(pot, "length")}, hbar);
    if (kind == "polynomial") {
        const auto coefficients = pot.at("coefficients").get<std::vector<double>>();
        if (coefficients.empty()) fail("polynomial potential needs coefficients");
        return HamiltonianSpec(mass, PolynomialPotential{coefficients}, hbar);
    }
    if (kind == "tabulated") {
        TabulatedPotential table;
        table.x = pot.at("x").get<std::vector<double>>();
        table.v = pot.at("v").get<std::vector<double>>();
        return HamiltonianSpec(mass, table, hbar);
    }
    fail("unknown potential kind \"" + kind + "\"");
}

PhaseGrid grid_from_json(const nlohmann::json& j) {
    const std::string kind_name = j.value("kind", std::string("position-momentum"));
    AxesKind kind = AxesKind::position_momentum;
    if (kind_name == "position-momentum") {
        kind = AxesKind::position_momentum;
    } else if (kind_name == "energy-time") {
        kind = AxesKind::energy_time;
    } else if (kind_name == "angle-angular-momentum") {
        kind = AxesKind::angle_angular_momentum;
    } else {
        fail("unknown grid kind \"" + kind_name + "\"");
    }
    return PhaseGrid{axis_from_json(j, "axis_a"), axis_from_json(j, "axis_b"), kind};
}

StateConfig state_from_json(const nlohmann::json& j) {
    StateConfig state;
    state.generator = j.at("generator").get<std::string>();
    if (state.generator == "gaussian") {
        state.center_a = j.value("center_a", 0.0);
        state.center_b = j.value("center_b", 0.0);
        state.sigma_a = j.value("sigma_a", 1.0);
        state.sigma_b = j.value("sigma_b", 1.0);
        if (!(state.sigma_a > 0.0 && state.sigma_b > 0.0)) fail("gaussian sigmas must be positive");
    } else if (state.generator == "free_particle") {
        state.mass = j.value("mass", 1.0);
        state.p0 = j.value("p0", 2.0);
        state.time = j.value("time", 0.0);
        state.edge_fraction = j.value("edge_fraction", 0.2);
        state.slice_count = j.value("slice_count", std::size_t{0});
        state.slice_spacing = j.value("slice_spacing", 0.0);
        if (!(state.mass > 0.0)) fail("free_particle mass must be positive");
    } else if (state.generator == "random") {
        state.seed = j.at("seed").get<std::uint64_t>();
        state.action_scale = j.value("action_scale", 0.75);
        if (!(state.action_scale >= 0.0)) fail("random action_scale must be non-negative");
    } else {
        fail("unknown state generator \"" + state.generator +
             "\" (expected gaussian, free_particle, or random)");
    }
    return state;
}

RunConfig parse_run_config(const std::string& text) {
    nlohmann::ordered_json doc;
    try {
        doc = nlohmann::ordered_json::parse(text);
    } catch (const nlohmann::json::parse_error& err) {
        // err.what() carries the parser's "at line L, column C" diagnostics.
        fail(std::string("malformed JSON: ") + err.what());
    }

    try {
        RunConfig config;
        config.echo = doc;
        config.schema_version = doc.at("schema_version").get<std::string>();
        if (config.schema_version != "1")
            fail("unsupported schema_version \"" + config.schema_version + "\"");
        config.task = task_from_string(doc.at("task").get<std::string>());
        config.hbar = doc.value("hbar", 1.0);
        if (!(config.hbar > 0.0)) fail("hbar must be positive");

        if (doc.contains("hamiltonian"))
            config.hamiltonian = hamiltonian_from_json(doc.at("hamiltonian"), config.hbar);
        if (doc.contains("grid")) config.grid = grid_from_json(doc.at("grid"));
        if (doc.contains("state")) config.state = state_from_json(doc.at("state"));
        if (doc.contains("ensemble")) {
            PathEnsemble ensemble = ensemble_from_json(doc.at("ensemble"));
            ensemble.hbar = doc.at("ensemble").value("hbar", config.hbar);
            validate_ensemble(ensemble);
            config.ensemble = ensemble;
        }
        config.level_max = doc.value("level_max", 10);
        if (config.level_max < 1) fail("level_max must be >= 1");

        if (doc.contains("tolerances")) {
            for (const auto& [key, value] : doc.at("tolerances").items()) {
                const double bound = value.get<double>();
                if (!(bound > 0.0)) fail("tolerance " + key + " must be positive");
                config.tolerances[key] = bound;
            }
        }
        if (doc.contains("output")) {
            const nlohmann::json& output = doc.at("output");
            config.output_path = output.value("path", std::string());
            config.output_format = output.value("format", std::string("json"));
            if (config.output_format != "json" && config.output_format != "csv")
                fail("output format must be json or csv");
        }

        const bool needs_state_grid = config.task == TaskKind::uncertainty ||
                                      config.task == TaskKind::commutators ||
                                      config.task == TaskKind::fundamental_residual ||
                                      config.task == TaskKind::all;
        if (needs_state_grid && (!config.grid || !config.state))
            fail(to_string(config.task) + " task needs both grid and state");
        if ((config.task == TaskKind::quantize || config.task == TaskKind::all ||
             config.task == TaskKind::fundamental_residual) &&
            !config.hamiltonian)
            fail(to_string(config.task) + " task needs a hamiltonian");
        if ((config.task == TaskKind::fluctuation || config.task == TaskKind::all) &&
            !config.ensemble)
            fail(to_string(config.task) + " task needs an ensemble");
        return config;
    } catch (const nlohmann::json::exception& err) {
        fail(std::string("bad config document: ") + err.what());
    }
}

RunConfig load_run_config(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw domain_error("config: cannot read " + path);
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return parse_run_config(buffer.str());
}

PhaseWaveFunction make_state(const RunConfig& config) {
    if (!config.grid || !config.state) throw domain_error("config: no grid/state to instantiate");
    const StateConfig& s = *config.state;
    if (s.generator == "gaussian") {
        return make_gaussian_packet(
            *config.grid, {s.center_a, s.center_b, s.sigma_a, s.sigma_b, config.hbar});
    }
    if (s.generator == "free_particle") {
        FreeParticleParams params;
        params.mass = s.mass;
        params.p0 = s.p0;
        params.time = s.time;
        params.hbar = config.hbar;
        params.edge_fraction = s.edge_fraction;
        params.slice_count = s.slice_count;
        params.slice_spacing = s.slice_spacing;
        return make_free_particle(*config.grid, params);
    }
    return sample_random_state(*config.grid, {s.seed, config.hbar, s.action_scale});
}

}  // namespace phaseq
