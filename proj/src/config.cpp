#include "ddc/config.hpp"

#include <cmath>
#include <set>

#include "ddc/io.hpp"

namespace ddc {

namespace {

using nlohmann::json;

void reject_unknown(const json& obj, const std::set<std::string>& known,
                    const std::string& where) {
    for (auto it = obj.begin(); it != obj.end(); ++it)
        if (!known.count(it.key()))
            throw ConfigError(where + ": unknown key \"" + it.key() + "\"");
}

double get_num(const json& obj, const std::string& key, const std::string& where) {
    if (!obj.contains(key)) throw ConfigError(where + "." + key + ": missing");
    if (!obj[key].is_number()) throw ConfigError(where + "." + key + ": not a number");
    return obj[key].get<double>();
}

double get_num_or(const json& obj, const std::string& key, double dflt,
                  const std::string& where) {
    if (!obj.contains(key)) return dflt;
    if (!obj[key].is_number()) throw ConfigError(where + "." + key + ": not a number");
    return obj[key].get<double>();
}

std::string get_str(const json& obj, const std::string& key, const std::string& where) {
    if (!obj.contains(key)) throw ConfigError(where + "." + key + ": missing");
    if (!obj[key].is_string()) throw ConfigError(where + "." + key + ": not a string");
    return obj[key].get<std::string>();
}

InitialSpec parse_initial(const json& obj, const std::string& where) {
    if (!obj.is_object()) throw ConfigError(where + ": not an object");
    InitialSpec spec;
    const std::string kind = get_str(obj, "kind", where);
    if (kind == "constant") {
        reject_unknown(obj, {"kind", "value"}, where);
        spec.kind = InitialSpec::Kind::Constant;
        spec.value = get_num(obj, "value", where);
    } else if (kind == "gaussian") {
        reject_unknown(obj, {"kind", "center", "width", "amplitude", "floor"}, where);
        spec.kind = InitialSpec::Kind::Gaussian;
        if (!obj.contains("center") || !obj["center"].is_array() ||
            obj["center"].size() != 2)
            throw ConfigError(where + ".center: expected [x, y]");
        spec.cx = obj["center"][0].get<double>();
        spec.cy = obj["center"][1].get<double>();
        spec.width = get_num(obj, "width", where);
        spec.amplitude = get_num(obj, "amplitude", where);
        spec.floor_val = get_num_or(obj, "floor", 0.0, where);
        if (!(spec.width > 0.0)) throw ConfigError(where + ".width: must be positive");
    } else if (kind == "checkerboard") {
        reject_unknown(obj, {"kind", "lo", "hi"}, where);
        spec.kind = InitialSpec::Kind::Checkerboard;
        spec.lo = get_num(obj, "lo", where);
        spec.hi = get_num(obj, "hi", where);
    } else if (kind == "file") {
        reject_unknown(obj, {"kind", "path"}, where);
        spec.kind = InitialSpec::Kind::File;
        spec.path = get_str(obj, "path", where);
    } else {
        throw ConfigError(where + ".kind: unknown kind \"" + kind + "\"");
    }
    return spec;
}

}  // namespace

RunConfig parse_run_config(const json& j) {
    if (!j.is_object()) throw ConfigError("config: not a JSON object");
    reject_unknown(j, {"model", "grid", "initial", "schedule", "stop", "output", "seed",
                       "dt_scale"},
                   "config");

    RunConfig cfg;
    cfg.echo = j;

    if (!j.contains("model")) throw ConfigError("config.model: missing");
    const json& m = j["model"];
    reject_unknown(m, {"m", "alpha", "ell", "Cf", "f_kind", "epsilon"}, "config.model");
    cfg.model.m = get_num(m, "m", "config.model");
    cfg.model.alpha = get_num(m, "alpha", "config.model");
    cfg.model.ell = get_num(m, "ell", "config.model");
    cfg.model.Cf = get_num(m, "Cf", "config.model");
    cfg.model.f_kind = fkind_from_string(get_str(m, "f_kind", "config.model"));
    cfg.model.epsilon = get_num(m, "epsilon", "config.model");
    require_case(cfg.model);

    if (!j.contains("grid")) throw ConfigError("config.grid: missing");
    const json& g = j["grid"];
    reject_unknown(g, {"nx", "ny", "Lx", "Ly"}, "config.grid");
    cfg.nx = static_cast<int>(get_num(g, "nx", "config.grid"));
    cfg.ny = static_cast<int>(get_num(g, "ny", "config.grid"));
    cfg.Lx = get_num(g, "Lx", "config.grid");
    cfg.Ly = get_num(g, "Ly", "config.grid");
    build_grid(cfg.nx, cfg.ny, cfg.Lx, cfg.Ly);  // validates

    if (!j.contains("initial")) throw ConfigError("config.initial: missing");
    const json& ini = j["initial"];
    reject_unknown(ini, {"u0", "v0"}, "config.initial");
    if (!ini.contains("u0")) throw ConfigError("config.initial.u0: missing");
    if (!ini.contains("v0")) throw ConfigError("config.initial.v0: missing");
    cfg.u0 = parse_initial(ini["u0"], "config.initial.u0");
    cfg.v0 = parse_initial(ini["v0"], "config.initial.v0");

    if (j.contains("schedule")) {
        const json& s = j["schedule"];
        reject_unknown(s, {"sample_dt", "snapshot_count", "snapshot_mode"},
                       "config.schedule");
        cfg.plan.sample_dt = get_num_or(s, "sample_dt", cfg.plan.sample_dt, "config.schedule");
        cfg.plan.snapshot_count = static_cast<int>(
            get_num_or(s, "snapshot_count", cfg.plan.snapshot_count, "config.schedule"));
        if (s.contains("snapshot_mode")) {
            const std::string mode = get_str(s, "snapshot_mode", "config.schedule");
            if (mode == "auto")
                cfg.plan.mode = SnapshotMode::Auto;
            else if (mode == "uniform")
                cfg.plan.mode = SnapshotMode::Uniform;
            else
                throw ConfigError("config.schedule.snapshot_mode: expected \"auto\" or \"uniform\"");
        }
        if (!(cfg.plan.sample_dt > 0.0))
            throw ConfigError("config.schedule.sample_dt: must be positive");
    }

    if (j.contains("stop")) {
        const json& s = j["stop"];
        reject_unknown(s, {"v_tol", "T_max"}, "config.stop");
        cfg.stop.v_tol = get_num_or(s, "v_tol", cfg.stop.v_tol, "config.stop");
        cfg.stop.T_max = get_num_or(s, "T_max", cfg.stop.T_max, "config.stop");
        if (cfg.stop.v_tol < 0.0) throw ConfigError("config.stop.v_tol: must be >= 0");
        if (!(cfg.stop.T_max > 0.0)) throw ConfigError("config.stop.T_max: must be positive");
    }

    if (j.contains("output")) cfg.output = get_str(j, "output", "config");
    if (j.contains("seed")) {
        if (!j["seed"].is_number_unsigned() && !j["seed"].is_number_integer())
            throw ConfigError("config.seed: not an integer");
        cfg.seed = j["seed"].get<std::uint64_t>();
    }
    cfg.dt_scale = get_num_or(j, "dt_scale", 1.0, "config");
    if (!(cfg.dt_scale > 0.0)) throw ConfigError("config.dt_scale: must be positive");

    return cfg;
}

RunConfig load_run_config(const std::filesystem::path& path) {
    return parse_run_config(read_json(path));
}

ScalarField make_field(const InitialSpec& spec, const Grid& grid) {
    ScalarField f(grid);
    switch (spec.kind) {
        case InitialSpec::Kind::Constant:
            for (double& x : f.data) x = spec.value;
            break;
        case InitialSpec::Kind::Gaussian:
            for (int j = 0; j < grid.ny; ++j)
                for (int i = 0; i < grid.nx; ++i) {
                    const double dx = grid.xc(i) - spec.cx;
                    const double dy = grid.yc(j) - spec.cy;
                    f(i, j) = spec.floor_val +
                              spec.amplitude *
                                  std::exp(-(dx * dx + dy * dy) /
                                           (2.0 * spec.width * spec.width));
                }
            break;
        case InitialSpec::Kind::Checkerboard:
            for (int j = 0; j < grid.ny; ++j)
                for (int i = 0; i < grid.nx; ++i) f(i, j) = ((i + j) % 2) ? spec.hi : spec.lo;
            break;
        case InitialSpec::Kind::File: {
            ScalarField loaded = read_field_csv(spec.path);
            if (!loaded.grid.same_as(grid))
                throw ConfigError("initial field file " + spec.path +
                                  " does not match the run grid");
            f = std::move(loaded);
            break;
        }
    }
    return f;
}

InitialData make_initial_data(const RunConfig& cfg, const Grid& grid) {
    InitialData data;
    data.u0 = make_field(cfg.u0, grid);
    data.v0 = make_field(cfg.v0, grid);
    return data;
}

Grid make_grid(const RunConfig& cfg) { return build_grid(cfg.nx, cfg.ny, cfg.Lx, cfg.Ly); }

}  // namespace ddc
