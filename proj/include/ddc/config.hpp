#pragma once

#include <cstdint>
#include <filesystem>
#include <string>

#include <json.hpp>

#include "ddc/model.hpp"
#include "ddc/solver.hpp"

namespace ddc {

struct InitialSpec {
    enum class Kind { Constant, Gaussian, Checkerboard, File };
    Kind kind = Kind::Constant;
    double value = 1.0;                                    // constant
    double cx = 0.5, cy = 0.5;                             // gaussian
    double width = 0.15, amplitude = 1.0, floor_val = 0.0;
    double lo = 0.0, hi = 1.0;                             // checkerboard
    std::string path;                                      // file
};

struct RunConfig {
    ModelParams model;
    int nx = 64, ny = 64;
    double Lx = 1.0, Ly = 1.0;
    InitialSpec u0, v0;
    SamplePlan plan;
    StopRule stop;
    std::string output;
    std::uint64_t seed = 0;
    double dt_scale = 1.0;
    nlohmann::json echo;  // the raw config, for the manifest
};

/// Strict parse: unknown keys anywhere are an error; messages carry the
/// failing key path. Model parameters are classified immediately so a bad
/// (m, alpha) pair is rejected with the violated inequality.
RunConfig parse_run_config(const nlohmann::json& j);
RunConfig load_run_config(const std::filesystem::path& path);

ScalarField make_field(const InitialSpec& spec, const Grid& grid);
InitialData make_initial_data(const RunConfig& cfg, const Grid& grid);
Grid make_grid(const RunConfig& cfg);

}  // namespace ddc
