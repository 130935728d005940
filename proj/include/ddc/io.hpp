#pragma once

#include <cstdint>
#include <filesystem>
#include <string>

#include <json.hpp>

#include "ddc/field.hpp"
#include "ddc/solver.hpp"

namespace ddc {

struct IoError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Field snapshot CSV: header "# nx,ny,Lx,Ly,t", then ny rows of nx
/// comma-separated values (row j holds cells (0..nx-1, j)), 17 significant
/// digits throughout so reloads are bit-exact.
void write_field_csv(const std::filesystem::path& path, const ScalarField& f, double t);
ScalarField read_field_csv(const std::filesystem::path& path, double* t_out = nullptr);

void write_trajectory_csv(const std::filesystem::path& path, const Trajectory& traj);
void read_trajectory_csv(const std::filesystem::path& path, Trajectory& traj);

/// Auxiliary per-sample series (grad6 budget) kept next to the trajectory.
void write_budget_csv(const std::filesystem::path& path, const Trajectory& traj);
void read_budget_csv(const std::filesystem::path& path, Trajectory& traj);

void write_json(const std::filesystem::path& path, const nlohmann::json& j);
nlohmann::json read_json(const std::filesystem::path& path);

/// FNV-1a 64-bit content hash, as 16 hex characters.
std::uint64_t fnv1a64(const void* data, size_t len);
std::string hash_file(const std::filesystem::path& path);
std::string hash_string(const std::string& s);

std::string format_g17(double x);

}  // namespace ddc
