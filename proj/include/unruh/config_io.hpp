#pragma once

// Run configuration: a JSON document mirroring CellConfig and SweepGrid.
// Command-line flags are applied on top of it by the CLI.

#include <string>
#include <vector>

#include <json.hpp>

#include "unruh/sweep.hpp"

namespace unruh {

struct RunConfig {
  CellConfig cell{};
  SweepGrid grid = default_sweep_grid();
  std::vector<int> n_list{10, 20, 30, 60, 110, 160, 210};
  std::string output_path;  ///< empty = stdout
  std::string format = "csv";
  int workers = 0;
  double length_m = 1.0;
};

/// Real literal with an optional pi factor: "0.25", "1e-2", "pi/32", "4pi",
/// "3*pi/4". Throws InvalidConfig.
double parse_real(const std::string& text);

/// "min:max:count" -> log-spaced values. Throws InvalidConfig.
std::vector<double> parse_grid(const std::string& text);

/// Unknown keys are rejected. Numbers may be given as strings accepted by
/// parse_real; grid axes as "min:max:count" strings or explicit arrays.
void apply_json(RunConfig& config, const nlohmann::json& doc);

/// Throws InvalidConfig for unreadable or malformed files.
RunConfig load_config(const std::string& path);

}  // namespace unruh
