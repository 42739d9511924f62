#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include <flexcross/flexion.hpp>

namespace flexcross::cli {

constexpr int kSchemaVersion = 1;
constexpr std::uint64_t kDefaultSeed = 0x5EED;

// Named pass/fail thresholds of the verification pipeline; every entry can be
// overridden from the config file or with --tol NAME=VALUE.
struct CheckTolerances {
  std::map<std::string, double> values;
  CheckTolerances();
  double operator[](const std::string& name) const;
  void set(const std::string& name, double value);  // throws on unknown names
};

struct RunConfig {
  SimplestTypeData data;
  std::vector<FlexParam> u_grid;
  std::uint64_t seed = kDefaultSeed;
  CheckTolerances tol;
  std::string source;
};

// Default grid: 0, ∞, ±10^t for 31 values of t in [-2, 2], and 1e-3 (65 points).
std::vector<FlexParam> default_grid();

// Sorts ascending with ∞ last and drops duplicates (u = -∞ is ∞).
std::vector<FlexParam> normalize_grid(std::vector<FlexParam> grid);

FlexParam parse_param(const std::string& token);

// Throws Error(input) for malformed documents (with line or field) and
// Error(invalid_data) when the data violates a construction condition.
RunConfig parse_config_text(const std::string& text, const std::string& source);
RunConfig parse_config(const std::string& path);

std::string config_to_json(const RunConfig& cfg);

// Precedence: config file < FLEXCROSS_SEED < --seed.
std::uint64_t parse_seed(const std::string& token);

// Comma-separated reals, e.g. "0,0,0,1".
Vec parse_vector(const std::string& token);

}  // namespace flexcross::cli
