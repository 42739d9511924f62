#pragma once

#include <optional>
#include <string>
#include <vector>

#include <flexcross/flexion.hpp>

#include "config.hpp"

namespace flexcross::cli {

enum class Status { pass, fail, inconclusive, skipped, info };
const char* to_string(Status s);

struct CheckRecord {
  std::string name;
  std::string anchor;  // the identity or property being checked
  Status status = Status::pass;
  double residual = 0.0;
  double tolerance = 0.0;
  std::string note;
};

struct VerificationReport {
  std::vector<CheckRecord> checks;
  bool failed() const;
  bool inconclusive() const;
  std::string to_text() const;
  std::string to_json() const;
};

// 0 pass, 1 failure, 3 inconclusive (unless allowed).
int exit_status(const VerificationReport& r, bool allow_inconclusive);

VerificationReport cmd_verify(const RunConfig& cfg);

// Comma-separated table with '#' comment lines and a header row.
struct Table {
  std::vector<std::string> comments;
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
  std::string to_csv() const;
};

std::string format_double(double x);
std::string format_param(const FlexParam& u);

Table cmd_trajectory(const RunConfig& cfg);

struct TrajectoryRow {
  FlexParam u;
  std::vector<double> values;  // every column after u
};
struct Trajectory {
  std::vector<std::string> header;
  std::vector<TrajectoryRow> rows;
};
Trajectory read_trajectory(const std::string& csv);

enum class VolumeSelection { closed_form, schlafli, decomposition, all };
VolumeSelection volume_selection_from_string(const std::string& s);
Table cmd_volume(const RunConfig& cfg, VolumeSelection method);

struct CommandOutput {
  std::string text;
  int status = 0;
};

CommandOutput cmd_flat(const RunConfig& cfg);
CommandOutput cmd_embed(const RunConfig& cfg, const FlexParam& u, bool certificate);

enum class Projection { automatic, stereographic, klein, direct };
Projection projection_from_string(const std::string& s);
// Stereographic projection is taken from -m unless custom_pole (ambient coordinates) is given.
std::string cmd_mesh(const RunConfig& cfg, const FlexParam& u, Projection projection,
                     const std::optional<Vec>& custom_pole = std::nullopt);

// Writes via a temporary file in the same directory and renames it into place.
void write_atomic(const std::string& path, const std::string& content);

}  // namespace flexcross::cli
