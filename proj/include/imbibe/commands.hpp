#pragma once

// CLI orchestration shared by the `imbibe` executable, the Python module and
// the tests. Every command writes its outputs plus a run_record.json
// (input digests, seed, versions) into one output directory.

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "imbibe/manifest.hpp"

namespace imbibe {

enum class Command { Simulate, Calibrate, Retention, Sensitivity, Ingest };

Command parse_command(const std::string& name);
std::string to_string(Command c);

/// Command-line values; each one overrides the matching manifest key.
struct Overrides {
  std::optional<std::filesystem::path> manifest;
  std::optional<std::filesystem::path> out;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> model;
  std::optional<double> dz;
  std::optional<double> dt;
  std::optional<std::vector<double>> snapshots;
  std::optional<std::filesystem::path> input;  ///< raw imbibition CSV for `ingest`
};

void apply_overrides(RunManifest& manifest, const Overrides& o);

struct CommandOutcome {
  std::filesystem::path out_dir;
  std::vector<std::filesystem::path> files;
  std::string summary;  ///< one-line JSON summary
};

/// Runs one command; throws imbibe::Error on any validation or solver failure.
CommandOutcome run_command(const RunManifest& manifest, Command command, const std::filesystem::path& out_dir);

/// Full CLI path: load manifest, apply overrides, run. Returns the exit status
/// (0 on success); failures print {"error": {"kind": ..., "message": ...}} to `err`.
int execute(Command command, const Overrides& overrides, std::ostream& out, std::ostream& err);

/// Lowercase hex SHA-256 of a file's bytes.
std::string sha256_file(const std::filesystem::path& path);

std::vector<double> parse_number_list(const std::string& csv);

}  // namespace imbibe
