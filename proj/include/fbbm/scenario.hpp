#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "fbbm/config.hpp"

namespace fbbm {

const char* tool_version();

/// One asserted check. A bound that is absent is not tested.
struct CheckResult {
  std::string name;
  double value = 0.0;
  std::optional<double> lower;
  std::optional<double> upper;
  bool passed = false;
};

struct RunManifest {
  std::string tool_version;
  std::string scenario;
  std::string config_hash;
  std::map<std::string, std::string> config;
  nlohmann::json grid;
  std::vector<CheckResult> checks;
  nlohmann::json results = nlohmann::json::array();
  std::vector<std::string> files;
  std::vector<std::string> errors;
  double wall_clock_seconds = 0.0;
  std::string started_utc;

  bool passed() const;
  int exit_status() const { return passed() ? 0 : 1; }
};

struct RunOptions {
  std::filesystem::path out_dir;  // empty: compute, but write nothing
};

/// Runs the configured scenario, fanning sweep entries out concurrently, and
/// writes CSV, plot data, summary.json and (atomically, last) manifest.json
/// into out_dir. Module errors are caught and recorded in the manifest.
RunManifest run_scenario(const ScenarioConfig& cfg, const RunOptions& opts = {});

/// Deterministic part of the manifest: everything except wall-clock data.
nlohmann::json summary_json(const RunManifest& m);
nlohmann::json manifest_json(const RunManifest& m);

/// Output directory when none is given: $FBBM_OUTPUT_ROOT (or ./fbbm-runs)
/// joined with "<scenario>-<config hash>".
std::filesystem::path default_run_dir(const ScenarioConfig& cfg);

/// JSON schema of summary.json, shipped in schemas/summary.schema.json.
const char* summary_schema();

}  // namespace fbbm
