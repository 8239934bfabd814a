#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "fbbm/error.hpp"

namespace fbbm {

enum class Scenario { Evolve, GroundState, Stein, Commutators, WeightedGrowth, Ucp };

std::string to_string(Scenario s);

struct Violation {
  int line = 0;  // 0 when the problem is not tied to one line
  std::string field;
  std::string message;
  std::string str() const;
};

class ConfigError : public Error {
 public:
  explicit ConfigError(std::vector<Violation> v);
  const std::vector<Violation>& violations() const { return violations_; }

 private:
  std::vector<Violation> violations_;
};

/// One experiment. List-valued parameters describe a sweep: lists of equal
/// length are zipped and single values are broadcast.
struct ScenarioConfig {
  Scenario scenario = Scenario::Evolve;

  std::vector<double> alpha = {0.5};
  int k = 2;
  std::size_t n = 1024;
  double L = 50.0;
  double dt = 1e-2;
  double T = 1.0;
  std::vector<double> r = {1.0};
  std::vector<double> theta = {0.25};
  double b = 0.5;
  std::vector<double> c;
  double tol = 1e-12;
  std::size_t max_iter = 5000;
  std::uint64_t seed = 1;
  double t1 = 0.0;
  double t2 = 1.0;
  std::vector<double> window = {0.15, 0.6};  // tail-fit window, fractions of L

  std::string initial = "gaussian";  // gaussian | sech2 | odd | zero | qc
  double amplitude = 1.0;
  double width = 1.0;
  std::size_t record_every = 1;
  bool nonlinear = true;
  bool convergence = false;  // evolve: rerun at dt/2 and compare drifts
  bool refine = false;       // groundstate: rerun at (2n, 2L)
  bool dichotomy = true;     // stein: L2 threshold probe
  std::vector<double> times;
  int per_decade = 40;
  std::size_t corpus_size = 50;
  double beta = 0.25;

  std::string output;
  bool emit_csv = true;
  bool emit_json = true;
  bool emit_plotdata = true;

  /// Explicitly given keys with their normalized text, in key order.
  std::map<std::string, std::string> echo;

  /// Number of sweep entries after zipping.
  std::size_t sweep_size() const;
};

/// Parses a YAML mapping of scalars and flat lists. Collects every syntax and
/// domain problem before throwing ConfigError.
ScenarioConfig parse_config(const std::string& text);
ScenarioConfig load_config(const std::string& path);

/// 64-bit FNV-1a over the canonical echo.
std::uint64_t config_hash(const ScenarioConfig& cfg);
std::string hex64(std::uint64_t v);

/// Names and one-line descriptions of the accepted keys.
const std::vector<std::pair<std::string, std::string>>& config_keys();

}  // namespace fbbm
