// fbbm: command-line front end for the fBBM numerical lab.

#include <omp.h>

#include <CLI11.hpp>
#include <cstdio>
#include <iostream>

#include "fbbm/config.hpp"
#include "fbbm/scenario.hpp"

namespace {

int report_config_error(const fbbm::ConfigError& e, const std::string& path) {
  std::cerr << path << ": invalid configuration\n";
  for (const auto& v : e.violations()) std::cerr << "  " << v.str() << "\n";
  return 2;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"fractional BBM spectral lab"};
  app.require_subcommand(1);

  std::string config_path, out_dir;
  std::uint64_t seed = 0;
  int threads = 0;

  auto* run = app.add_subcommand("run", "run one scenario and write its outputs");
  run->add_option("config", config_path, "YAML config file")->required();
  auto* out_opt = run->add_option("--out", out_dir, "output directory (default: $FBBM_OUTPUT_ROOT/<scenario>-<hash>)");
  auto* seed_opt = run->add_option("--seed", seed, "override the config seed");
  run->add_option("--threads", threads, "OpenMP threads (default: runtime choice)")->check(CLI::NonNegativeNumber);

  auto* validate = app.add_subcommand("validate", "check a config and list every violation");
  validate->add_option("config", config_path, "YAML config file")->required();

  auto* schema = app.add_subcommand("schema", "print the JSON schema of summary.json");
  auto* keys = app.add_subcommand("keys", "list accepted config keys");

  CLI11_PARSE(app, argc, argv);

  if (schema->parsed()) {
    std::cout << fbbm::summary_schema();
    return 0;
  }
  if (keys->parsed()) {
    for (const auto& [k, help] : fbbm::config_keys()) std::printf("%-14s %s\n", k.c_str(), help.c_str());
    return 0;
  }

  fbbm::ScenarioConfig cfg;
  try {
    cfg = fbbm::load_config(config_path);
  } catch (const fbbm::ConfigError& e) {
    return report_config_error(e, config_path);
  }

  if (validate->parsed()) {
    std::cout << config_path << ": ok (" << fbbm::to_string(cfg.scenario) << ", "
              << cfg.sweep_size() << " sweep entr" << (cfg.sweep_size() == 1 ? "y" : "ies")
              << ", hash " << fbbm::hex64(fbbm::config_hash(cfg)) << ")\n";
    return 0;
  }

  if (*seed_opt) {
    cfg.seed = seed;
    cfg.echo["seed"] = std::to_string(seed);
  }
  if (threads > 0) omp_set_num_threads(threads);

  fbbm::RunOptions opts;
  if (*out_opt)
    opts.out_dir = out_dir;
  else if (!cfg.output.empty())
    opts.out_dir = cfg.output;
  else
    opts.out_dir = fbbm::default_run_dir(cfg);

  fbbm::RunManifest m;
  try {
    m = fbbm::run_scenario(cfg, opts);
  } catch (const std::exception& e) {
    std::cerr << "fbbm: " << e.what() << "\n";
    return 1;
  }
  for (const auto& c : m.checks) {
    std::printf("%s  %-60s %.6g", c.passed ? "PASS" : "FAIL", c.name.c_str(), c.value);
    if (c.lower && c.upper)
      std::printf("  in [%g, %g]\n", *c.lower, *c.upper);
    else if (c.upper)
      std::printf("  <= %g\n", *c.upper);
    else if (c.lower)
      std::printf("  >= %g\n", *c.lower);
    else
      std::printf("\n");
  }
  for (const auto& e : m.errors) std::printf("ERROR %s\n", e.c_str());
  std::printf("%s: %s (%.2f s) -> %s\n", m.scenario.c_str(), m.passed() ? "pass" : "FAIL",
              m.wall_clock_seconds, opts.out_dir.string().c_str());
  return m.exit_status();
}
