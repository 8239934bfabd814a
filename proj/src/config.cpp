#include "fbbm/config.hpp"

#include <yaml-cpp/yaml.h>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <set>
#include <sstream>

namespace fbbm {

namespace {

std::string fmt_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string fmt_list(const std::vector<double>& v) {
  std::string s = "[";
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? ", " : "") + fmt_double(v[i]);
  return s + "]";
}

struct Ctx {
  ScenarioConfig& cfg;
  std::vector<Violation>& out;
  std::map<std::string, int> lines;
  bool scenario_seen = false;

  void fail(const std::string& field, const std::string& msg) {
    auto it = lines.find(field);
    out.push_back({it == lines.end() ? 0 : it->second, field, msg});
  }
};

bool read_double(const YAML::Node& n, double& v) {
  if (!n.IsScalar()) return false;
  try {
    v = n.as<double>();
  } catch (const YAML::Exception&) {
    return false;
  }
  return std::isfinite(v);
}

bool read_list(const YAML::Node& n, std::vector<double>& v) {
  v.clear();
  if (n.IsScalar()) {
    double x;
    if (!read_double(n, x)) return false;
    v.push_back(x);
    return true;
  }
  if (!n.IsSequence() || n.size() == 0) return false;
  for (const auto& e : n) {
    double x;
    if (!read_double(e, x)) return false;
    v.push_back(x);
  }
  return true;
}

bool read_int(const YAML::Node& n, long long& v) {
  double x;
  if (!read_double(n, x) || x != std::floor(x) || std::abs(x) > 9.0e15) return false;
  v = static_cast<long long>(x);
  return true;
}

bool read_bool(const YAML::Node& n, bool& v) {
  if (!n.IsScalar()) return false;
  try {
    v = n.as<bool>();
  } catch (const YAML::Exception&) {
    return false;
  }
  return true;
}

using Setter = std::function<void(Ctx&, const std::string&, const YAML::Node&)>;

struct KeyDef {
  std::string name;
  std::string help;
  Setter set;
};

Setter number(double ScenarioConfig::*field) {
  return [field](Ctx& c, const std::string& key, const YAML::Node& n) {
    double v;
    if (!read_double(n, v)) return c.fail(key, "expected a finite number");
    c.cfg.*field = v;
    c.cfg.echo[key] = fmt_double(v);
  };
}

Setter list(std::vector<double> ScenarioConfig::*field) {
  return [field](Ctx& c, const std::string& key, const YAML::Node& n) {
    std::vector<double> v;
    if (!read_list(n, v)) return c.fail(key, "expected a number or a non-empty list of numbers");
    c.cfg.*field = v;
    c.cfg.echo[key] = fmt_list(v);
  };
}

template <class Int>
Setter integer(Int ScenarioConfig::*field) {
  return [field](Ctx& c, const std::string& key, const YAML::Node& n) {
    long long v;
    if (!read_int(n, v)) return c.fail(key, "expected an integer");
    if (v < 0) return c.fail(key, key + " must be nonnegative");
    c.cfg.*field = static_cast<Int>(v);
    c.cfg.echo[key] = std::to_string(v);
  };
}

Setter flag(bool ScenarioConfig::*field) {
  return [field](Ctx& c, const std::string& key, const YAML::Node& n) {
    bool v;
    if (!read_bool(n, v)) return c.fail(key, "expected true or false");
    c.cfg.*field = v;
    c.cfg.echo[key] = v ? "true" : "false";
  };
}

Setter text(std::string ScenarioConfig::*field) {
  return [field](Ctx& c, const std::string& key, const YAML::Node& n) {
    if (!n.IsScalar()) return c.fail(key, "expected a string");
    c.cfg.*field = n.Scalar();
    c.cfg.echo[key] = n.Scalar();
  };
}

const std::vector<KeyDef>& key_table() {
  static const std::vector<KeyDef> table = {
      {"scenario", "evolve | groundstate | stein | commutators | weighted-growth | ucp",
       [](Ctx& c, const std::string& key, const YAML::Node& n) {
         static const std::map<std::string, Scenario> names = {
             {"evolve", Scenario::Evolve},       {"groundstate", Scenario::GroundState},
             {"stein", Scenario::Stein},         {"commutators", Scenario::Commutators},
             {"weighted-growth", Scenario::WeightedGrowth}, {"ucp", Scenario::Ucp}};
         if (!n.IsScalar() || !names.count(n.Scalar()))
           return c.fail(key, "unknown scenario; expected one of evolve, groundstate, stein, "
                              "commutators, weighted-growth, ucp");
         c.cfg.scenario = names.at(n.Scalar());
         c.cfg.echo[key] = n.Scalar();
         c.scenario_seen = true;
       }},
      {"alpha", "dispersion order(s), each in (0, 2]", list(&ScenarioConfig::alpha)},
      {"k", "nonlinearity power, integer in [2, 9]", integer(&ScenarioConfig::k)},
      {"n", "grid points, power of two >= 16", integer(&ScenarioConfig::n)},
      {"L", "box half-length", number(&ScenarioConfig::L)},
      {"dt", "time step", number(&ScenarioConfig::dt)},
      {"T", "final time", number(&ScenarioConfig::T)},
      {"r", "weight exponent(s) for weighted-growth", list(&ScenarioConfig::r)},
      {"theta", "Stein order(s), each in (0, 1)", list(&ScenarioConfig::theta)},
      {"b", "order of the grid Stein derivative, in (0, 1)", number(&ScenarioConfig::b)},
      {"c", "wave speed(s), each > 1", list(&ScenarioConfig::c)},
      {"tol", "Petviashvili tolerance", number(&ScenarioConfig::tol)},
      {"max_iter", "Petviashvili iteration cap", integer(&ScenarioConfig::max_iter)},
      {"seed", "corpus seed", integer(&ScenarioConfig::seed)},
      {"t1", "first time of the residual window", number(&ScenarioConfig::t1)},
      {"t2", "second time of the residual window", number(&ScenarioConfig::t2)},
      {"window", "tail-fit window [lo, hi] as fractions of L", list(&ScenarioConfig::window)},
      {"initial", "gaussian | sech2 | odd | zero | qc", text(&ScenarioConfig::initial)},
      {"amplitude", "initial amplitude", number(&ScenarioConfig::amplitude)},
      {"width", "initial width", number(&ScenarioConfig::width)},
      {"record_every", "steps between records", integer(&ScenarioConfig::record_every)},
      {"nonlinear", "include the u^k term", flag(&ScenarioConfig::nonlinear)},
      {"convergence", "evolve: rerun at dt/2", flag(&ScenarioConfig::convergence)},
      {"refine", "groundstate: rerun at (2n, 2L)", flag(&ScenarioConfig::refine)},
      {"dichotomy", "stein: L2 threshold probe", flag(&ScenarioConfig::dichotomy)},
      {"times", "weighted-growth sample times", list(&ScenarioConfig::times)},
      {"per_decade", "Stein probes per decade", integer(&ScenarioConfig::per_decade)},
      {"corpus_size", "commutator corpus size", integer(&ScenarioConfig::corpus_size)},
      {"beta", "negative power for the Stein bound, in (0, 1/2)", number(&ScenarioConfig::beta)},
      {"output", "output directory", text(&ScenarioConfig::output)},
      {"emit_csv", "write CSV series", flag(&ScenarioConfig::emit_csv)},
      {"emit_json", "write the JSON summary", flag(&ScenarioConfig::emit_json)},
      {"emit_plotdata", "write two-column .dat files", flag(&ScenarioConfig::emit_plotdata)},
  };
  return table;
}

bool is_pow2(std::size_t n) { return n >= 16 && (n & (n - 1)) == 0; }

void check_domains(Ctx& c) {
  auto& g = c.cfg;
  const auto has = [&](const char* k) { return g.echo.count(k) > 0; };
  for (double a : g.alpha)
    if (!(a > 0.0 && a <= 2.0)) c.fail("alpha", "alpha must lie in (0, 2], got " + fmt_double(a));
  if (g.k < 2 || g.k > 9) c.fail("k", "k must be an integer in [2, 9]");
  if (!is_pow2(g.n)) c.fail("n", "n must be a power of two >= 16");
  if (!(g.L > 0.0)) c.fail("L", "L must be positive");
  if (!(g.dt > 0.0)) c.fail("dt", "dt must be positive");
  if (!(g.T > 0.0)) c.fail("T", "T must be positive");
  for (double v : g.theta)
    if (!(v > 0.0 && v < 1.0)) c.fail("theta", "theta must lie in (0, 1), got " + fmt_double(v));
  for (double v : g.r)
    if (!(v >= 0.0)) c.fail("r", "r must be nonnegative, got " + fmt_double(v));
  if (!(g.b > 0.0 && g.b < 1.0)) c.fail("b", "b must lie in (0, 1)");
  for (double v : g.c)
    if (!(v > 1.0)) c.fail("c", "c must exceed 1, got " + fmt_double(v));
  if (!(g.tol > 0.0)) c.fail("tol", "tol must be positive");
  if (g.max_iter < 1) c.fail("max_iter", "max_iter must be at least 1");
  if (!(g.t1 >= 0.0)) c.fail("t1", "t1 must be nonnegative");
  if ((has("t1") || has("t2") || g.scenario == Scenario::Ucp) && !(g.t1 < g.t2))
    c.fail("t2", "t1 < t2 required");
  if (g.window.size() != 2 || !(g.window[0] > 0.0 && g.window[0] < g.window[1] && g.window[1] <= 0.7))
    c.fail("window", "window must be [lo, hi] with 0 < lo < hi <= 0.7");
  static const std::set<std::string> inits = {"gaussian", "sech2", "odd", "zero", "qc"};
  if (!inits.count(g.initial)) c.fail("initial", "initial must be gaussian, sech2, odd, zero or qc");
  if (!(g.width > 0.0)) c.fail("width", "width must be positive");
  if (g.record_every < 1) c.fail("record_every", "record_every must be at least 1");
  for (double t : g.times)
    if (!(t > 0.0)) c.fail("times", "times must be positive");
  if (g.per_decade < 4) c.fail("per_decade", "per_decade must be at least 4");
  if (g.corpus_size < 2) c.fail("corpus_size", "corpus_size must be at least 2");
  if (!(g.beta > 0.0 && g.beta < 0.5)) c.fail("beta", "beta must lie in (0, 1/2)");

  auto zip = [&](const std::vector<std::pair<const char*, std::size_t>>& lists) {
    std::size_t m = 1;
    for (auto& [name, len] : lists) m = std::max(m, len);
    for (auto& [name, len] : lists)
      if (len != 1 && len != m && len != 0)
        c.fail(name, std::string(name) + " has " + std::to_string(len) +
                         " entries; swept lists must share one length (or have one entry)");
  };
  switch (g.scenario) {
    case Scenario::Stein:
      zip({{"alpha", g.alpha.size()}, {"theta", g.theta.size()}});
      break;
    case Scenario::GroundState:
      zip({{"alpha", g.alpha.size()}, {"c", g.c.size()}});
      break;
    case Scenario::WeightedGrowth:
      zip({{"alpha", g.alpha.size()}, {"r", g.r.size()}});
      for (std::size_t i = 0; i < std::max(g.alpha.size(), g.r.size()); ++i) {
        const double a = g.alpha[std::min(i, g.alpha.size() - 1)];
        const double r = g.r[std::min(i, g.r.size() - 1)];
        if (!(r < 1.5 + a)) c.fail("r", "r must be below 3/2 + alpha");
      }
      if (g.times.size() < 2) c.fail("times", "weighted-growth needs at least two times");
      break;
    case Scenario::Evolve:
    case Scenario::Ucp:
      if (g.initial == "qc" && g.c.empty()) c.fail("c", "initial = qc needs a wave speed c");
      break;
    case Scenario::Commutators:
      break;
  }
}

}  // namespace

std::string to_string(Scenario s) {
  switch (s) {
    case Scenario::Evolve: return "evolve";
    case Scenario::GroundState: return "groundstate";
    case Scenario::Stein: return "stein";
    case Scenario::Commutators: return "commutators";
    case Scenario::WeightedGrowth: return "weighted-growth";
    case Scenario::Ucp: return "ucp";
  }
  return "unknown";
}

std::string Violation::str() const {
  std::string s;
  if (line > 0) s += "line " + std::to_string(line) + ": ";
  if (!field.empty()) s += field + ": ";
  return s + message;
}

ConfigError::ConfigError(std::vector<Violation> v)
    : Error([&] {
        std::string msg = "invalid configuration:";
        for (const auto& x : v) msg += "\n  " + x.str();
        return msg;
      }()),
      violations_(std::move(v)) {}

std::size_t ScenarioConfig::sweep_size() const {
  switch (scenario) {
    case Scenario::Stein: return std::max(alpha.size(), theta.size());
    case Scenario::GroundState: return std::max(alpha.size(), c.size());
    case Scenario::WeightedGrowth: return std::max(alpha.size(), r.size());
    default: return alpha.size();
  }
}

ScenarioConfig parse_config(const std::string& text) {
  ScenarioConfig cfg;
  std::vector<Violation> out;
  YAML::Node root;
  try {
    root = YAML::Load(text);
  } catch (const YAML::ParserException& e) {
    throw ConfigError({{e.mark.line + 1, "", "syntax error: " + e.msg}});
  }
  if (!root.IsMap()) throw ConfigError({{0, "", "document must be a mapping of key: value pairs"}});

  Ctx ctx{cfg, out, {}};
  std::map<std::string, const KeyDef*> defs;
  for (const auto& d : key_table()) defs[d.name] = &d;
  std::vector<std::pair<std::string, YAML::Node>> entries;
  for (const auto& kv : root) {
    const std::string key = kv.first.Scalar();
    const int line = kv.first.Mark().line + 1;
    if (ctx.lines.count(key)) {
      out.push_back({line, key, "duplicate key"});
      continue;
    }
    ctx.lines[key] = line;
    if (!defs.count(key)) {
      out.push_back({line, key, "unknown key"});
      continue;
    }
    entries.emplace_back(key, kv.second);
  }
  for (const auto& [key, node] : entries) defs.at(key)->set(ctx, key, node);
  if (!ctx.scenario_seen && !ctx.lines.count("scenario")) out.push_back({0, "scenario", "scenario is required"});
  check_domains(ctx);
  std::stable_sort(out.begin(), out.end(), [](const Violation& a, const Violation& b) { return a.line < b.line; });
  if (!out.empty()) throw ConfigError(std::move(out));
  return cfg;
}

ScenarioConfig load_config(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError({{0, "", "cannot open " + path}});
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

std::uint64_t config_hash(const ScenarioConfig& cfg) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  auto feed = [&](const std::string& s) {
    for (unsigned char ch : s) {
      h ^= ch;
      h *= 0x100000001b3ULL;
    }
  };
  for (const auto& [k, v] : cfg.echo) {
    if (k == "output") continue;
    feed(k);
    feed("=");
    feed(v);
    feed("\n");
  }
  return h;
}

std::string hex64(std::uint64_t v) {
  char buf[20];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

const std::vector<std::pair<std::string, std::string>>& config_keys() {
  static const auto keys = [] {
    std::vector<std::pair<std::string, std::string>> v;
    for (const auto& d : key_table()) v.emplace_back(d.name, d.help);
    return v;
  }();
  return keys;
}

}  // namespace fbbm
