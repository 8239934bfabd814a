#include "fbbm/scenario.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <ctime>
#include <fstream>
#include <numbers>
#include <set>

#include "fbbm/diagnostics.hpp"
#include "fbbm/error.hpp"
#include "fbbm/estimates.hpp"
#include "fbbm/evolution.hpp"
#include "fbbm/fit.hpp"
#include "fbbm/ground_state.hpp"
#include "fbbm/multiplier.hpp"
#include "fbbm/schema_text.hpp"
#include "fbbm/stein.hpp"
#include "fbbm/weights.hpp"

namespace fbbm {

namespace {

using nlohmann::json;

struct Table {
  std::string name;
  std::vector<std::string> columns;  // "name [unit]"
  std::vector<std::vector<double>> rows;
};

struct Curve {
  std::string name;
  std::string xlabel, ylabel;
  std::vector<double> x, y;
};

struct EntryOutput {
  json results = json::object();
  std::vector<CheckResult> checks;
  std::vector<Table> tables;
  std::vector<Curve> curves;
  std::string error;
};

CheckResult at_most(std::string name, double v, double hi) {
  return {std::move(name), v, std::nullopt, hi, std::isfinite(v) && v <= hi};
}
CheckResult at_least(std::string name, double v, double lo) {
  return {std::move(name), v, lo, std::nullopt, std::isfinite(v) && v >= lo};
}
CheckResult within(std::string name, double v, double lo, double hi) {
  return {std::move(name), v, lo, hi, std::isfinite(v) && v >= lo && v <= hi};
}

template <class T>
T pick(const std::vector<T>& v, std::size_t i) {
  return v[std::min(i, v.size() - 1)];
}

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%g", v);
  return buf;
}

std::string tag(std::size_t i) { return std::to_string(i); }

Field initial_field(const ScenarioConfig& cfg, double alpha, double c, json& info) {
  const double A = cfg.amplitude, w = cfg.width;
  if (cfg.initial == "qc") {
    const double dil = qc_dilation(alpha, c);
    PetviashviliOptions po;
    po.tol = cfg.tol;
    po.max_iter = cfg.max_iter;
    const auto gs = petviashvili_solve(alpha, make_grid(cfg.n, cfg.L * dil), po);
    info["psi_iterations"] = gs.iterations;
    info["psi_residual_inf"] = gs.residual_inf;
    info["c"] = c;
    return scale_to_qc(gs, c);
  }
  const auto grid = make_grid(cfg.n, cfg.L);
  if (cfg.initial == "gaussian") return sample(grid, [&](double x) { return A * std::exp(-(x / w) * (x / w)); });
  if (cfg.initial == "sech2")
    return sample(grid, [&](double x) {
      const double s = 1.0 / std::cosh(x / w);
      return A * s * s;
    });
  if (cfg.initial == "odd")
    return sample(grid, [&](double x) { return A * (x / w) * std::exp(-(x / w) * (x / w)); });
  return Field(grid);
}

struct Drifts {
  double mass = 0.0, energy = 0.0, hamiltonian = 0.0, l2 = 0.0;
};

Drifts drifts(const Trajectory& tr) {
  Drifts d;
  const auto& r = tr.diagnostics.records;
  const auto& r0 = r.front();
  for (const auto& x : r) {
    d.mass = std::max(d.mass, std::abs(x.mass - r0.mass) / std::max(1.0, std::abs(r0.mass)));
    d.energy = std::max(d.energy, std::abs(x.energy - r0.energy) / std::max(1e-300, std::abs(r0.energy)));
    d.hamiltonian = std::max(d.hamiltonian, std::abs(x.hamiltonian - r0.hamiltonian) /
                                                std::max(1e-300, std::abs(r0.hamiltonian)));
    d.l2 = std::max(d.l2, std::abs(x.l2 - r0.l2) / std::max(1e-300, r0.l2));
  }
  return d;
}

Table series_table(const std::string& name, const Trajectory& tr) {
  Table t{name,
          {"t [time]", "mass [amplitude*length]", "energy [amplitude^2*length]",
           "hamiltonian [amplitude^2*length]", "l2 [amplitude*length^0.5]", "linf [amplitude]",
           "power_integral [amplitude^k*length]"},
          {}};
  for (const auto& r : tr.diagnostics.records)
    t.rows.push_back({r.t, r.mass, r.energy, r.hamiltonian, r.l2, r.linf, r.power_integral});
  return t;
}

EvolveConfig evolve_config(const ScenarioConfig& cfg, double alpha, const Field& phi) {
  EvolveConfig ec;
  ec.alpha = alpha;
  ec.k = cfg.k;
  ec.dt = cfg.dt;
  ec.T = cfg.T;
  ec.n = phi.grid->n();
  ec.L = phi.grid->half_length();
  ec.record_every = cfg.record_every;
  ec.nonlinear = cfg.nonlinear;
  ec.keep_snapshots = false;
  return ec;
}

// ---------------------------------------------------------------- evolve

EntryOutput run_evolve(const ScenarioConfig& cfg, std::size_t i) {
  EntryOutput o;
  const double alpha = pick(cfg.alpha, i);
  const double c = cfg.c.empty() ? 0.0 : pick(cfg.c, i);
  o.results["alpha"] = alpha;
  const Field phi = initial_field(cfg, alpha, c, o.results);
  auto ec = evolve_config(cfg, alpha, phi);
  ec.keep_snapshots = true;
  const auto tr = run(ec, phi);
  const auto d = drifts(tr);
  const std::string s = "[alpha=" + fmt(alpha) + "]";
  o.results["dt_used"] = tr.dt;
  o.results["records"] = tr.times.size();
  o.results["final_time"] = tr.times.back();
  o.results["blowup_suspected"] = tr.blowup_suspected;
  if (!tr.note.empty()) o.results["note"] = tr.note;
  o.results["mass_drift"] = d.mass;
  o.results["energy_drift"] = d.energy;
  o.results["hamiltonian_drift"] = d.hamiltonian;
  o.results["l2_drift"] = d.l2;
  o.checks.push_back(at_most("no_blowup" + s, tr.blowup_suspected ? 1.0 : 0.0, 0.0));
  o.checks.push_back(at_most("mass_drift" + s, d.mass, 1e-8));
  if (!cfg.nonlinear) o.checks.push_back(at_most("linear_l2_drift" + s, d.l2, 1e-12));
  if (cfg.initial == "qc") {
    double shift = 0.0;
    const double err = translated_shape_error(tr.fields.back(), phi, &shift);
    o.results["shape_error"] = err;
    o.results["shape_shift"] = shift;
    o.checks.push_back(at_most("translated_shape_error" + s, err, 1e-3));
  }
  if (cfg.convergence) {
    auto ec2 = ec;
    ec2.dt = 0.5 * tr.dt;
    ec2.record_every = 2 * ec.record_every;
    ec2.keep_snapshots = false;
    const auto tr2 = run(ec2, phi);
    const auto d2 = drifts(tr2);
    const double re = d.energy / d2.energy, rh = d.hamiltonian / d2.hamiltonian;
    o.results["energy_drift_half_dt"] = d2.energy;
    o.results["hamiltonian_drift_half_dt"] = d2.hamiltonian;
    o.results["energy_drift_ratio"] = re;
    o.results["hamiltonian_drift_ratio"] = rh;
    o.results["mass_drift_half_dt"] = d2.mass;
    o.checks.push_back(within("energy_drift_ratio" + s, re, 12.0, 20.0));
    o.checks.push_back(within("hamiltonian_drift_ratio" + s, rh, 12.0, 20.0));
  }
  o.tables.push_back(series_table("timeseries_" + tag(i), tr));
  Table prof{"profile_" + tag(i), {"x [length]", "u0 [amplitude]", "uT [amplitude]"}, {}};
  const auto xs = phi.grid->xs();
  for (std::size_t j = 0; j < xs.size(); ++j)
    prof.rows.push_back({xs[j], phi.values[j], tr.fields.back().values[j]});
  o.tables.push_back(std::move(prof));
  Curve cv{"energy_drift_" + tag(i), "t", "relative energy drift", {}, {}};
  const double e0 = tr.diagnostics.records.front().energy;
  for (const auto& r : tr.diagnostics.records) {
    cv.x.push_back(r.t);
    cv.y.push_back(std::abs(r.energy - e0) / e0);
  }
  o.curves.push_back(std::move(cv));
  return o;
}

// ----------------------------------------------------------- groundstate

EntryOutput run_groundstate(const ScenarioConfig& cfg, std::size_t i) {
  EntryOutput o;
  const double alpha = pick(cfg.alpha, i);
  const std::string s = "[alpha=" + fmt(alpha) + "]";
  o.results["alpha"] = alpha;
  PetviashviliOptions po;
  po.tol = cfg.tol;
  po.max_iter = cfg.max_iter;
  const auto grid = make_grid(cfg.n, cfg.L);
  const auto gs = petviashvili_solve(alpha, grid, po);
  o.results["iterations"] = gs.iterations;
  o.results["residual_inf"] = gs.residual_inf;
  o.results["stabilizer"] = gs.stabilizer;
  o.results["psi_max"] = linf_norm(gs.profile);
  o.checks.push_back(at_most("profile_residual" + s, gs.residual_inf, 1e-6));
  if (alpha == 2.0) {
    double err = 0.0;
    const auto xs = grid->xs();
    for (std::size_t j = 0; j < xs.size(); ++j) {
      const double sh = 1.0 / std::cosh(0.5 * xs[j]);
      err = std::max(err, std::abs(gs.profile.values[j] - 3.0 * sh * sh));
    }
    o.results["sech2_linf_error"] = err;
    o.checks.push_back(at_most("sech2_linf_error" + s, err, 1e-6));
  }
  if (!cfg.c.empty()) {
    const double c = pick(cfg.c, i);
    const Field q = scale_to_qc(gs, c);
    const double res = qc_residual(q, alpha, c);
    o.results["c"] = c;
    o.results["qc_residual"] = res;
    o.results["qc_half_length"] = q.grid->half_length();
    o.checks.push_back(at_most("qc_residual[alpha=" + fmt(alpha) + ",c=" + fmt(c) + "]", res, 1e-6));
    Table qt{"qc_" + tag(i), {"y [length]", "Q [amplitude]"}, {}};
    const auto ys = q.grid->xs();
    for (std::size_t j = 0; j < ys.size(); ++j) qt.rows.push_back({ys[j], q.values[j]});
    o.tables.push_back(std::move(qt));
  }
  if (alpha < 1.0) {
    const auto fit = fit_tail_exponent(gs.profile, cfg.window[0] * cfg.L, cfg.window[1] * cfg.L);
    o.results["tail_exponent"] = fit.exponent;
    o.results["tail_r_squared"] = fit.r_squared;
    o.results["tail_window"] = {fit.x_lo, fit.x_hi};
    o.checks.push_back(within("tail_exponent" + s, fit.exponent, 1.0 + alpha - 0.15, 1.0 + alpha + 0.15));
    o.checks.push_back(at_least("tail_r_squared" + s, fit.r_squared, 0.995));
    if (cfg.refine) {
      const auto gs2 = petviashvili_solve(alpha, make_grid(2 * cfg.n, 2 * cfg.L), po);
      const auto fit2 =
          fit_tail_exponent(gs2.profile, cfg.window[0] * 2 * cfg.L, cfg.window[1] * 2 * cfg.L);
      o.results["tail_exponent_2L"] = fit2.exponent;
      o.results["tail_r_squared_2L"] = fit2.r_squared;
      o.checks.push_back(at_most("tail_exponent_L_doubling" + s, std::abs(fit2.exponent - fit.exponent), 0.05));
    }
    Curve tc{"tail_" + tag(i), "x", "psi", {}, {}};
    const auto xs = grid->xs();
    for (std::size_t j = 0; j < xs.size(); ++j)
      if (xs[j] > 0.0) {
        tc.x.push_back(xs[j]);
        tc.y.push_back(gs.profile.values[j]);
      }
    o.curves.push_back(std::move(tc));
  }
  Table pt{"profile_" + tag(i), {"x [length]", "psi [amplitude]"}, {}};
  const auto xs = grid->xs();
  for (std::size_t j = 0; j < xs.size(); ++j) pt.rows.push_back({xs[j], gs.profile.values[j]});
  o.tables.push_back(std::move(pt));
  return o;
}

// ----------------------------------------------------------------- stein

EntryOutput run_stein(const ScenarioConfig& cfg, std::size_t i) {
  EntryOutput o;
  const double alpha = pick(cfg.alpha, i), theta = pick(cfg.theta, i);
  const std::string s = "[alpha=" + fmt(alpha) + ",theta=" + fmt(theta) + "]";
  o.results["alpha"] = alpha;
  o.results["theta"] = theta;
  if (alpha == theta) {
    // logarithmic branch: curve only
    const auto g = power_times_cutoff(alpha, {});
    const auto etas = log_probes(1e-3, 1e2, cfg.per_decade);
    const auto vals = stein_probe_sweep(g, etas, theta);
    o.results["log_branch"] = true;
    Table pt{"probes_" + tag(i), {"eta [frequency]", "stein_value [amplitude]"}, {}};
    Curve cv{"probes_" + tag(i), "eta", "D^theta(|xi|^alpha psi)", etas, vals};
    for (std::size_t j = 0; j < etas.size(); ++j) pt.rows.push_back({etas[j], vals[j]});
    o.tables.push_back(std::move(pt));
    o.curves.push_back(std::move(cv));
    return o;
  }
  const auto rep = stein_asymptotics(alpha, theta, {}, cfg.per_decade);
  o.results["p_small"] = rep.p_small;
  o.results["r2_small"] = rep.r2_small;
  o.results["p_large"] = rep.p_large;
  o.results["r2_large"] = rep.r2_large;
  o.results["plateau"] = rep.plateau;
  o.results["log_corrected"] = rep.log_corrected;
  o.results["small_inconclusive"] = rep.small_inconclusive;
  o.results["large_inconclusive"] = rep.large_inconclusive;
  o.checks.push_back(within("p_small" + s, rep.p_small, alpha - theta - 0.1, alpha - theta + 0.1));
  o.checks.push_back(within("p_large" + s, rep.p_large, -0.5 - theta - 0.1, -0.5 - theta + 0.1));
  o.checks.push_back(at_least("r2_small" + s, rep.r2_small, 0.98));
  o.checks.push_back(at_least("r2_large" + s, rep.r2_large, 0.98));
  Table pt{"probes_" + tag(i), {"eta [frequency]", "stein_value [amplitude]", "branch [0=small,1=large]"}, {}};
  Curve cv{"probes_" + tag(i), "eta", "D^theta(|xi|^alpha psi)", {}, {}};
  for (std::size_t j = 0; j < rep.small_eta.size(); ++j) {
    pt.rows.push_back({rep.small_eta[j], rep.small_values[j], 0.0});
    cv.x.push_back(rep.small_eta[j]);
    cv.y.push_back(rep.small_values[j]);
  }
  for (std::size_t j = 0; j < rep.large_eta.size(); ++j) {
    pt.rows.push_back({rep.large_eta[j], rep.large_values[j], 1.0});
    cv.x.push_back(rep.large_eta[j]);
    cv.y.push_back(rep.large_values[j]);
  }
  o.tables.push_back(std::move(pt));
  o.curves.push_back(std::move(cv));

  const auto bb = bbm_symbol_stein_bound(alpha, theta, {}, cfg.per_decade);
  o.results["bbm_bound_constant"] = bb.constant;
  o.results["bbm_bound_refined"] = bb.refined_constant;
  o.checks.push_back(within("bbm_bound_refinement" + s, bb.refinement_factor, 0.5, 2.0));
  Table bt{"bbm_bound_" + tag(i), {"eta [frequency]", "ratio [1]"}, {}};
  for (std::size_t j = 0; j < bb.eta.size(); ++j) bt.rows.push_back({bb.eta[j], bb.ratio[j]});
  o.tables.push_back(std::move(bt));

  const auto nb = negative_power_bound(cfg.beta, theta, {}, cfg.per_decade);
  o.results["negative_power_sup"] = nb.constant;
  o.results["negative_power_sup_refined"] = nb.refined_constant;
  o.results["negative_power_refinement"] = nb.refinement_factor;
  o.checks.push_back(at_most("negative_power_refinement[beta=" + fmt(cfg.beta) + ",theta=" + fmt(theta) + "]",
                             nb.refinement_factor, 2.0));

  if (cfg.dichotomy && alpha + 0.6 < 1.0) {
    const auto below = stein_l2_membership(alpha, alpha + 0.4);
    const auto above = stein_l2_membership(alpha, alpha + 0.6);
    o.results["l2_below_ratio"] = below.decade_ratio;
    o.results["l2_above_ratio"] = above.decade_ratio;
    o.checks.push_back(at_most("l2_cauchy_below_threshold[alpha=" + fmt(alpha) + "]", below.decade_ratio, 1.0));
    o.checks.push_back(at_least("l2_divergent_above_threshold[alpha=" + fmt(alpha) + "]", above.decade_ratio, 1.0));
  }
  return o;
}

// grid Stein derivative against the multiplier, at n and 2n
void stein_grid_study(const ScenarioConfig& cfg, EntryOutput& o) {
  auto ratio_at = [&](std::size_t n) {
    const auto grid = make_grid(n, cfg.L);
    const Field f = sample(grid, [](double x) { return std::exp(-x * x); });
    const double num = l2_norm(stein_derivative(f, cfg.b));
    const double den = l2_norm(apply_multiplier(f, frac_deriv(grid, cfg.b)));
    return num / den;
  };
  const double r1 = ratio_at(cfg.n), r2 = ratio_at(2 * cfg.n);
  o.results["grid_stein_ratio"] = r1;
  o.results["grid_stein_ratio_2n"] = r2;
  o.results["stein_constant"] = stein_constant(cfg.b);
  o.checks.push_back(within("grid_stein_ratio_refinement[b=" + fmt(cfg.b) + "]", r2 / r1, 0.5, 2.0));
}

// ----------------------------------------------------------- commutators

std::vector<LemmaCase> lemma_cases(const ScenarioConfig& cfg) {
  std::vector<LemmaCase> cases;
  for (double a : cfg.alpha) cases.push_back({Lemma::CommutatorA, a, 0.0, 0, 0});
  cases.push_back({Lemma::Calderon, 0.0, 0.0, 0, 1});
  cases.push_back({Lemma::Calderon, 0.0, 0.0, 1, 1});
  cases.push_back({Lemma::DAlphaCommutator, 0.25, 0.5, 0, 0});
  cases.push_back({Lemma::DAlphaCommutator, 0.0, 0.5, 0, 0});
  return cases;
}

EntryOutput run_commutator_case(const ScenarioConfig& cfg, const TestCorpus& corpus, const LemmaCase& lc,
                                std::size_t i) {
  EntryOutput o;
  const auto rep = ratio_study(lc, corpus, cfg.n);
  const std::string s = "[" + lc.label() + "]";
  o.results["lemma"] = lc.label();
  o.results["seed"] = corpus.seed;
  o.results["corpus_size"] = corpus.size();
  o.results["n"] = cfg.n;
  o.results["corpus_max"] = rep.corpus_max;
  o.results["corpus_max_2n"] = rep.corpus_max_2n;
  o.results["refinement_factor"] = rep.refinement_factor;
  o.results["half_corpus_max"] = rep.half_corpus_max;
  o.results["size_factor"] = rep.size_factor;
  o.checks.push_back(within("refinement_factor" + s, rep.refinement_factor, 0.5, 2.0));
  o.checks.push_back(within("corpus_size_factor" + s, rep.size_factor, 0.5, 2.0));
  // constant symbol
  const auto grid = make_grid(cfg.n, corpus.L);
  const Field g = sample(grid, [](double) { return 3.7; });
  const double zero = evaluate_case(lc, g, corpus.fs.front().sample(grid));
  o.results["constant_symbol_ratio"] = zero;
  o.checks.push_back(at_most("constant_symbol_ratio" + s, zero, 1e-11));
  Table t{"ratios_" + tag(i), {"instance [1]", "ratio_n [1]", "ratio_2n [1]", "g_prime_inf [1/length]"}, {}};
  for (std::size_t j = 0; j < rep.ratios.size(); ++j)
    t.rows.push_back({static_cast<double>(j), rep.ratios[j], rep.ratios_2n[j], corpus.g_prime_inf[j]});
  o.tables.push_back(std::move(t));
  return o;
}

// ------------------------------------------------------- weighted-growth

EntryOutput run_growth(const ScenarioConfig& cfg, std::size_t i) {
  EntryOutput o;
  const double alpha = pick(cfg.alpha, i), r = pick(cfg.r, i);
  const std::string s = "[alpha=" + fmt(alpha) + ",r=" + fmt(r) + "]";
  o.results["alpha"] = alpha;
  o.results["r"] = r;
  json info;
  const Field phi = initial_field(cfg, alpha, cfg.c.empty() ? 2.0 : pick(cfg.c, i), info);
  const auto rep = group_weighted_growth(phi, alpha, r, cfg.times);
  o.results["slope"] = rep.slope;
  o.results["r_squared"] = rep.r_squared;
  o.results["bound"] = rep.bound;
  o.results["initial_weighted_norm"] = rep.initial_norm;
  o.results["max_tail_fraction"] = rep.max_tail_fraction;
  o.checks.push_back(at_most("growth_slope" + s, rep.slope, rep.bound));
  Table t{"growth_" + tag(i), {"t [time]", "weighted_norm [amplitude*length^(r+0.5)]"}, {}};
  Curve cv{"growth_" + tag(i), "log t", "log weighted norm", {}, {}};
  for (std::size_t j = 0; j < rep.times.size(); ++j) {
    t.rows.push_back({rep.times[j], rep.norms[j]});
    cv.x.push_back(std::log(rep.times[j]));
    cv.y.push_back(std::log(rep.norms[j]));
  }
  o.tables.push_back(std::move(t));
  o.curves.push_back(std::move(cv));
  return o;
}

// ------------------------------------------------------------------- ucp

Trajectory every_other_record(const Trajectory& tr) {
  Trajectory out;
  out.diagnostics.options = tr.diagnostics.options;
  const auto& r = tr.diagnostics.records;
  for (std::size_t j = 0; j < r.size(); j += 2) out.diagnostics.records.push_back(r[j]);
  if ((r.size() - 1) % 2 != 0) out.diagnostics.records.push_back(r.back());
  return out;
}

EntryOutput run_ucp(const ScenarioConfig& cfg, std::size_t i) {
  EntryOutput o;
  const double alpha = pick(cfg.alpha, i);
  const std::string s = "[alpha=" + fmt(alpha) + ",k=" + std::to_string(cfg.k) + "]";
  o.results["alpha"] = alpha;
  o.results["k"] = cfg.k;
  const Field phi = initial_field(cfg, alpha, cfg.c.empty() ? 0.0 : pick(cfg.c, i), o.results);
  auto ec = evolve_config(cfg, alpha, phi);
  ec.T = cfg.t2;
  const auto tr = run(ec, phi);
  if (tr.blowup_suspected) throw BlowUpError(tr.note, tr.times.back());
  const double R = ucp_residual(tr, cfg.t1, cfg.t2, cfg.k);
  const double Rc = ucp_residual(every_other_record(tr), cfg.t1, cfg.t2, cfg.k);
  double m1 = tr.diagnostics.records.front().mass;
  for (const auto& r : tr.diagnostics.records)
    if (r.t <= cfg.t1 + 1e-12) m1 = r.mass;
  const auto d = drifts(tr);
  o.results["residual"] = R;
  o.results["residual_coarse"] = Rc;
  o.results["mass_t1"] = m1;
  o.results["mass_drift"] = d.mass;
  const double qerr = std::abs(R - Rc) / std::max(std::abs(R), 1e-300);
  o.results["quadrature_relative_change"] = qerr;
  o.checks.push_back(at_most("mass_drift" + s, d.mass, 1e-8));
  if (cfg.initial == "zero") {
    o.checks.push_back(at_most("zero_solution_residual" + s, std::abs(R), 0.0));
  } else {
    o.checks.push_back(at_most("quadrature_halving" + s, qerr, 1e-6));
    if (cfg.k % 2 == 0 && m1 >= 0.0) {
      o.checks.push_back(at_least("residual_at_least_mass" + s, R, m1));
    } else if (cfg.k % 2 == 1) {
      o.results["note"] = "odd k: sign of R not asserted";
    }
  }
  Table t{"ucp_" + tag(i), {"t [time]", "mass [amplitude*length]", "power_integral [amplitude^k*length]"}, {}};
  for (const auto& r : tr.diagnostics.records) t.rows.push_back({r.t, r.mass, r.power_integral});
  o.tables.push_back(std::move(t));
  return o;
}

void interpolation_study(const ScenarioConfig& cfg, EntryOutput& o) {
  const std::vector<double> sigmas = {0.5, 1.0, 2.0, 4.0};
  auto ratios_at = [&](std::size_t n) {
    const auto grid = make_grid(n, cfg.L);
    std::vector<double> out;
    for (double sg : sigmas)
      out.push_back(interpolation_ratio(sample(grid, [&](double x) { return std::exp(-(x / sg) * (x / sg)); }),
                                        1.0, 1.0, 0.5));
    return out;
  };
  const auto a = ratios_at(cfg.n), b = ratios_at(2 * cfg.n);
  const double amax = *std::max_element(a.begin(), a.end()), amin = *std::min_element(a.begin(), a.end());
  const double bmax = *std::max_element(b.begin(), b.end());
  o.results["interpolation_ratios"] = a;
  o.results["interpolation_ratios_2n"] = b;
  o.checks.push_back(at_most("interpolation_spread_across_dilations", amax / amin, 2.0));
  o.checks.push_back(within("interpolation_refinement", bmax / amax, 0.5, 2.0));
}

// ------------------------------------------------------------- plumbing

std::string utc_now() {
  const std::time_t t = std::time(nullptr);
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

json check_json(const CheckResult& c) {
  json j = {{"name", c.name}, {"value", c.value}, {"passed", c.passed}};
  j["lower"] = c.lower ? json(*c.lower) : json(nullptr);
  j["upper"] = c.upper ? json(*c.upper) : json(nullptr);
  return j;
}

class Writer {
 public:
  Writer(std::filesystem::path dir, const RunManifest& m) : dir_(std::move(dir)), m_(m) {
    std::filesystem::create_directories(dir_);
  }

  void table(const Table& t) {
    std::string text = header();
    for (std::size_t i = 0; i < t.columns.size(); ++i) text += (i ? "," : "") + t.columns[i];
    text += "\n";
    char buf[40];
    for (const auto& row : t.rows) {
      for (std::size_t i = 0; i < row.size(); ++i) {
        std::snprintf(buf, sizeof buf, "%.17g", row[i]);
        text += (i ? "," : "") + std::string(buf);
      }
      text += "\n";
    }
    put(t.name + ".csv", text);
  }

  void curve(const Curve& c) {
    std::string text = header() + "# " + c.xlabel + " | " + c.ylabel + "\n";
    char buf[80];
    for (std::size_t i = 0; i < c.x.size(); ++i) {
      std::snprintf(buf, sizeof buf, "%.17g %.17g\n", c.x[i], c.y[i]);
      text += buf;
    }
    put(c.name + ".dat", text);
  }

  void json_file(const std::string& name, const json& j, bool atomic) {
    const auto path = dir_ / name;
    if (atomic) {
      const auto tmp = dir_ / (name + ".tmp");
      write_raw(tmp, j.dump(2) + "\n");
      std::filesystem::rename(tmp, path);
    } else {
      write_raw(path, j.dump(2) + "\n");
    }
    files_.push_back(name);
  }

  const std::vector<std::string>& files() const { return files_; }

 private:
  std::string header() const {
    return "# fbbm " + m_.tool_version + "\n# scenario: " + m_.scenario + "\n# config_hash: " +
           m_.config_hash + "\n";
  }
  void put(const std::string& name, const std::string& text) {
    write_raw(dir_ / name, text);
    files_.push_back(name);
  }
  static void write_raw(const std::filesystem::path& p, const std::string& text) {
    std::ofstream out(p, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("cannot write " + p.string());
    out << text;
    if (!out) throw Error("write failed for " + p.string());
  }

  std::filesystem::path dir_;
  const RunManifest& m_;
  std::vector<std::string> files_;
};

}  // namespace

const char* tool_version() { return "0.3.0"; }

const char* summary_schema() { return kSummarySchema; }

bool RunManifest::passed() const {
  if (!errors.empty()) return false;
  return std::all_of(checks.begin(), checks.end(), [](const CheckResult& c) { return c.passed; });
}

json summary_json(const RunManifest& m) {
  json j;
  j["tool"] = "fbbm";
  j["version"] = m.tool_version;
  j["scenario"] = m.scenario;
  j["config_hash"] = m.config_hash;
  j["config"] = m.config;
  j["grid"] = m.grid;
  j["checks"] = json::array();
  for (const auto& c : m.checks) j["checks"].push_back(check_json(c));
  j["results"] = m.results;
  j["errors"] = m.errors;
  j["status"] = m.passed() ? "pass" : (m.errors.empty() ? "fail" : "error");
  return j;
}

json manifest_json(const RunManifest& m) {
  json j = summary_json(m);
  j["files"] = m.files;
  j["wall_clock_seconds"] = m.wall_clock_seconds;
  j["started_utc"] = m.started_utc;
  return j;
}

std::filesystem::path default_run_dir(const ScenarioConfig& cfg) {
  const char* env = std::getenv("FBBM_OUTPUT_ROOT");
  const std::filesystem::path root = (env && *env) ? env : "fbbm-runs";
  return root / (to_string(cfg.scenario) + "-" + hex64(config_hash(cfg)).substr(0, 12));
}

RunManifest run_scenario(const ScenarioConfig& cfg, const RunOptions& opts) {
  const auto t0 = std::chrono::steady_clock::now();
  RunManifest m;
  m.tool_version = tool_version();
  m.scenario = to_string(cfg.scenario);
  m.config_hash = hex64(config_hash(cfg));
  m.config = cfg.echo;
  m.started_utc = utc_now();
  m.grid = {{"n", cfg.n}, {"L", cfg.L}, {"dx", 2.0 * cfg.L / static_cast<double>(cfg.n)}};

  std::vector<EntryOutput> entries;
  std::vector<std::function<EntryOutput()>> jobs;
  std::optional<TestCorpus> corpus;
  switch (cfg.scenario) {
    case Scenario::Evolve:
      for (std::size_t i = 0; i < cfg.sweep_size(); ++i) jobs.push_back([&cfg, i] { return run_evolve(cfg, i); });
      break;
    case Scenario::GroundState:
      for (std::size_t i = 0; i < cfg.sweep_size(); ++i)
        jobs.push_back([&cfg, i] { return run_groundstate(cfg, i); });
      break;
    case Scenario::Stein:
      for (std::size_t i = 0; i < cfg.sweep_size(); ++i) jobs.push_back([&cfg, i] { return run_stein(cfg, i); });
      jobs.push_back([&cfg] {
        EntryOutput o;
        stein_grid_study(cfg, o);
        return o;
      });
      break;
    case Scenario::Commutators: {
      corpus = TestCorpus::generate(cfg.seed, cfg.corpus_size);
      const auto cases = lemma_cases(cfg);
      for (std::size_t i = 0; i < cases.size(); ++i)
        jobs.push_back([&cfg, &corpus, c = cases[i], i] { return run_commutator_case(cfg, *corpus, c, i); });
      break;
    }
    case Scenario::WeightedGrowth:
      for (std::size_t i = 0; i < cfg.sweep_size(); ++i) jobs.push_back([&cfg, i] { return run_growth(cfg, i); });
      break;
    case Scenario::Ucp:
      for (std::size_t i = 0; i < cfg.sweep_size(); ++i) jobs.push_back([&cfg, i] { return run_ucp(cfg, i); });
      jobs.push_back([&cfg] {
        EntryOutput o;
        interpolation_study(cfg, o);
        return o;
      });
      break;
  }

  entries.resize(jobs.size());
  const long long nj = static_cast<long long>(jobs.size());
#pragma omp parallel for schedule(dynamic, 1)
  for (long long i = 0; i < nj; ++i) {
    try {
      entries[i] = jobs[i]();
    } catch (const std::exception& e) {
      entries[i].error = e.what();
    }
  }

  for (std::size_t i = 0; i < entries.size(); ++i) {
    auto& e = entries[i];
    if (!e.error.empty()) {
      m.errors.push_back("entry " + std::to_string(i) + ": " + e.error);
      e.results["error"] = e.error;
    }
    m.results.push_back(e.results);
    m.checks.insert(m.checks.end(), e.checks.begin(), e.checks.end());
  }

  if (!opts.out_dir.empty()) {
    Writer w(opts.out_dir, m);
    for (const auto& e : entries) {
      if (cfg.emit_csv)
        for (const auto& t : e.tables) w.table(t);
      if (cfg.emit_plotdata)
        for (const auto& c : e.curves) w.curve(c);
    }
    if (cfg.emit_json) w.json_file("summary.json", summary_json(m), false);
    m.files = w.files();
    m.files.push_back("manifest.json");
    m.wall_clock_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    w.json_file("manifest.json", manifest_json(m), true);
  } else {
    m.wall_clock_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  }
  return m;
}

}  // namespace fbbm
