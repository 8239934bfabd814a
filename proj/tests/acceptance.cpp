// Acceptance checks, one line per criterion.
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <exception>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "fbbm/diagnostics.hpp"
#include "fbbm/estimates.hpp"
#include "fbbm/evolution.hpp"
#include "fbbm/ground_state.hpp"
#include "fbbm/multiplier.hpp"
#include "fbbm/stein.hpp"
#include "fbbm/weights.hpp"

using namespace fbbm;

namespace {

constexpr double pi = 3.141592653589793;

struct Outcome {
  bool passed = true;
  std::ostringstream detail;

  void require(bool ok, const std::string& what) {
    if (!ok) {
      passed = false;
      detail << " !" << what;
    }
  }
  template <class T>
  void note(const std::string& key, T v) {
    detail << " " << key << "=" << v;
  }
};

double sup_abs(const std::vector<cplx>& v) {
  double m = 0.0;
  for (auto z : v) m = std::max(m, std::abs(z));
  return m;
}

Field random_smooth(GridPtr g, std::uint64_t seed) {
  std::mt19937_64 eng(seed);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<double> a(8), w(8), ph(8);
  for (int i = 0; i < 8; ++i) {
    a[i] = 2 * u(eng) - 1;
    w[i] = 0.25 * g->xi_max() * u(eng);
    ph[i] = 2 * pi * u(eng);
  }
  const double env = 0.2 * g->half_length();
  return sample(g, [&](double x) {
    double s = 0.0;
    for (int i = 0; i < 8; ++i) s += a[i] * std::cos(w[i] * x + ph[i]);
    return s * std::exp(-(x / env) * (x / env));
  });
}

// ---------------------------------------------------------------- 1

void spectral_exactness(Outcome& o) {
  auto g = make_grid(4096, pi);
  const std::size_t n = g->n();
  double worst = 0.0;
  auto eig = [&](const Spectrum& in, const MultiplierSpec& m, std::size_t k, cplx lam) {
    const auto out = apply_multiplier(in, m);
    const double e1 = std::abs(out.coeffs[k] - lam * in.coeffs[k]);
    const double e2 = std::abs(out.coeffs[n - k] - std::conj(lam) * in.coeffs[n - k]);
    worst = std::max(worst, std::max(e1, e2) / (std::abs(lam) * std::abs(in.coeffs[k])));
  };
  for (int k : {1, 2, 5, 17, 100, 1000, 2047}) {
    const auto kk = static_cast<std::size_t>(k);
    const auto in = forward(sample(g, [&](double x) { return std::cos(k * x); }));
    for (double a : {0.25, 0.5, 1.0, 1.5, 2.0}) {
      eig(in, frac_deriv(g, a), kk, std::pow(k, a));
      eig(in, op_a(g, a), kk, cplx(0.0, -k / (1.0 + std::pow(k, a))));
    }
    for (double s : {-2.0, -0.5, 1.0, 3.0}) eig(in, bessel(g, s), kk, std::pow(1.0 + double(k) * k, s / 2));
    eig(in, hilbert(g), kk, cplx(0.0, -1.0));
  }
  o.note("eig_rel", worst);
  o.require(worst <= 1e-12, "eigenvalues");

  double rt = 0.0, pars = 0.0;
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    const auto u = random_smooth(g, seed);
    const auto back = inverse(forward(u));
    for (std::size_t j = 0; j < n; ++j) rt = std::max(rt, std::abs(back[j] - u[j]) / linf_norm(u));
    const double l2 = l2_norm(u);
    pars = std::max(pars, std::abs(spectral_l2_squared(forward(u)) - l2 * l2) / (l2 * l2));
  }
  o.note("roundtrip", rt);
  o.note("parseval", pars);
  o.require(rt <= 1e-12, "roundtrip");
  o.require(pars <= 1e-12, "parseval");
}

// ---------------------------------------------------------------- 2

void group_unitarity(Outcome& o) {
  auto g = make_grid(4096, 100.0);
  const auto u = random_smooth(g, 11);
  const auto s = forward(u);
  const double l2 = l2_norm(u);
  double drift = 0.0;
  for (double t : {1.0, 10.0, 100.0})
    drift = std::max(drift, std::abs(l2_norm(inverse(group_propagate(s, t, 0.5))) - l2) / l2);
  double comp = 0.0;
  for (double a : {0.25, 0.5, 1.5}) {
    const auto ab = group_propagate(group_propagate(s, 3.0, a), 7.0, a);
    const auto c = group_propagate(s, 10.0, a);
    std::vector<cplx> d(s.size());
    for (std::size_t k = 0; k < s.size(); ++k) d[k] = ab.coeffs[k] - c.coeffs[k];
    comp = std::max(comp, sup_abs(d) / sup_abs(s.coeffs));
  }
  o.note("l2_drift", drift);
  o.note("composition", comp);
  o.require(drift <= 1e-12, "unitarity");
  o.require(comp <= 1e-12, "group law");
}

// ---------------------------------------------------------------- 3

void symbol_derivatives(Outcome& o) {
  auto g = make_grid(64, 4.0);
  const double t = 2.0;
  double rmin = 1e9, rmax = 0.0;
  for (double a : {0.3, 0.5, 0.9, 1.5}) {
    for (std::size_t k : {1u, 2u, 3u, 5u, 9u, 63u, 62u, 60u, 55u, 40u}) {
      const double xi = g->xis()[k];
      auto fd1 = [&](double h) { return (symbol_group(xi + h, t, a) - symbol_group(xi - h, t, a)) / (2 * h); };
      auto fd2 = [&](double h) {
        return (symbol_group(xi + h, t, a) - 2.0 * symbol_group(xi, t, a) + symbol_group(xi - h, t, a)) / (h * h);
      };
      const double h1 = 2e-3 * std::max(1.0, std::abs(xi));
      const double r1 = std::abs(symbol_dF(xi, t, a) - fd1(h1)) / std::abs(symbol_dF(xi, t, a) - fd1(h1 / 2));
      const double r2 = std::abs(symbol_d2F(xi, t, a) - fd2(h1)) / std::abs(symbol_d2F(xi, t, a) - fd2(h1 / 2));
      rmin = std::min({rmin, r1, r2});
      rmax = std::max({rmax, r1, r2});
    }
  }
  o.note("ratio_min", rmin);
  o.note("ratio_max", rmax);
  o.require(rmin >= 3.5 && rmax <= 4.5, "second order");
}

// ---------------------------------------------------------------- 4

struct Drifts {
  double mass = 0.0, energy = 0.0, hamiltonian = 0.0;
};

Drifts drifts_of(const Trajectory& tr) {
  Drifts d;
  const auto& r0 = tr.diagnostics.records.front();
  for (const auto& r : tr.diagnostics.records) {
    d.mass = std::max(d.mass, std::abs(r.mass - r0.mass) / std::abs(r0.mass));
    d.energy = std::max(d.energy, std::abs(r.energy - r0.energy) / std::abs(r0.energy));
    d.hamiltonian = std::max(d.hamiltonian, std::abs(r.hamiltonian - r0.hamiltonian) / std::abs(r0.hamiltonian));
  }
  return d;
}

void conservation(Outcome& o) {
  EvolveConfig c;
  c.alpha = 0.5;
  c.n = 4096;
  c.L = 100.0;
  c.T = 10.0;
  c.dt = 5e-3;
  c.record_every = 20;
  c.keep_snapshots = false;
  auto g = make_grid(c.n, c.L);
  const auto phi = sample(g, [](double x) { return 2.0 * std::exp(-x * x); });
  const auto a = drifts_of(run(c, phi));
  c.dt /= 2;
  c.record_every *= 2;
  const auto b = drifts_of(run(c, phi));
  const double re = a.energy / b.energy, rh = a.hamiltonian / b.hamiltonian;
  o.note("mass_drift", std::max(a.mass, b.mass));
  o.note("energy_ratio", re);
  o.note("hamiltonian_ratio", rh);
  o.require(std::max(a.mass, b.mass) <= 1e-8, "mass");
  o.require(re >= 12.0 && re <= 20.0, "energy ratio in [12,20]");
  o.require(rh >= 12.0 && rh <= 20.0, "hamiltonian ratio in [12,20]");
}

// ---------------------------------------------------------------- 5

void solitary_oracle(Outcome& o) {
  auto g = make_grid(4096, 60.0);
  const auto gs = petviashvili_solve(2.0, g);
  double err = 0.0;
  for (std::size_t j = 0; j < g->n(); ++j) {
    const double s = 1.0 / std::cosh(0.5 * g->xs()[j]);
    err = std::max(err, std::abs(gs.profile[j] - 3.0 * s * s));
  }
  const double alpha = 0.75, c = 2.0;
  const auto gq = petviashvili_solve(alpha, make_grid(4096, 100.0 * qc_dilation(alpha, c)));
  const double res = qc_residual(scale_to_qc(gq, c), alpha, c);
  o.note("sech2_err", err);
  o.note("qc_residual", res);
  o.require(err <= 1e-6, "sech2");
  o.require(res <= 1e-6, "qc residual");
}

// ---------------------------------------------------------------- 6

void decay_law(Outcome& o) {
  for (double alpha : {0.25, 0.5, 0.75}) {
    const auto a = petviashvili_solve(alpha, make_grid(8192, 200.0));
    const auto b = petviashvili_solve(alpha, make_grid(16384, 400.0));
    const auto fa = fit_tail_exponent(a.profile, 0.15 * 200.0, 0.6 * 200.0);
    const auto fb = fit_tail_exponent(b.profile, 0.15 * 400.0, 0.6 * 400.0);
    o.note("p(" + std::to_string(alpha).substr(0, 4) + ")", fa.exponent);
    o.note("R2", fa.r_squared);
    o.note("dL", std::abs(fb.exponent - fa.exponent));
    o.require(std::abs(fa.exponent - (1.0 + alpha)) <= 0.15, "exponent");
    o.require(fa.r_squared >= 0.995, "R2");
    o.require(std::abs(fb.exponent - fa.exponent) <= 0.05, "L doubling");
  }
}

// ---------------------------------------------------------------- 7

void travelling_wave(Outcome& o) {
  const double alpha = 0.75, c = 2.0;
  const auto gs = petviashvili_solve(alpha, make_grid(2048, 100.0 * qc_dilation(alpha, c)));
  const auto q = scale_to_qc(gs, c);
  EvolveConfig ec;
  ec.alpha = alpha;
  ec.n = 2048;
  ec.L = 100.0;
  ec.dt = 5e-3;
  ec.T = 5.0;
  ec.record_every = 1000;
  const auto tr = run(ec, q);
  double shift = 0.0;
  const double err = translated_shape_error(tr.fields.back(), q, &shift);
  o.note("shape_error", err);
  o.note("shift", shift);
  o.require(!tr.blowup_suspected, "blow-up");
  o.require(err <= 1e-3, "shape error");
}

// ---------------------------------------------------------------- 8

void stein_asymptotic_fits(Outcome& o) {
  struct Pair {
    double alpha, theta;
  };
  for (auto p : {Pair{0.5, 0.25}, Pair{0.75, 0.5}, Pair{0.25, 0.125}}) {
    const auto r = stein_asymptotics(p.alpha, p.theta);
    o.note("p_small", r.p_small);
    o.note("p_large", r.p_large);
    o.require(std::abs(r.p_small - (p.alpha - p.theta)) <= 0.1, "small-eta exponent");
    o.require(std::abs(r.p_large + 0.5 + p.theta) <= 0.1, "large-eta exponent");
  }
  const double alpha = 0.25;
  const auto below = stein_l2_membership(alpha, alpha + 0.4);
  const auto above = stein_l2_membership(alpha, alpha + 0.6);
  o.note("decade_ratio_below", below.decade_ratio);
  o.note("decade_ratio_above", above.decade_ratio);
  o.require(below.cauchy && !above.cauchy, "L2 dichotomy");
}

// ---------------------------------------------------------------- 9

void negative_power(Outcome& o) {
  const auto r = negative_power_bound(0.25, 0.25);
  o.note("sup", r.constant);
  o.note("refinement", r.refinement_factor);
  o.require(std::isfinite(r.constant) && r.constant > 0.0, "finite");
  o.require(r.refinement_factor <= 2.0, "refinement");
}

// ---------------------------------------------------------------- 10

void commutators(Outcome& o) {
  const auto corpus = TestCorpus::generate(20240607, 100);
  std::vector<LemmaCase> cases;
  for (double a : {0.25, 0.5, 0.75}) cases.push_back({Lemma::CommutatorA, a, 0.0, 0, 0});
  cases.push_back({Lemma::Calderon, 0.0, 0.0, 0, 1});
  cases.push_back({Lemma::Calderon, 0.0, 0.0, 1, 1});
  cases.push_back({Lemma::DAlphaCommutator, 0.25, 0.5, 0, 0});
  cases.push_back({Lemma::DAlphaCommutator, 0.0, 0.5, 0, 0});
  const auto grid = make_grid(2048, corpus.L);
  const auto one = sample(grid, [](double) { return 3.7; });
  double fmin = 1e9, fmax = 0.0, zero = 0.0;
  for (const auto& lc : cases) {
    const auto r = ratio_study(lc, corpus, 2048);
    o.require(std::isfinite(r.corpus_max), "finite " + lc.label());
    fmin = std::min(fmin, r.refinement_factor);
    fmax = std::max(fmax, r.refinement_factor);
    zero = std::max(zero, evaluate_case(lc, one, corpus.fs.front().sample(grid)));
  }
  o.note("refinement_min", fmin);
  o.note("refinement_max", fmax);
  o.note("constant_symbol", zero);
  o.require(fmin >= 0.5 && fmax <= 2.0, "n doubling");
  o.require(zero <= 1e-11, "constant symbol");
}

// ---------------------------------------------------------------- 11

void weighted_growth(Outcome& o) {
  auto g = make_grid(std::size_t{1} << 19, 32768.0);
  const auto phi = sample(g, [](double x) { return std::exp(-x * x); });
  const std::vector<double> times = {1, 2, 3, 4, 5, 6, 8, 10, 12, 15, 20, 25, 30, 35, 40};
  struct Pair {
    double alpha, r;
  };
  for (auto p : {Pair{0.5, 0.7}, Pair{0.5, 1.2}, Pair{0.75, 1.8}}) {
    const auto rep = group_weighted_growth(phi, p.alpha, p.r, times);
    o.note("slope", rep.slope);
    o.note("bound", rep.bound);
    o.require(rep.within_bound(), "slope bound");
  }
}

// ---------------------------------------------------------------- 12

void ucp(Outcome& o) {
  EvolveConfig c;
  c.alpha = 0.5;
  c.k = 2;
  c.n = 2048;
  c.L = 100.0;
  c.dt = 1e-2;
  c.T = 5.0;
  auto g = make_grid(c.n, c.L);
  const auto zero = run(c, Field(g));
  const double r0 = ucp_residual(zero, 0.0, 5.0, 2);
  const double amp = 0.5 / std::sqrt(pi);
  const auto pos = run(c, sample(g, [&](double x) { return amp * std::exp(-x * x); }));
  const double m0 = pos.diagnostics.records.front().mass;
  const double r = ucp_residual(pos, 0.0, 5.0, 2);
  o.note("R_zero", r0);
  o.note("R", r);
  o.note("uhat00", m0);
  o.require(r0 == 0.0, "zero solution");
  o.require(m0 > 0.0 && r >= m0, "R >= uhat(0,0)");

  std::vector<double> ratios;
  for (double sg : {0.5, 1.0, 2.0, 4.0})
    ratios.push_back(
        interpolation_ratio(sample(g, [&](double x) { return std::exp(-(x / sg) * (x / sg)); }), 1.0, 1.0, 0.5));
  const double spread = *std::max_element(ratios.begin(), ratios.end()) / *std::min_element(ratios.begin(), ratios.end());
  o.note("interp_spread", spread);
  o.require(spread <= 2.0, "interpolation spread");
}

}  // namespace

int main() {
  struct Criterion {
    int id;
    const char* name;
    std::function<void(Outcome&)> body;
  };
  const std::vector<Criterion> all = {
      {1, "spectral exactness", spectral_exactness},
      {2, "group unitarity and group law", group_unitarity},
      {3, "symbol derivative oracles", symbol_derivatives},
      {4, "conservation and drift convergence", conservation},
      {5, "solitary-wave oracle", solitary_oracle},
      {6, "decay-law exponent", decay_law},
      {7, "travelling-wave propagation", travelling_wave},
      {8, "Stein asymptotics", stein_asymptotic_fits},
      {9, "negative-power bound", negative_power},
      {10, "commutator ratio stability", commutators},
      {11, "group weighted growth", weighted_growth},
      {12, "UCP residual", ucp},
  };
  int failed = 0;
  for (const auto& c : all) {
    Outcome o;
    const auto t0 = std::chrono::steady_clock::now();
    try {
      c.body(o);
    } catch (const std::exception& e) {
      o.passed = false;
      o.detail << " error: " << e.what();
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    std::printf("%s  %2d  %-36s %7.2fs %s\n", o.passed ? "PASS" : "FAIL", c.id, c.name, secs,
                o.detail.str().c_str());
    std::fflush(stdout);
    if (!o.passed) ++failed;
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(all.size()) - failed, all.size());
  return failed == 0 ? 0 : 1;
}
