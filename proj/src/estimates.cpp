#include "fbbm/estimates.hpp"

#include <algorithm>
#include <cstdio>
#include <cmath>
#include <numbers>
#include <random>

#include "fbbm/diagnostics.hpp"
#include "fbbm/error.hpp"
#include "fbbm/fit.hpp"
#include "fbbm/multiplier.hpp"
#include "fbbm/weights.hpp"

namespace fbbm {

namespace {

// Portable draws: the standard distributions are not specified bit-for-bit.
struct Draw {
  std::mt19937_64 eng;
  explicit Draw(std::uint64_t s) : eng(s) {}
  double uniform() { return static_cast<double>(eng() >> 11) * 0x1.0p-53; }
  double normal() {
    const double u1 = 1.0 - uniform();
    const double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
  }
};

std::uint64_t mix(std::uint64_t seed, std::uint64_t i) {
  std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (i + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

TrigSeries random_series(Draw& d, double L, int modes, double decay, double offset) {
  TrigSeries s;
  s.L = L;
  s.offset = offset;
  for (int k = 1; k <= modes; ++k) {
    s.modes.push_back(k);
    s.amplitudes.push_back(d.normal() / (1.0 + k / decay));
    s.phases.push_back(2.0 * std::numbers::pi * d.uniform());
  }
  return s;
}

Field spectral_derivative(const Field& u, int m) {
  if (m == 0) return u;
  return apply_multiplier(u, derivative(u.grid, m));
}

// Numerator over denominator, with the constant-symbol case pinned to 0.
double guarded_ratio(double num, double dnorm, const Field& g, const Field& f, const char* what) {
  const double fnorm = l2_norm(f);
  if (fnorm == 0.0) throw DomainError(std::string(what) + ": f must be nonzero");
  const double scale = std::max(1.0, linf_norm(g)) * fnorm;
  if (dnorm <= 1e-13 * std::max(1.0, linf_norm(g))) {
    if (num <= 1e-11 * scale) return 0.0;
    throw Error(std::string(what) + ": derivative of the symbol vanishes but the commutator does not ("
                + std::to_string(num / scale) + "), quadrature inconsistency");
  }
  return num / (dnorm * fnorm);
}

}  // namespace

double TrigSeries::operator()(double x) const {
  double acc = offset;
  for (std::size_t i = 0; i < modes.size(); ++i)
    acc += amplitudes[i] * std::cos(std::numbers::pi * modes[i] * x / L + phases[i]);
  return acc;
}

double TrigSeries::derivative(double x) const {
  double acc = 0.0;
  for (std::size_t i = 0; i < modes.size(); ++i) {
    const double w = std::numbers::pi * modes[i] / L;
    acc -= amplitudes[i] * w * std::sin(w * x + phases[i]);
  }
  return acc;
}

Field TrigSeries::sample(GridPtr grid) const {
  if (std::abs(grid->half_length() - L) > 1e-12 * L)
    throw GridError("TrigSeries: grid half-length differs from the series period");
  return fbbm::sample(grid, *this);
}

TestCorpus TestCorpus::generate(std::uint64_t seed, std::size_t size, double L, int field_modes,
                                int symbol_modes) {
  if (size == 0) throw DomainError("TestCorpus: size must be positive");
  if (field_modes < 1 || symbol_modes < 1) throw DomainError("TestCorpus: mode counts must be positive");
  TestCorpus c;
  c.seed = seed;
  c.L = L;
  c.field_modes = field_modes;
  c.symbol_modes = symbol_modes;
  for (std::size_t i = 0; i < size; ++i) {
    Draw d(mix(seed, i));
    c.fs.push_back(random_series(d, L, field_modes, 8.0, 0.0));
    auto g = random_series(d, L, symbol_modes, 2.0, d.normal());
    double sup = 0.0;
    const int samples = 256 * symbol_modes;
    for (int j = 0; j < samples; ++j) sup = std::max(sup, std::abs(g.derivative(-L + 2.0 * L * j / samples)));
    c.g_prime_inf.push_back(sup);
    c.gs.push_back(std::move(g));
  }
  return c;
}

double commutator_A_ratio(const Field& g, const Field& f, double alpha) {
  require_same_grid(g.grid, f.grid, "commutator_A_ratio");
  const auto A = op_a(f.grid, alpha);
  const Field lhs = apply_multiplier(g * f, A) - g * apply_multiplier(f, A);
  return guarded_ratio(l2_norm(lhs), linf_norm(spectral_derivative(g, 1)), g, f, "commutator_A_ratio");
}

double calderon_ratio(const Field& psi, const Field& f, int l, int m) {
  require_same_grid(psi.grid, f.grid, "calderon_ratio");
  if (l < 0 || m < 0 || l + m > 2) throw DomainError("calderon_ratio: need l, m >= 0 and l + m <= 2");
  const auto H = hilbert(f.grid);
  const Field h = spectral_derivative(f, m);
  const Field comm = apply_multiplier(psi * h, H) - psi * apply_multiplier(h, H);
  const Field lhs = spectral_derivative(comm, l);
  return guarded_ratio(l2_norm(lhs), linf_norm(spectral_derivative(psi, l + m)), psi, f,
                       "calderon_ratio");
}

double dalpha_commutator_ratio(const Field& psi, const Field& f, double a, double b) {
  require_same_grid(psi.grid, f.grid, "dalpha_commutator_ratio");
  if (!(a >= 0.0 && a < 1.0)) throw DomainError("dalpha_commutator_ratio: a must lie in [0, 1)");
  if (!(b > 0.0 && b < 1.0)) throw DomainError("dalpha_commutator_ratio: b must lie in (0, 1)");
  if (a + b > 1.0) throw DomainError("dalpha_commutator_ratio: a + b must not exceed 1");
  const Field h = apply_multiplier(f, frac_deriv(f.grid, 1.0 - a - b));
  const auto Db = frac_deriv(f.grid, b);
  const Field comm = apply_multiplier(psi * h, Db) - psi * apply_multiplier(h, Db);
  const Field lhs = a > 0.0 ? apply_multiplier(comm, frac_deriv(f.grid, a)) : comm;
  return guarded_ratio(l2_norm(lhs), linf_norm(spectral_derivative(psi, 1)), psi, f,
                       "dalpha_commutator_ratio");
}

std::string to_string(Lemma lemma) {
  switch (lemma) {
    case Lemma::CommutatorA: return "commutator_A";
    case Lemma::Calderon: return "calderon";
    case Lemma::DAlphaCommutator: return "dalpha_commutator";
  }
  return "unknown";
}

std::string LemmaCase::label() const {
  char buf[96];
  switch (lemma) {
    case Lemma::CommutatorA: std::snprintf(buf, sizeof buf, "commutator_A(alpha=%g)", alpha); break;
    case Lemma::Calderon: std::snprintf(buf, sizeof buf, "calderon(l=%d,m=%d)", l, m); break;
    case Lemma::DAlphaCommutator:
      std::snprintf(buf, sizeof buf, "dalpha_commutator(a=%g,b=%g)", alpha, beta);
      break;
  }
  return buf;
}

double evaluate_case(const LemmaCase& c, const Field& g, const Field& f) {
  switch (c.lemma) {
    case Lemma::CommutatorA: return commutator_A_ratio(g, f, c.alpha);
    case Lemma::Calderon: return calderon_ratio(g, f, c.l, c.m);
    case Lemma::DAlphaCommutator: return dalpha_commutator_ratio(g, f, c.alpha, c.beta);
  }
  throw DomainError("evaluate_case: unknown lemma");
}

bool RatioReport::stable() const {
  auto within = [](double q) { return std::isfinite(q) && q >= 0.5 && q <= 2.0; };
  return std::isfinite(corpus_max) && within(refinement_factor) && within(size_factor);
}

RatioReport ratio_study(const LemmaCase& c, const TestCorpus& corpus, std::size_t n) {
  RatioReport r;
  r.lemma_case = c;
  r.seed = corpus.seed;
  r.corpus_size = corpus.size();
  r.n = n;
  const auto g1 = make_grid(n, corpus.L);
  const auto g2 = make_grid(2 * n, corpus.L);
  const long long m = static_cast<long long>(corpus.size());
  r.ratios.assign(m, 0.0);
  r.ratios_2n.assign(m, 0.0);
  std::vector<std::string> failures(m);
#pragma omp parallel for schedule(dynamic, 1)
  for (long long i = 0; i < m; ++i) {
    try {
      r.ratios[i] = evaluate_case(c, corpus.gs[i].sample(g1), corpus.fs[i].sample(g1));
      r.ratios_2n[i] = evaluate_case(c, corpus.gs[i].sample(g2), corpus.fs[i].sample(g2));
    } catch (const std::exception& e) {
      failures[i] = e.what();
    }
  }
  for (const auto& msg : failures)
    if (!msg.empty()) throw Error("ratio_study " + c.label() + ": " + msg);
  r.corpus_max = *std::max_element(r.ratios.begin(), r.ratios.end());
  r.corpus_max_2n = *std::max_element(r.ratios_2n.begin(), r.ratios_2n.end());
  r.refinement_factor = r.corpus_max_2n / r.corpus_max;
  const std::size_t half = std::max<std::size_t>(1, r.ratios.size() / 2);
  r.half_corpus_max = *std::max_element(r.ratios.begin(), r.ratios.begin() + half);
  r.size_factor = r.corpus_max / r.half_corpus_max;
  return r;
}

double tail_fraction(const Field& u, double frac) {
  const double cut = frac * u.grid->half_length();
  double tail = 0.0, all = 0.0;
  const auto xs = u.grid->xs();
  for (std::size_t j = 0; j < u.size(); ++j) {
    const double v = u.values[j] * u.values[j];
    all += v;
    if (std::abs(xs[j]) > cut) tail += v;
  }
  return all > 0.0 ? std::sqrt(tail / all) : 0.0;
}

GrowthReport group_weighted_growth(const Field& phi, double alpha, double r,
                                   const std::vector<double>& times) {
  if (!(alpha > 0.0 && alpha <= 2.0)) throw DomainError("group_weighted_growth: alpha must lie in (0, 2]");
  if (!(r >= 0.0 && r < 1.5 + alpha))
    throw DomainError("group_weighted_growth: r must lie in [0, 3/2 + alpha)");
  if (times.size() < 2) throw DomainError("group_weighted_growth: need at least two times");
  for (double t : times)
    if (!(t > 0.0)) throw DomainError("group_weighted_growth: times must be positive");
  GrowthReport rep;
  rep.alpha = alpha;
  rep.r = r;
  rep.times = times;
  rep.bound = std::ceil(r) + 0.2;
  rep.initial_norm = weighted_norm(phi, r);
  const Spectrum s0 = forward(phi);
  const long long m = static_cast<long long>(times.size());
  rep.norms.assign(m, 0.0);
  std::vector<double> tails(m, 0.0);
#pragma omp parallel for schedule(dynamic, 1)
  for (long long i = 0; i < m; ++i) {
    const Field u = inverse(group_propagate(s0, times[i], alpha));
    tails[i] = tail_fraction(u);
    rep.norms[i] = weighted_norm(u, r);
  }
  rep.max_tail_fraction = *std::max_element(tails.begin(), tails.end());
  if (rep.max_tail_fraction > 1e-8)
    throw Error("group_weighted_growth: boundary contamination, tail fraction " +
                std::to_string(rep.max_tail_fraction) + " beyond 0.8L exceeds 1e-8");
  std::vector<double> lx, ly;
  for (long long i = 0; i < m; ++i) {
    lx.push_back(std::log(times[i]));
    ly.push_back(std::log(rep.norms[i]));
  }
  const auto fit = fit_line(lx, ly);
  rep.slope = fit.slope;
  rep.r_squared = fit.r_squared;
  return rep;
}

double ucp_residual(const Trajectory& traj, double t1, double t2, int k) {
  if (!(t2 > t1)) throw DomainError("ucp_residual: t1 < t2 required");
  const auto& recs = traj.diagnostics.records;
  if (recs.size() < 2) throw DomainError("ucp_residual: trajectory has fewer than two records");
  const double tol = 1e-9 * std::max(1.0, std::abs(recs.back().t));
  if (t1 < recs.front().t - tol || t2 > recs.back().t + tol)
    throw DomainError("ucp_residual: [t1, t2] must lie inside the recorded time span");

  std::vector<double> ts, mass_v, pk;
  const bool same_k = traj.diagnostics.options.k == k;
  if (!same_k && traj.fields.size() != recs.size())
    throw DomainError("ucp_residual: power differs from the recorded one and no snapshots are kept");
  for (std::size_t i = 0; i < recs.size(); ++i) {
    ts.push_back(recs[i].t);
    mass_v.push_back(recs[i].mass);
    pk.push_back(same_k ? recs[i].power_integral : power_integral(traj.fields[i], k));
  }
  auto interp = [&](const std::vector<double>& v, double t) {
    if (t <= ts.front()) return v.front();
    if (t >= ts.back()) return v.back();
    const auto it = std::upper_bound(ts.begin(), ts.end(), t);
    const std::size_t j = static_cast<std::size_t>(it - ts.begin());
    const double w = (t - ts[j - 1]) / (ts[j] - ts[j - 1]);
    return (1.0 - w) * v[j - 1] + w * v[j];
  };
  // trapezoid over [t1, t2] with the interior records as nodes
  std::vector<double> nt = {t1}, nv = {interp(pk, t1)};
  for (std::size_t i = 0; i < ts.size(); ++i)
    if (ts[i] > t1 && ts[i] < t2) {
      nt.push_back(ts[i]);
      nv.push_back(pk[i]);
    }
  nt.push_back(t2);
  nv.push_back(interp(pk, t2));
  double acc = 0.0;
  for (std::size_t i = 0; i + 1 < nt.size(); ++i) acc += 0.5 * (nv[i] + nv[i + 1]) * (nt[i + 1] - nt[i]);
  return interp(mass_v, t1) + acc / (t2 - t1);
}

}  // namespace fbbm
