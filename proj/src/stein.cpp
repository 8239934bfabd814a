#include "fbbm/stein.hpp"

#include <algorithm>
#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>
#include <cmath>
#include <limits>
#include <numbers>

#include "fbbm/error.hpp"
#include "fbbm/fit.hpp"
#include "fbbm/multiplier.hpp"

namespace fbbm {

namespace {

void check_order(double b, const char* what) {
  if (!(b > 0.0 && b < 1.0))
    throw DomainError(std::string(what) + ": order must lie in (0, 1), got " + std::to_string(b));
}

double bump(double t) { return t > 0.0 ? std::exp(-1.0 / t) : 0.0; }
double bump_prime(double t) { return t > 0.0 ? std::exp(-1.0 / t) / (t * t) : 0.0; }

double sgn(double x) { return (x > 0.0) - (x < 0.0); }

ProbeFunction with_breaks(ProbeFunction g, const CutoffSpec& c, bool kink_at_zero) {
  g.support = c.outer;
  g.breaks = {-c.inner, c.inner};
  if (kink_at_zero) g.kinks = {0.0};
  return g;
}

std::vector<double> cut_points(const ProbeFunction& g, double eta, bool inside) {
  const double S = g.support;
  std::vector<double> cuts = {-S, S};
  cuts.insert(cuts.end(), g.kinks.begin(), g.kinks.end());
  cuts.insert(cuts.end(), g.breaks.begin(), g.breaks.end());
  if (inside) cuts.push_back(eta);
  std::vector<double> kept;
  for (double v : cuts)
    if (v >= -S && v <= S) kept.push_back(v);
  std::sort(kept.begin(), kept.end());
  kept.erase(std::unique(kept.begin(), kept.end()), kept.end());
  return kept;
}

}  // namespace

Field stein_derivative(const Field& f, double b, kernels::Exec exec) {
  check_order(b, "stein_derivative");
  const auto& g = *f.grid;
  const Field df = apply_multiplier(f, derivative(f.grid, 1));
  Field out(f.grid);
  if (exec == kernels::Exec::Parallel)
    kernels::stein_grid_omp(f.values, df.values, g.dx(), b, out.values);
  else
    kernels::stein_grid_serial(f.values, df.values, g.dx(), b, out.values);
  return out;
}

double stein_constant(double b) {
  check_order(b, "stein_constant");
  // 2 * integral_0^inf (2 - 2 cos h) h^(-1-2b) dh = 2 Gamma(1-2b) cos(pi b) / b
  if (std::abs(b - 0.5) < 1e-9) return std::sqrt(2.0 * std::numbers::pi);
  return std::sqrt(2.0 * std::tgamma(1.0 - 2.0 * b) * std::cos(std::numbers::pi * b) / b);
}

double CutoffSpec::value(double xi) const {
  const double a = std::abs(xi);
  if (a <= inner) return 1.0;
  if (a >= outer) return 0.0;
  const double s = (a - inner) / (outer - inner);
  const double u = bump(1.0 - s), v = bump(s);
  return u / (u + v);
}

double CutoffSpec::derivative(double xi) const {
  const double a = std::abs(xi);
  if (a <= inner || a >= outer) return 0.0;
  const double w = outer - inner;
  const double s = (a - inner) / w;
  const double u = bump(1.0 - s), v = bump(s);
  const double du = -bump_prime(1.0 - s), dv = bump_prime(s);
  const double dpsi = (du * v - u * dv) / ((u + v) * (u + v));
  return sgn(xi) * dpsi / w;
}

ProbeFunction cutoff_function(const CutoffSpec& c) {
  ProbeFunction g;
  g.name = "psi";
  g.value = [c](double x) { return c.value(x); };
  g.derivative = [c](double x) { return c.derivative(x); };
  return with_breaks(std::move(g), c, false);
}

ProbeFunction power_times_cutoff(double alpha, const CutoffSpec& c) {
  ProbeFunction g;
  g.name = "|xi|^alpha psi";
  g.value = [c, alpha](double x) { return std::pow(std::abs(x), alpha) * c.value(x); };
  g.derivative = [c, alpha](double x) {
    const double a = std::abs(x);
    return alpha * std::pow(a, alpha - 1.0) * sgn(x) * c.value(x) + std::pow(a, alpha) * c.derivative(x);
  };
  return with_breaks(std::move(g), c, true);
}

ProbeFunction bbm_symbol_times_cutoff(double alpha, const CutoffSpec& c) {
  ProbeFunction g;
  g.name = "psi/(1+|xi|^alpha)";
  g.value = [c, alpha](double x) { return c.value(x) / (1.0 + std::pow(std::abs(x), alpha)); };
  g.derivative = [c, alpha](double x) {
    const double a = std::abs(x);
    const double q = 1.0 + std::pow(a, alpha);
    return c.derivative(x) / q - c.value(x) * alpha * std::pow(a, alpha - 1.0) * sgn(x) / (q * q);
  };
  return with_breaks(std::move(g), c, true);
}

ProbeFunction negative_power_times_cutoff(double beta, const CutoffSpec& c) {
  ProbeFunction g;
  g.name = "|xi|^-beta psi";
  g.value = [c, beta](double x) { return std::pow(std::abs(x), -beta) * c.value(x); };
  g.derivative = [c, beta](double x) {
    const double a = std::abs(x);
    return -beta * std::pow(a, -beta - 1.0) * sgn(x) * c.value(x) + std::pow(a, -beta) * c.derivative(x);
  };
  return with_breaks(std::move(g), c, true);
}

double stein_pointwise_sq(const ProbeFunction& g, double eta, double theta) {
  check_order(theta, "stein_pointwise");
  if (!std::isfinite(eta)) throw DomainError("stein_pointwise: probe point must be finite");
  const double S = g.support;
  const bool inside = std::abs(eta) < S;
  const double feta = inside ? g.value(eta) : 0.0;
  if (!std::isfinite(feta))
    throw DomainError("stein_pointwise: function is not finite at eta = " + std::to_string(eta));

  const auto cuts = cut_points(g, eta, inside);
  const bool at_kink = std::find(g.kinks.begin(), g.kinks.end(), eta) != g.kinks.end();
  double gap = std::numeric_limits<double>::infinity();
  for (double c : cuts)
    if (c != eta) gap = std::min(gap, std::abs(c - eta));
  // Inside this radius f(eta) - f(xi) is replaced by its linear part, which
  // avoids cancellation against the singular kernel.
  const double dlin = (inside && !at_kink) ? 1e-5 * gap : 0.0;
  const double slope = dlin > 0.0 ? g.derivative(eta) : 0.0;

  auto integrand = [&](double xi) {
    const double d = std::abs(xi - eta);
    if (d == 0.0) return 0.0;
    if (d < dlin) return slope * slope * std::pow(d, 1.0 - 2.0 * theta);
    const double den = std::pow(d, 0.5 + theta);
    if (den == 0.0) return 0.0;  // subnormal distance, no measure
    const double gx = g.value(xi);
    if (!std::isfinite(gx)) return 0.0;  // only at a singular kink
    const double q = (feta - gx) / den;
    return q * q;
  };

  thread_local boost::math::quadrature::tanh_sinh<double> integrator;
  double total = 0.0;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i)
    total += integrator.integrate(integrand, cuts[i], cuts[i + 1], 1e-11);
  if (inside && feta != 0.0)
    total += feta * feta * (std::pow(S - eta, -2.0 * theta) + std::pow(S + eta, -2.0 * theta)) /
             (2.0 * theta);
  return total;
}

double stein_pointwise(const ProbeFunction& g, double eta, double theta) {
  return std::sqrt(stein_pointwise_sq(g, eta, theta));
}

std::vector<double> stein_probe_sweep(const ProbeFunction& g, const std::vector<double>& etas,
                                      double theta, kernels::Exec exec) {
  check_order(theta, "stein_probe_sweep");
  std::vector<double> out(etas.size());
  kernels::map(exec, std::span<const double>(etas), std::span<double>(out),
               [&](double eta) { return stein_pointwise(g, eta, theta); });
  return out;
}

AsymptoticsReport stein_asymptotics(double alpha, double theta, const CutoffSpec& cutoff,
                                    int per_decade) {
  check_order(theta, "stein_asymptotics");
  if (!(alpha > 0.0 && alpha <= 2.0)) throw DomainError("stein_asymptotics: alpha must lie in (0, 2]");
  if (alpha == theta)
    throw DomainError("stein_asymptotics: alpha == theta is the logarithmic branch, no power law");
  AsymptoticsReport r;
  r.alpha = alpha;
  r.theta = theta;
  const auto g = power_times_cutoff(alpha, cutoff);

  r.small_eta = log_probes(1e-3, 1e-1, per_decade);
  r.large_eta = log_probes(10.0, 100.0, per_decade);
  r.small_values = stein_probe_sweep(g, r.small_eta, theta);
  r.large_values = stein_probe_sweep(g, r.large_eta, theta);

  std::vector<double> lx, ly;
  if (alpha > theta) {
    const double c0 = stein_pointwise_sq(g, 0.0, theta);
    r.plateau = std::sqrt(c0);
    r.log_corrected = std::abs(alpha - 2.0 * theta) < 1e-12;
    for (std::size_t i = 0; i < r.small_eta.size(); ++i) {
      const double eta = r.small_eta[i];
      const double diff = std::abs(r.small_values[i] * r.small_values[i] - c0);
      if (!(diff > 0.0)) continue;
      double y = 0.5 * std::log(diff);
      if (r.log_corrected) y -= 0.5 * std::log(std::abs(std::log(eta)));
      lx.push_back(std::log(eta));
      ly.push_back(y);
    }
  } else {
    for (std::size_t i = 0; i < r.small_eta.size(); ++i) {
      lx.push_back(std::log(r.small_eta[i]));
      ly.push_back(std::log(r.small_values[i]));
    }
  }
  if (lx.size() < 2) throw ConvergenceError("stein_asymptotics: small-eta branch is degenerate");
  const auto fs = fit_line(lx, ly);
  r.p_small = fs.slope;
  r.r2_small = fs.r_squared;

  lx.clear();
  ly.clear();
  for (std::size_t i = 0; i < r.large_eta.size(); ++i) {
    lx.push_back(std::log(r.large_eta[i]));
    ly.push_back(std::log(r.large_values[i]));
  }
  const auto fl = fit_line(lx, ly);
  r.p_large = fl.slope;
  r.r2_large = fl.r_squared;
  r.small_inconclusive = r.r2_small < 0.98;
  r.large_inconclusive = r.r2_large < 0.98;
  return r;
}

L2MembershipReport stein_l2_membership(double alpha, double theta, const CutoffSpec& cutoff,
                                       int decades) {
  check_order(theta, "stein_l2_membership");
  if (decades < 3) throw DomainError("stein_l2_membership: need at least 3 decades");
  L2MembershipReport r;
  r.alpha = alpha;
  r.theta = theta;
  const auto g = power_times_cutoff(alpha, cutoff);
  r.decade_lo.resize(decades);
  for (int k = 0; k < decades; ++k) r.decade_lo[k] = std::pow(10.0, -(k + 1));
  r.decade_integrals.resize(decades);
  kernels::map(kernels::Exec::Parallel, std::span<const double>(r.decade_lo),
               std::span<double>(r.decade_integrals), [&](double lo) {
                 // integral over [lo, 10 lo] in t = ln eta; the function is even in eta
                 auto h = [&](double t) {
                   const double eta = std::exp(t);
                   return stein_pointwise_sq(g, eta, theta) * eta;
                 };
                 const double a = std::log(lo), b = a + std::log(10.0);
                 return 2.0 * boost::math::quadrature::gauss<double, 20>::integrate(h, a, b);
               });
  // The last three decades carry the limiting behaviour.
  double log_ratio = 0.0;
  int count = 0;
  for (int k = decades - 3; k + 1 < decades; ++k) {
    log_ratio += std::log10(r.decade_integrals[k + 1] / r.decade_integrals[k]);
    ++count;
  }
  log_ratio /= count;
  r.decade_ratio = std::pow(10.0, log_ratio);
  r.fitted_exponent = -log_ratio;
  r.cauchy = r.decade_ratio < 1.0;
  return r;
}

namespace {

BoundReport sweep_bound(const std::string& name, const std::vector<double>& base,
                        const std::vector<double>& refined,
                        const std::function<double(double)>& ratio_at) {
  BoundReport r;
  r.name = name;
  r.eta = base;
  r.ratio.resize(base.size());
  kernels::map(kernels::Exec::Parallel, std::span<const double>(base), std::span<double>(r.ratio),
               ratio_at);
  std::vector<double> fine(refined.size());
  kernels::map(kernels::Exec::Parallel, std::span<const double>(refined), std::span<double>(fine),
               ratio_at);
  r.constant = *std::max_element(r.ratio.begin(), r.ratio.end());
  r.refined_constant = *std::max_element(fine.begin(), fine.end());
  r.refinement_factor = r.refined_constant / r.constant;
  return r;
}

}  // namespace

BoundReport bbm_symbol_stein_bound(double alpha, double theta, const CutoffSpec& cutoff,
                                   int per_decade) {
  check_order(theta, "bbm_symbol_stein_bound");
  const auto lhs = bbm_symbol_times_cutoff(alpha, cutoff);
  const auto psi = cutoff_function(cutoff);
  const auto pw = power_times_cutoff(alpha, cutoff);
  auto ratio_at = [&](double eta) {
    const double num = stein_pointwise(lhs, eta, theta);
    const double den = stein_pointwise(psi, eta, theta) + stein_pointwise(pw, eta, theta);
    return num / den;
  };
  auto base = log_probes(1e-3, 1e2, per_decade);
  base.insert(base.begin(), 0.0);
  auto refined = log_probes(1e-3, 1e2, 2 * per_decade);
  refined.insert(refined.begin(), 0.0);
  return sweep_bound("bbm_symbol", base, refined, ratio_at);
}

BoundReport negative_power_bound(double beta, double theta, const CutoffSpec& cutoff,
                                 int per_decade) {
  check_order(theta, "negative_power_bound");
  if (!(beta > 0.0 && beta < 0.5)) throw DomainError("negative_power_bound: beta must lie in (0, 1/2)");
  const auto g = negative_power_times_cutoff(beta, cutoff);
  auto ratio_at = [&](double eta) {
    return stein_pointwise(g, eta, theta) * std::pow(eta, beta + theta);
  };
  return sweep_bound("negative_power", log_probes(1e-3, 1.0, per_decade),
                     log_probes(1e-4, 1.0, 2 * per_decade), ratio_at);
}

}  // namespace fbbm
