#include "fbbm/diagnostics.hpp"

#include <cmath>
#include <numbers>

namespace fbbm {

double mass(const Spectrum& s) { return s.coeffs[0].real(); }

double energy(const Spectrum& s, double alpha) {
  const auto xis = s.grid->xis();
  double acc = 0.0;
  for (std::size_t k = 0; k < xis.size(); ++k)
    acc += (1.0 + std::pow(std::abs(xis[k]), alpha)) * std::norm(s.coeffs[k]);
  return acc * s.grid->dxi() / (2.0 * std::numbers::pi);
}

double power_integral(const Field& u, int k) {
  double acc = 0.0;
  for (double v : u.values) acc += std::pow(v, k);
  return acc * u.grid->dx();
}

double hamiltonian(const Field& u, int k) {
  double quad = 0.0, top = 0.0;
  for (double v : u.values) {
    quad += v * v;
    top += std::pow(v, k + 1);
  }
  return (0.5 * quad + top / (k + 1)) * u.grid->dx();
}

DiagnosticsRecord measure(double t, const Spectrum& s, const Field& u,
                          const DiagnosticsOptions& opts) {
  DiagnosticsRecord r;
  r.t = t;
  r.mass = mass(s);
  r.energy = energy(s, opts.alpha);
  r.hamiltonian = hamiltonian(u, opts.k);
  r.l2 = l2_norm(u);
  r.linf = linf_norm(u);
  r.power_integral = power_integral(u, opts.k);
  for (double e : opts.weight_exponents) r.weighted.push_back(weighted_norm(u, e));
  for (const auto& w : opts.truncated) r.truncated.push_back(weighted_norm(u, weight_values(u.grid, w)));
  return r;
}

}  // namespace fbbm
