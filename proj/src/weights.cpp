#include "fbbm/weights.hpp"

#include <cmath>
#include <numbers>

#include "fbbm/error.hpp"

namespace fbbm {

double japanese(double x) { return std::sqrt(1.0 + x * x); }

double truncated_weight(double x, double theta, double N) {
  if (!(N >= 1.0)) throw DomainError("truncated_weight: N must be >= 1");
  if (!(theta > 0.0 && theta <= 1.0)) throw DomainError("truncated_weight: theta must be in (0,1]");
  const double ax = std::abs(x);
  if (ax <= N) return std::pow(1.0 + ax * ax, 0.5 * theta);
  const double cap = std::sqrt(4.0 * N * N - 1.0);
  const double span = 2.0 * (cap - N);  // slope integrates to cap - N over span
  const double v = std::min(1.0, (ax - N) / span);
  // integral of 1 - S(s), S(s) = 6s^5 - 15s^4 + 10s^3
  const double v2 = v * v, v4 = v2 * v2;
  const double integral = v - (v4 * v2 - 3.0 * v4 * v + 2.5 * v4);
  const double rho = N + span * integral;
  return std::pow(1.0 + rho * rho, 0.5 * theta);
}

Field weight_values(GridPtr grid, const WeightSpec& spec) {
  if (spec.mode == WeightMode::Plain) {
    return sample(grid, [&](double x) { return std::pow(1.0 + x * x, 0.5 * spec.r); });
  }
  return sample(grid, [&](double x) { return truncated_weight(x, spec.theta, spec.N); });
}

double weighted_norm(const Field& u, double r) {
  const auto xs = u.grid->xs();
  double acc = 0.0;
  for (std::size_t j = 0; j < xs.size(); ++j)
    acc += std::pow(1.0 + xs[j] * xs[j], r) * u.values[j] * u.values[j];
  return std::sqrt(acc * u.grid->dx());
}

double weighted_norm(const Field& u, const Field& weight) { return l2_norm(weight * u); }

double sobolev_norm(const Field& u, double s) {
  const auto spec = forward(u);
  const auto xis = u.grid->xis();
  double acc = 0.0;
  for (std::size_t k = 0; k < xis.size(); ++k)
    acc += std::pow(1.0 + xis[k] * xis[k], s) * std::norm(spec.coeffs[k]);
  return std::sqrt(acc * u.grid->dxi() / (2.0 * std::numbers::pi));
}

double interpolation_ratio(const Field& f, double s, double b, double theta) {
  if (!(theta >= 0.0 && theta <= 1.0)) throw DomainError("interpolation_ratio: theta in [0,1]");
  const double weighted = weighted_norm(f, b);
  const double smooth = sobolev_norm(f, s);
  if (weighted == 0.0 || smooth == 0.0) throw DomainError("interpolation_ratio: zero denominator");
  const double e = (1.0 - theta) * b;
  Field g = sample(f.grid, [&](double x) { return std::pow(1.0 + x * x, 0.5 * e); }) * f;
  const double lhs = sobolev_norm(g, theta * s);
  return lhs / (std::pow(weighted, 1.0 - theta) * std::pow(smooth, theta));
}

}  // namespace fbbm
