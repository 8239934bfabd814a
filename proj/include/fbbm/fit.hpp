#pragma once

#include <functional>
#include <span>
#include <vector>

namespace fbbm {

struct LineFit {
  double slope = 0.0;
  double intercept = 0.0;
  double r_squared = 0.0;
  std::size_t points = 0;
};

/// Ordinary least squares y = slope * x + intercept. Needs at least two
/// distinct x values.
LineFit fit_line(std::span<const double> x, std::span<const double> y);

/// Golden-section minimization of a unimodal function on [lo, hi].
double golden_minimize(const std::function<double(double)>& f, double lo, double hi,
                       double xtol = 1e-10);

/// log-spaced points, `per_decade` per factor of 10, covering [lo, hi].
std::vector<double> log_probes(double lo, double hi, int per_decade);

}  // namespace fbbm
