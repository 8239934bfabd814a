#pragma once

#include <cmath>
#include <random>

#include "fbbm/grid.hpp"

namespace testing_support {

inline double uniform(std::mt19937_64& g) { return static_cast<double>(g() >> 11) * 0x1.0p-53; }

/// Smooth random real field: a few random Fourier modes in the lower
/// quarter of the spectrum under a Gaussian envelope.
inline fbbm::Field random_field(fbbm::GridPtr grid, std::uint64_t seed, int modes = 8) {
  std::mt19937_64 g(seed);
  const double L = grid->half_length();
  std::vector<double> a, w, ph;
  const double kmax = 0.25 * grid->xi_max();
  for (int i = 0; i < modes; ++i) {
    a.push_back(2.0 * uniform(g) - 1.0);
    w.push_back(kmax * uniform(g));
    ph.push_back(6.283185307179586 * uniform(g));
  }
  const double env = 0.2 * L;
  return fbbm::sample(grid, [&](double x) {
    double s = 0.0;
    for (int i = 0; i < modes; ++i) s += a[i] * std::cos(w[i] * x + ph[i]);
    return s * std::exp(-(x / env) * (x / env));
  });
}

inline double max_abs_diff(const fbbm::Field& a, const fbbm::Field& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

}  // namespace testing_support
