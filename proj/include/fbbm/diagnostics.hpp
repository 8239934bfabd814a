#pragma once

#include <vector>

#include "fbbm/grid.hpp"
#include "fbbm/weights.hpp"

namespace fbbm {

/// Mass integral of u, i.e. uhat(0).
double mass(const Spectrum& s);
/// E[u] = integral (D^(alpha/2) u)^2 + u^2, evaluated spectrally.
double energy(const Spectrum& s, double alpha);
/// H[u] = integral u^2 / 2 + u^(k+1) / (k+1); for k = 2 this is
/// (1/2) integral (u^2 + (2/3) u^3).
double hamiltonian(const Field& u, int k);
/// integral u^k dx.
double power_integral(const Field& u, int k);

struct DiagnosticsOptions {
  double alpha = 0.5;
  int k = 2;
  std::vector<double> weight_exponents;    // plain <x>^r norms
  std::vector<WeightSpec> truncated;       // truncated-weight norms
};

struct DiagnosticsRecord {
  double t = 0.0;
  double mass = 0.0;
  double energy = 0.0;
  double hamiltonian = 0.0;
  double l2 = 0.0;
  double linf = 0.0;
  double power_integral = 0.0;
  std::vector<double> weighted;
  std::vector<double> truncated;
};

struct DiagnosticsSeries {
  DiagnosticsOptions options;
  std::vector<DiagnosticsRecord> records;
};

DiagnosticsRecord measure(double t, const Spectrum& s, const Field& u,
                          const DiagnosticsOptions& opts);

}  // namespace fbbm
