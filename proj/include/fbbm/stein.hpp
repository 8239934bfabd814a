#pragma once

#include <functional>
#include <string>
#include <vector>

#include "fbbm/grid.hpp"
#include "fbbm/kernels.hpp"

namespace fbbm {

/// Stein square function
///   D^b f(x) = ( integral |f(x) - f(y)|^2 / |x - y|^(1+2b) dy )^(1/2)
/// on the grid, with f extended periodically from the box. Cost is O(n^2).
Field stein_derivative(const Field& f, double b, kernels::Exec exec = kernels::Exec::Parallel);

/// Continuum constant c_b^2 = integral |e^{ih} - 1|^2 |h|^(-1-2b) dh, so that
/// the L2 norm of the Stein function is c_b times that of |xi|^b fhat.
double stein_constant(double b);

/// Smooth even cutoff: 1 on [-1, 1], 0 outside [-2, 2], C-infinity between.
struct CutoffSpec {
  double inner = 1.0;
  double outer = 2.0;
  double value(double xi) const;
  double derivative(double xi) const;
};

/// A frequency-side function supported in [-outer, outer] with its derivative
/// and the points where it is not smooth (kinks) or changes form (breaks).
struct ProbeFunction {
  std::string name;
  std::function<double(double)> value;
  std::function<double(double)> derivative;
  double support = 2.0;
  std::vector<double> kinks;
  std::vector<double> breaks;
};

ProbeFunction power_times_cutoff(double alpha, const CutoffSpec& cutoff);           // |xi|^alpha psi
ProbeFunction bbm_symbol_times_cutoff(double alpha, const CutoffSpec& cutoff);      // psi / (1+|xi|^alpha)
ProbeFunction negative_power_times_cutoff(double beta, const CutoffSpec& cutoff);   // |xi|^-beta psi
ProbeFunction cutoff_function(const CutoffSpec& cutoff);                            // psi

/// (D^theta g)(eta)^2 by adaptive tanh-sinh quadrature on the support, split
/// at the kinks, breaks, +-support and eta, plus the exact exterior tail.
double stein_pointwise_sq(const ProbeFunction& g, double eta, double theta);
double stein_pointwise(const ProbeFunction& g, double eta, double theta);

/// Evaluates D^theta g over a probe set.
std::vector<double> stein_probe_sweep(const ProbeFunction& g, const std::vector<double>& etas,
                                      double theta,
                                      kernels::Exec exec = kernels::Exec::Parallel);

struct AsymptoticsReport {
  double alpha = 0.0;
  double theta = 0.0;
  double p_small = 0.0;    // exponent of the small-|eta| branch
  double r2_small = 0.0;
  double p_large = 0.0;    // exponent of the large-|eta| branch
  double r2_large = 0.0;
  double plateau = 0.0;    // D^theta(|xi|^alpha psi)(0) when alpha > theta
  bool log_corrected = false;
  bool small_inconclusive = false;
  bool large_inconclusive = false;
  std::vector<double> small_eta, small_values, large_eta, large_values;
};

/// Log-log fits of eta -> D^theta(|xi|^alpha psi)(eta) on [1e-3, 1e-1] and
/// [10, 100].
///
/// For alpha > theta the function tends to a plateau c1 at 0 and the fit uses
/// sqrt|D^2(eta) - c1^2|, whose exponent is alpha - theta when
/// theta >= alpha/2. At theta = alpha/2 that difference carries an extra
/// |ln eta| factor, which is divided out before fitting. For alpha < theta
/// the raw values are fitted. alpha == theta (the logarithmic branch) is
/// rejected.
AsymptoticsReport stein_asymptotics(double alpha, double theta, const CutoffSpec& cutoff = {},
                                    int per_decade = 40);

struct L2MembershipReport {
  double alpha = 0.0;
  double theta = 0.0;
  std::vector<double> decade_lo;         // 10^-1, 10^-2, ...
  std::vector<double> decade_integrals;  // 2 * integral over [lo, 10 lo] of D^2
  double decade_ratio = 0.0;             // geometric mean ratio of successive decades
  double fitted_exponent = 0.0;          // -log10(decade_ratio)
  bool cauchy = false;                   // decade integrals shrink
};

/// Integrates D^theta(|xi|^alpha psi)^2 over shrinking neighbourhoods of 0 and
/// decides whether the partial integrals form a Cauchy sequence.
L2MembershipReport stein_l2_membership(double alpha, double theta, const CutoffSpec& cutoff = {},
                                       int decades = 6);

struct BoundReport {
  std::string name;
  double constant = 0.0;          // max ratio over the base probe set
  double refined_constant = 0.0;  // same on the refined probe set
  double refinement_factor = 0.0;
  std::vector<double> eta, ratio;
};

/// Smallest C with D^theta(psi/(1+|xi|^alpha))(eta)
///   <= C [D^theta psi(eta) + D^theta(|xi|^alpha psi)(eta)]
/// over eta in {0} U [1e-3, 1e2], and the same with twice the probe density.
BoundReport bbm_symbol_stein_bound(double alpha, double theta, const CutoffSpec& cutoff = {},
                                   int per_decade = 40);

/// sup of D^theta(|xi|^-beta psi)(eta) * eta^(beta+theta) over [1e-3, 1];
/// the refined set doubles the density and extends down to 1e-4.
BoundReport negative_power_bound(double beta, double theta, const CutoffSpec& cutoff = {},
                                 int per_decade = 40);

}  // namespace fbbm
