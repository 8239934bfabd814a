#pragma once

#include <optional>

#include "fbbm/grid.hpp"
#include "fbbm/special.hpp"

namespace fbbm {

enum class TailModel {
  PowerLaw,        // log psi = -p log x + c on the window
  PeriodicImages,  // psi = A * sum_m |x + 2mL|^(-p), the periodized power law
};

struct TailFit {
  double exponent = 0.0;
  double x_lo = 0.0;
  double x_hi = 0.0;
  double r_squared = 0.0;
  double amplitude = 0.0;
  TailModel model = TailModel::PeriodicImages;
  std::size_t points = 0;
};

/// Solitary-wave profile of psi + D^alpha psi - psi^2 / 2 = 0.
struct GroundState {
  double alpha = 0.0;
  Field profile;
  double residual_inf = 0.0;
  std::size_t iterations = 0;
  double stabilizer = 0.0;
  std::optional<TailFit> tail_fit;
};

struct PetviashviliOptions {
  double tol = 1e-12;
  std::size_t max_iter = 5000;
  double gamma = 2.0;
  /// Defaults to 3 exp(-x^2).
  std::optional<Field> initial_guess;
};

/// Petviashvili iteration
///   psi <- M^gamma (1 + |xi|^alpha)^(-1) [psi^2 / 2]^,
///   M = <(1+|xi|^alpha) psi^, psi^> / <[psi^2/2]^, psi^>,
/// with even symmetrization every sweep. Stops when successive iterates
/// differ by at most tol in sup norm.
///
/// Throws ConvergenceError if max_iter is reached, if the stabilizer is not
/// positive (the guess is outside the positive cone), or if the iterate
/// collapses to zero.
GroundState petviashvili_solve(double alpha, GridPtr grid, const PetviashviliOptions& opts = {});

/// L-infinity residual of psi + D^alpha psi - psi^2/2.
double ground_state_residual(const Field& psi, double alpha);

/// Dilation factor ((c-1)/c)^(1/alpha) mapping Q_c's variable to psi's.
double qc_dilation(double alpha, double c);

/// Q_c(y) = ((c-1)/2) psi(((c-1)/c)^(1/alpha) y) on the grid of half-length
/// L / ((c-1)/c)^(1/alpha), where the map is exact sample-for-sample.
Field scale_to_qc(const GroundState& gs, double c);

/// Same profile resampled on an arbitrary grid by trigonometric interpolation
/// of psi (periodic in psi's box).
Field scale_to_qc(const GroundState& gs, double c, GridPtr target);

/// L-infinity residual of (c-1) Q + c D^alpha Q - Q^2.
double qc_residual(const Field& q, double alpha, double c);

/// Tail exponent p with psi ~ x^(-p) on [x_lo, x_hi]. Throws DomainError for
/// nonpositive samples in the window or a window outside (0, L].
TailFit fit_tail_exponent(const Field& profile, double x_lo, double x_hi,
                          TailModel model = TailModel::PeriodicImages);

/// Sum over m != 0 of |x + 2mL|^(-p), via Hurwitz zeta values.
double periodic_image_sum(double x, double p, double L);

}  // namespace fbbm
