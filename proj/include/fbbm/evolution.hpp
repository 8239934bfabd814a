#pragma once

#include <optional>
#include <string>
#include <vector>

#include "fbbm/diagnostics.hpp"
#include "fbbm/grid.hpp"
#include "fbbm/multiplier.hpp"

namespace fbbm {

/// Parameters of one fBBM run, u_t = A u + A(u^k) with A = -d/dx (1+D^alpha)^(-1).
struct EvolveConfig {
  double alpha = 0.5;
  int k = 2;
  double dt = 1e-2;
  double T = 1.0;
  std::size_t n = 1024;
  double L = 50.0;
  std::optional<double> dealias_fraction;  // default 2/(k+1)
  std::size_t record_every = 1;
  bool nonlinear = true;
  bool keep_snapshots = true;
  double blowup_factor = 1e6;
  std::vector<double> weight_exponents;
  std::vector<WeightSpec> truncated_weights;

  double effective_dealias() const { return dealias_fraction.value_or(2.0 / (k + 1)); }
};

/// Throws DomainError naming every violated precondition.
void validate(const EvolveConfig& cfg);

struct State {
  double t = 0.0;
  Spectrum spec;
};

struct Trajectory {
  std::vector<double> times;
  std::vector<Field> fields;
  DiagnosticsSeries diagnostics;
  bool blowup_suspected = false;
  std::string note;
  double dt = 0.0;  // step actually used
};

/// Spectrum of A(u^k): pointwise power, then modes with |xi| above
/// dealias_fraction * xi_max are zeroed, then A's symbol is applied.
Spectrum rhs_nonlinear(const Field& u, int k, double alpha, double dealias_fraction);

/// Integrating-factor RK4: classical RK4 on v = e^(-tA) uhat, so the linear
/// flow is exact and the nonlinear part is fourth order in dt.
class IfRk4Stepper {
 public:
  IfRk4Stepper(GridPtr grid, const EvolveConfig& cfg, double dt);

  /// Throws BlowUpError on a non-finite state or when ||u||_inf exceeds the
  /// amplitude limit.
  State step(const State& s) const;

  void set_amplitude_limit(double limit) { amplitude_limit_ = limit; }
  double dt() const { return dt_; }

 private:
  Spectrum nonlinear(const Spectrum& s, double t, bool check) const;

  GridPtr grid_;
  int k_;
  bool nonlinear_on_;
  double dt_;
  std::vector<cplx> a_symbol_;
  std::vector<cplx> half_;  // e^(A dt/2)
  std::vector<cplx> full_;  // e^(A dt)
  std::vector<unsigned char> keep_;
  double amplitude_limit_ = 0.0;
};

State step_ifrk4(const State& state, const EvolveConfig& cfg);

/// Integrates from phi to cfg.T. A blow-up ends the run early with
/// blowup_suspected set; the trajectory up to that point is kept.
Trajectory run(const EvolveConfig& cfg, const Field& phi);

/// min over tau of ||u - profile(. - tau)||_2 / ||profile||_2, shifts taken
/// spectrally. Returns the error and writes the optimal shift.
double translated_shape_error(const Field& u, const Field& profile, double* best_shift = nullptr);

}  // namespace fbbm
