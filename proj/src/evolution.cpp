#include "fbbm/evolution.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "fbbm/error.hpp"
#include "fbbm/fit.hpp"

namespace fbbm {

void validate(const EvolveConfig& cfg) {
  std::ostringstream err;
  if (!(cfg.alpha > 0.0 && cfg.alpha <= 2.0)) err << "alpha must lie in (0,2]; ";
  if (cfg.k < 2) err << "k must be >= 2; ";
  if (!(cfg.dt > 0.0)) err << "dt must be positive; ";
  if (!(cfg.T >= 0.0)) err << "T must be nonnegative; ";
  const double d = cfg.effective_dealias();
  if (!(d > 0.0 && d <= 1.0)) err << "dealias_fraction must lie in (0,1]; ";
  if (cfg.record_every < 1) err << "record_every must be >= 1; ";
  if (!(cfg.blowup_factor > 1.0)) err << "blowup_factor must exceed 1; ";
  const auto msg = err.str();
  if (!msg.empty()) throw DomainError("evolve config: " + msg.substr(0, msg.size() - 2));
}

Spectrum rhs_nonlinear(const Field& u, int k, double alpha, double dealias_fraction) {
  Field p(u.grid);
  for (std::size_t j = 0; j < u.values.size(); ++j) p.values[j] = std::pow(u.values[j], k);
  Spectrum s = forward(p);
  const auto xis = u.grid->xis();
  const double cut = dealias_fraction * u.grid->xi_max();
  for (std::size_t m = 0; m < xis.size(); ++m)
    if (std::abs(xis[m]) > cut) s.coeffs[m] = 0.0;
  apply_multiplier_inplace(s, op_a(u.grid, alpha));
  return s;
}

IfRk4Stepper::IfRk4Stepper(GridPtr grid, const EvolveConfig& cfg, double dt)
    : grid_(std::move(grid)), k_(cfg.k), nonlinear_on_(cfg.nonlinear), dt_(dt) {
  const auto A = op_a(grid_, cfg.alpha);
  a_symbol_ = A.symbol;
  const std::size_t n = grid_->n();
  half_.resize(n);
  full_.resize(n);
  keep_.resize(n);
  const auto xis = grid_->xis();
  const double cut = cfg.effective_dealias() * grid_->xi_max();
  for (std::size_t m = 0; m < n; ++m) {
    half_[m] = std::exp(a_symbol_[m] * (0.5 * dt));
    full_[m] = std::exp(a_symbol_[m] * dt);
    keep_[m] = std::abs(xis[m]) <= cut ? 1 : 0;
  }
}

Spectrum IfRk4Stepper::nonlinear(const Spectrum& s, double t, bool check) const {
  Field u = inverse(s);
  if (check) {
    double m = 0.0;
    for (double v : u.values) {
      if (!std::isfinite(v)) throw BlowUpError("non-finite value in state", t);
      m = std::max(m, std::abs(v));
    }
    if (amplitude_limit_ > 0.0 && m > amplitude_limit_)
      throw BlowUpError("amplitude exceeded blow-up threshold", t);
  }
  Spectrum out(grid_);
  if (!nonlinear_on_) return out;
  Field p(grid_);
  for (std::size_t j = 0; j < u.values.size(); ++j) p.values[j] = std::pow(u.values[j], k_);
  grid_->forward(std::vector<cplx>(p.values.begin(), p.values.end()), out.coeffs);
  for (std::size_t m = 0; m < out.coeffs.size(); ++m)
    out.coeffs[m] = keep_[m] ? out.coeffs[m] * a_symbol_[m] : cplx{};
  return out;
}

State IfRk4Stepper::step(const State& s) const {
  require_same_grid(s.spec.grid, grid_, "step_ifrk4");
  const std::size_t n = grid_->n();
  const double h = dt_;
  const auto& u = s.spec.coeffs;
  const Spectrum k1 = nonlinear(s.spec, s.t, true);

  Spectrum stage(grid_);
  for (std::size_t m = 0; m < n; ++m) stage.coeffs[m] = half_[m] * (u[m] + 0.5 * h * k1.coeffs[m]);
  const Spectrum k2 = nonlinear(stage, s.t + 0.5 * h, false);

  for (std::size_t m = 0; m < n; ++m) stage.coeffs[m] = half_[m] * u[m] + 0.5 * h * k2.coeffs[m];
  const Spectrum k3 = nonlinear(stage, s.t + 0.5 * h, false);

  for (std::size_t m = 0; m < n; ++m) stage.coeffs[m] = full_[m] * u[m] + h * half_[m] * k3.coeffs[m];
  const Spectrum k4 = nonlinear(stage, s.t + h, false);

  State next{s.t + h, Spectrum(grid_)};
  for (std::size_t m = 0; m < n; ++m) {
    const cplx c = full_[m] * u[m] +
                   (h / 6.0) * (full_[m] * k1.coeffs[m] +
                                2.0 * half_[m] * (k2.coeffs[m] + k3.coeffs[m]) + k4.coeffs[m]);
    if (!std::isfinite(c.real()) || !std::isfinite(c.imag()))
      throw BlowUpError("non-finite spectrum after step", next.t);
    next.spec.coeffs[m] = c;
  }
  return next;
}

State step_ifrk4(const State& state, const EvolveConfig& cfg) {
  validate(cfg);
  IfRk4Stepper stepper(state.spec.grid, cfg, cfg.dt);
  return stepper.step(state);
}

Trajectory run(const EvolveConfig& cfg, const Field& phi) {
  validate(cfg);
  if (!phi.grid) throw GridError("run: initial field has no grid");
  for (double v : phi.values)
    if (!std::isfinite(v)) throw DomainError("run: initial field is not finite");

  const auto grid = phi.grid;
  std::size_t steps = 0;
  double dt = cfg.dt;
  if (cfg.T > 0.0) {
    steps = static_cast<std::size_t>(std::ceil(cfg.T / cfg.dt - 1e-9));
    dt = cfg.T / static_cast<double>(steps);
  }
  IfRk4Stepper stepper(grid, cfg, dt);
  const double amp0 = linf_norm(phi);
  if (amp0 > 0.0) stepper.set_amplitude_limit(cfg.blowup_factor * amp0);

  Trajectory traj;
  traj.dt = dt;
  traj.diagnostics.options = DiagnosticsOptions{cfg.alpha, cfg.k, cfg.weight_exponents,
                                                cfg.truncated_weights};
  auto record = [&](const State& st) {
    Field u = inverse(st.spec);
    traj.times.push_back(st.t);
    traj.diagnostics.records.push_back(measure(st.t, st.spec, u, traj.diagnostics.options));
    if (cfg.keep_snapshots) traj.fields.push_back(std::move(u));
  };

  State st{0.0, forward(phi)};
  record(st);
  for (std::size_t i = 1; i <= steps; ++i) {
    try {
      st = stepper.step(st);
    } catch (const BlowUpError& e) {
      traj.blowup_suspected = true;
      std::ostringstream os;
      os << "blow-up suspected at t=" << e.time() << ": " << e.what();
      traj.note = os.str();
      return traj;
    }
    if (i == steps) st.t = cfg.T;
    if (i % cfg.record_every == 0 || i == steps) record(st);
  }
  return traj;
}

double translated_shape_error(const Field& u, const Field& profile, double* best_shift) {
  require_same_grid(u.grid, profile.grid, "translated_shape_error");
  const auto grid = u.grid;
  const Spectrum su = forward(u), sq = forward(profile);
  const auto xis = grid->xis();
  const std::size_t n = grid->n();
  const double norm_q = l2_norm(profile);
  const double c0 = grid->dxi() / (2.0 * std::numbers::pi);
  // <u, profile(. - tau)> = c0 * sum Re(uhat conj(qhat) exp(i xi tau))
  auto corr = [&](double tau) {
    double acc = 0.0;
    for (std::size_t m = 0; m < n; ++m) {
      if (m == grid->nyquist_index()) continue;
      acc += (su.coeffs[m] * std::conj(sq.coeffs[m]) * std::exp(cplx(0.0, xis[m] * tau))).real();
    }
    return acc * c0;
  };
  // Coarse search over grid shifts via one inverse transform.
  Spectrum cross(grid);
  for (std::size_t m = 0; m < n; ++m) cross.coeffs[m] = su.coeffs[m] * std::conj(sq.coeffs[m]);
  const auto c = inverse_complex(cross);
  std::size_t best = 0;
  for (std::size_t j = 1; j < n; ++j)
    if (c[j].real() > c[best].real()) best = j;
  // inverse evaluates at x_j = -L + j dx, which is the shift tau.
  const double tau0 = grid->xs()[best];
  const double dx = grid->dx();
  const double tau = golden_minimize([&](double t) { return -corr(t); }, tau0 - dx, tau0 + dx, 1e-12);
  if (best_shift) *best_shift = tau;
  // The difference is formed explicitly; expanding the square would lose
  // everything below ~1e-8.
  Spectrum shifted(grid);
  for (std::size_t m = 0; m < n; ++m) shifted.coeffs[m] = sq.coeffs[m] * std::exp(cplx(0.0, -xis[m] * tau));
  return l2_norm(u - inverse(shifted)) / norm_q;
}

}  // namespace fbbm
