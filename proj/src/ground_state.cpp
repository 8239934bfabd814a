#include "fbbm/ground_state.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "fbbm/error.hpp"
#include "fbbm/fit.hpp"
#include "fbbm/kernels.hpp"
#include "fbbm/multiplier.hpp"

namespace fbbm {

namespace {

void symmetrize(Field& f) {
  const std::size_t n = f.size();
  std::vector<double> out(n);
  for (std::size_t j = 0; j < n; ++j) out[j] = 0.5 * (f.values[j] + f.values[(n - j) % n]);
  f.values = std::move(out);
}

}  // namespace

double ground_state_residual(const Field& psi, double alpha) {
  const Field d = apply_multiplier(psi, frac_deriv(psi.grid, alpha));
  double m = 0.0;
  for (std::size_t j = 0; j < psi.size(); ++j)
    m = std::max(m, std::abs(psi[j] + d[j] - 0.5 * psi[j] * psi[j]));
  return m;
}

GroundState petviashvili_solve(double alpha, GridPtr grid, const PetviashviliOptions& opts) {
  if (!(alpha > 0.0 && alpha <= 2.0)) throw DomainError("petviashvili: alpha must lie in (0,2]");
  if (!(opts.tol > 0.0)) throw DomainError("petviashvili: tol must be positive");
  if (!grid) throw GridError("petviashvili: null grid");

  Field psi = opts.initial_guess ? *opts.initial_guess
                                 : sample(grid, [](double x) { return 3.0 * std::exp(-x * x); });
  require_same_grid(psi.grid, grid, "petviashvili");

  const auto L = frac_deriv(grid, alpha);
  std::vector<double> lin(grid->n());
  for (std::size_t k = 0; k < lin.size(); ++k) lin[k] = 1.0 + L.symbol[k].real();

  GroundState gs;
  gs.alpha = alpha;
  for (std::size_t it = 1; it <= opts.max_iter; ++it) {
    const Spectrum ph = forward(psi);
    Field half_sq(grid);
    for (std::size_t j = 0; j < psi.size(); ++j) half_sq[j] = 0.5 * psi[j] * psi[j];
    Spectrum nh = forward(half_sq);

    double num = 0.0, den = 0.0;
    for (std::size_t k = 0; k < lin.size(); ++k) {
      num += lin[k] * std::norm(ph.coeffs[k]);
      den += (nh.coeffs[k] * std::conj(ph.coeffs[k])).real();
    }
    const double M = num / den;
    if (!std::isfinite(M) || !(M > 0.0))
      throw ConvergenceError("petviashvili: stabilizer is not positive (M=" + std::to_string(M) +
                             "); initial guess must be positive");

    const double gain = std::pow(M, opts.gamma);
    for (std::size_t k = 0; k < lin.size(); ++k) nh.coeffs[k] *= gain / lin[k];
    Field next = inverse(nh);
    symmetrize(next);

    const double amp = linf_norm(next);
    if (!(amp > 1e-12) || !std::isfinite(amp))
      throw ConvergenceError("petviashvili: iterate collapsed to the zero profile");

    double diff = 0.0;
    for (std::size_t j = 0; j < psi.size(); ++j) diff = std::max(diff, std::abs(next[j] - psi[j]));
    psi = std::move(next);
    gs.stabilizer = M;
    gs.iterations = it;
    if (diff <= opts.tol) {
      gs.profile = std::move(psi);
      gs.residual_inf = ground_state_residual(gs.profile, alpha);
      return gs;
    }
  }
  throw ConvergenceError("petviashvili: no convergence after " + std::to_string(opts.max_iter) +
                         " iterations");
}

double qc_dilation(double alpha, double c) {
  if (!(c > 1.0)) throw DomainError("speed c must exceed 1");
  return std::pow((c - 1.0) / c, 1.0 / alpha);
}

Field scale_to_qc(const GroundState& gs, double c) {
  const double shrink = qc_dilation(gs.alpha, c);
  const auto& g = gs.profile.grid;
  auto target = make_grid(g->n(), g->half_length() / shrink);
  Field q(target);
  for (std::size_t j = 0; j < q.size(); ++j) q[j] = 0.5 * (c - 1.0) * gs.profile[j];
  return q;
}

Field scale_to_qc(const GroundState& gs, double c, GridPtr target) {
  const double shrink = qc_dilation(gs.alpha, c);
  const Spectrum s = forward(gs.profile);
  const auto ys = target->xs();
  std::vector<double> pts(ys.size());
  for (std::size_t j = 0; j < ys.size(); ++j) pts[j] = ys[j] * shrink;
  Field q(target);
  kernels::trig_eval_omp(s.coeffs, gs.profile.grid->xis(), gs.profile.grid->half_length(), pts,
                         q.values);
  for (double& v : q.values) v *= 0.5 * (c - 1.0);
  return q;
}

double qc_residual(const Field& q, double alpha, double c) {
  const Field d = apply_multiplier(q, frac_deriv(q.grid, alpha));
  double m = 0.0;
  for (std::size_t j = 0; j < q.size(); ++j)
    m = std::max(m, std::abs((c - 1.0) * q[j] + c * d[j] - q[j] * q[j]));
  return m;
}

double periodic_image_sum(double x, double p, double L) {
  const double period = 2.0 * L;
  return std::pow(period, -p) * (hurwitz_zeta(p, 1.0 + x / period) + hurwitz_zeta(p, 1.0 - x / period));
}

TailFit fit_tail_exponent(const Field& profile, double x_lo, double x_hi, TailModel model) {
  const double L = profile.grid->half_length();
  if (!(x_lo > 0.0) || !(x_hi > x_lo) || x_hi > 0.7 * L + 1e-12)
    throw DomainError("fit_tail_exponent: window must lie inside (0, 0.7L]");
  std::vector<double> lx, ly, xs;
  const auto grid_x = profile.grid->xs();
  for (std::size_t j = 0; j < profile.size(); ++j) {
    const double x = grid_x[j];
    if (x < x_lo || x > x_hi) continue;
    if (!(profile[j] > 0.0))
      throw DomainError("fit_tail_exponent: nonpositive sample at x=" + std::to_string(x) +
                        " (boundary contamination)");
    xs.push_back(x);
    lx.push_back(std::log(x));
    ly.push_back(std::log(profile[j]));
  }
  if (xs.size() < 3) throw DomainError("fit_tail_exponent: fewer than 3 samples in window");

  TailFit out;
  out.x_lo = x_lo;
  out.x_hi = x_hi;
  out.model = model;
  out.points = xs.size();
  if (model == TailModel::PowerLaw) {
    const auto f = fit_line(lx, ly);
    out.exponent = -f.slope;
    out.r_squared = f.r_squared;
    out.amplitude = std::exp(f.intercept);
    return out;
  }

  double mean_y = 0.0;
  for (double v : ly) mean_y += v;
  mean_y /= static_cast<double>(ly.size());
  double sst = 0.0;
  for (double v : ly) sst += (v - mean_y) * (v - mean_y);

  // log psi = log A + log P(x; p); log A is the mean residual for fixed p.
  auto sse_for = [&](double p, double* log_amp) {
    std::vector<double> z(xs.size());
    double shift = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
      z[i] = std::log(std::pow(xs[i], -p) + periodic_image_sum(xs[i], p, L));
      shift += ly[i] - z[i];
    }
    shift /= static_cast<double>(xs.size());
    double sse = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
      const double r = ly[i] - z[i] - shift;
      sse += r * r;
    }
    if (log_amp) *log_amp = shift;
    return sse;
  };
  const double p = golden_minimize([&](double q) { return sse_for(q, nullptr); }, 1.0 + 1e-6, 6.0, 1e-9);
  double log_amp = 0.0;
  const double sse = sse_for(p, &log_amp);
  out.exponent = p;
  out.amplitude = std::exp(log_amp);
  out.r_squared = sst > 0.0 ? 1.0 - sse / sst : 1.0;
  return out;
}

}  // namespace fbbm
