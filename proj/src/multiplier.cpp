#include "fbbm/multiplier.hpp"

#include <cmath>

#include "fbbm/error.hpp"

namespace fbbm {

namespace {

constexpr cplx kI{0.0, 1.0};

double sgn(double x) { return x > 0.0 ? 1.0 : (x < 0.0 ? -1.0 : 0.0); }

void check_alpha(double alpha, const char* what) {
  if (!(alpha > 0.0) || !std::isfinite(alpha))
    throw DomainError(std::string(what) + ": alpha must be positive");
}

template <class F>
MultiplierSpec build(GridPtr grid, MultiplierKind kind, double order, double time, F&& f) {
  if (!grid) throw GridError("multiplier: null grid");
  MultiplierSpec m{kind, order, time, grid, std::vector<cplx>(grid->n())};
  const auto xis = grid->xis();
  for (std::size_t k = 0; k < xis.size(); ++k) m.symbol[k] = f(xis[k]);
  return m;
}

void zero_nyquist(MultiplierSpec& m) { m.symbol[m.grid->nyquist_index()] = 0.0; }

}  // namespace

std::string to_string(MultiplierKind kind) {
  switch (kind) {
    case MultiplierKind::FracDeriv: return "FracDeriv";
    case MultiplierKind::Bessel: return "Bessel";
    case MultiplierKind::Hilbert: return "Hilbert";
    case MultiplierKind::OpA: return "OpA";
    case MultiplierKind::Group: return "Group";
    case MultiplierKind::DxiF: return "DxiF";
    case MultiplierKind::Dxi2F: return "Dxi2F";
    case MultiplierKind::Derivative: return "Derivative";
    case MultiplierKind::Resolvent: return "Resolvent";
  }
  return "?";
}

double symbol_a(double xi, double alpha) { return xi / (1.0 + std::pow(std::abs(xi), alpha)); }

cplx symbol_group(double xi, double t, double alpha) {
  return std::exp(-kI * (symbol_a(xi, alpha) * t));
}

cplx symbol_dF(double xi, double t, double alpha) {
  const double p = std::pow(std::abs(xi), alpha);
  const double q = 1.0 + p;
  return -kI * t * ((1.0 + (1.0 - alpha) * p) / (q * q)) * symbol_group(xi, t, alpha);
}

cplx symbol_d2F(double xi, double t, double alpha) {
  const double ax = std::abs(xi);
  const double p = std::pow(ax, alpha);
  const double q = 1.0 + p;
  const double first = (1.0 + (1.0 - alpha) * p) / (q * q);
  const cplx F = symbol_group(xi, t, alpha);
  cplx out = (-kI * t) * (-kI * t) * first * first * F;
  if (xi != 0.0) {
    const double s = sgn(xi);
    const double q3 = q * q * q;
    out += kI * t * (alpha * (alpha + 1.0) * std::pow(ax, alpha - 1.0) * s / q3) * F;
    out += kI * t * (alpha * (1.0 - alpha) * std::pow(ax, 2.0 * alpha - 1.0) * s / q3) * F;
  }
  return out;
}

MultiplierSpec frac_deriv(GridPtr grid, double alpha) {
  if (!(alpha >= 0.0)) throw DomainError("frac_deriv: order must be nonnegative");
  return build(grid, MultiplierKind::FracDeriv, alpha, 0.0, [&](double xi) -> cplx {
    return xi == 0.0 ? (alpha == 0.0 ? 1.0 : 0.0) : std::pow(std::abs(xi), alpha);
  });
}

MultiplierSpec bessel(GridPtr grid, double s) {
  return build(grid, MultiplierKind::Bessel, s, 0.0,
               [&](double xi) -> cplx { return std::pow(1.0 + xi * xi, 0.5 * s); });
}

MultiplierSpec hilbert(GridPtr grid) {
  auto m = build(grid, MultiplierKind::Hilbert, 0.0, 0.0,
                 [](double xi) -> cplx { return -kI * sgn(xi); });
  zero_nyquist(m);
  return m;
}

MultiplierSpec op_a(GridPtr grid, double alpha) {
  check_alpha(alpha, "op_a");
  auto m = build(grid, MultiplierKind::OpA, alpha, 0.0,
                 [&](double xi) -> cplx { return -kI * symbol_a(xi, alpha); });
  zero_nyquist(m);
  return m;
}

MultiplierSpec group(GridPtr grid, double t, double alpha) {
  check_alpha(alpha, "group");
  if (!std::isfinite(t)) throw DomainError("group: time must be finite");
  auto m = build(grid, MultiplierKind::Group, alpha, t,
                 [&](double xi) { return symbol_group(xi, t, alpha); });
  m.symbol[grid->nyquist_index()] = 1.0;
  return m;
}

MultiplierSpec dxi_f(GridPtr grid, double t, double alpha) {
  check_alpha(alpha, "dxi_f");
  return build(grid, MultiplierKind::DxiF, alpha, t,
               [&](double xi) { return symbol_dF(xi, t, alpha); });
}

MultiplierSpec dxi2_f(GridPtr grid, double t, double alpha) {
  check_alpha(alpha, "dxi2_f");
  return build(grid, MultiplierKind::Dxi2F, alpha, t,
               [&](double xi) { return symbol_d2F(xi, t, alpha); });
}

MultiplierSpec derivative(GridPtr grid, int m) {
  if (m < 0) throw DomainError("derivative: order must be nonnegative");
  auto spec = build(grid, MultiplierKind::Derivative, m, 0.0,
                    [&](double xi) { return std::pow(kI * xi, m); });
  if (m % 2 == 1) zero_nyquist(spec);
  return spec;
}

MultiplierSpec resolvent(GridPtr grid, double alpha, int power) {
  check_alpha(alpha, "resolvent");
  if (power < 1) throw DomainError("resolvent: power must be >= 1");
  return build(grid, MultiplierKind::Resolvent, alpha, static_cast<double>(power),
               [&](double xi) -> cplx {
                 return std::pow(1.0 + std::pow(std::abs(xi), alpha), -power);
               });
}

void apply_multiplier_inplace(Spectrum& spec, const MultiplierSpec& m) {
  require_same_grid(spec.grid, m.grid, "apply_multiplier");
  for (std::size_t k = 0; k < spec.coeffs.size(); ++k) {
    const cplx s = m.symbol[k];
    if (std::isnan(s.real()) || std::isnan(s.imag()))
      throw DomainError("apply_multiplier: NaN in symbol " + to_string(m.kind));
    spec.coeffs[k] *= s;
  }
}

Spectrum apply_multiplier(const Spectrum& spec, const MultiplierSpec& m) {
  Spectrum out = spec;
  apply_multiplier_inplace(out, m);
  return out;
}

Field apply_multiplier(const Field& u, const MultiplierSpec& m) {
  auto s = forward(u);
  apply_multiplier_inplace(s, m);
  return inverse(s);
}

Spectrum group_propagate(const Spectrum& spec, double t, double alpha) {
  return apply_multiplier(spec, group(spec.grid, t, alpha));
}

}  // namespace fbbm
