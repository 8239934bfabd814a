#pragma once

#include <string>
#include <vector>

#include "fbbm/grid.hpp"

namespace fbbm {

enum class MultiplierKind {
  FracDeriv,   // |xi|^alpha
  Bessel,      // (1 + xi^2)^(s/2)
  Hilbert,     // -i sgn(xi)
  OpA,         // -i xi / (1 + |xi|^alpha)
  Group,       // exp(-i a(xi) t)
  DxiF,        // d/dxi of the group symbol
  Dxi2F,       // d^2/dxi^2 of the group symbol
  Derivative,  // (i xi)^m
  Resolvent,   // (1 + |xi|^alpha)^(-j)
};

std::string to_string(MultiplierKind kind);

/// A named symbol family evaluated on a grid's wavenumber lattice.
///
/// Odd symbols (Hilbert, OpA, odd-order Derivative) vanish on the unpaired
/// mode -n/2 so that real fields stay real; Group takes the value 1 there,
/// which is exp(t * OpA) with that convention.
struct MultiplierSpec {
  MultiplierKind kind;
  double order = 0.0;  // alpha, s, m or j depending on kind
  double time = 0.0;   // Group, DxiF, Dxi2F
  GridPtr grid;
  std::vector<cplx> symbol;
};

MultiplierSpec frac_deriv(GridPtr grid, double alpha);
MultiplierSpec bessel(GridPtr grid, double s);
MultiplierSpec hilbert(GridPtr grid);
MultiplierSpec op_a(GridPtr grid, double alpha);
MultiplierSpec group(GridPtr grid, double t, double alpha);
MultiplierSpec dxi_f(GridPtr grid, double t, double alpha);
MultiplierSpec dxi2_f(GridPtr grid, double t, double alpha);
MultiplierSpec derivative(GridPtr grid, int m);
MultiplierSpec resolvent(GridPtr grid, double alpha, int power = 1);

/// Pointwise product of coefficients and symbol. Throws GridError on grid
/// mismatch and DomainError if the symbol contains a NaN.
Spectrum apply_multiplier(const Spectrum& spec, const MultiplierSpec& m);
void apply_multiplier_inplace(Spectrum& spec, const MultiplierSpec& m);
/// Convenience: inverse(apply_multiplier(forward(u), m)).
Field apply_multiplier(const Field& u, const MultiplierSpec& m);

// Scalar symbols of the linear fBBM flow.

/// a(xi) = xi / (1 + |xi|^alpha); the group symbol is exp(-i a(xi) t).
double symbol_a(double xi, double alpha);
cplx symbol_group(double xi, double t, double alpha);
/// -i t (1 + (1-alpha)|xi|^alpha) / (1+|xi|^alpha)^2 * F(t, xi).
cplx symbol_dF(double xi, double t, double alpha);
/// Second xi-derivative of F. The |xi|^(alpha-1) sgn(xi) terms are taken as 0
/// at xi = 0.
cplx symbol_d2F(double xi, double t, double alpha);

/// Propagates by the free group e^{tA}.
Spectrum group_propagate(const Spectrum& spec, double t, double alpha);

}  // namespace fbbm
