#pragma once

#include <complex>
#include <cstddef>
#include <memory>
#include <span>
#include <vector>

namespace fbbm {

using cplx = std::complex<double>;

class FftPlan;
class SpectralGrid;
using GridPtr = std::shared_ptr<const SpectralGrid>;

/// Uniform periodic grid on [-L, L) with its wavenumber lattice.
///
/// Sample points are x_j = -L + j*dx, j = 0..n-1. Wavenumbers are stored in
/// FFT order: index k holds pi*k/L for k < n/2 and pi*(k-n)/L otherwise, so
/// index n/2 is the unpaired mode -n/2.
class SpectralGrid {
 public:
  SpectralGrid(std::size_t n, double half_length);
  ~SpectralGrid();
  SpectralGrid(const SpectralGrid&) = delete;
  SpectralGrid& operator=(const SpectralGrid&) = delete;

  std::size_t n() const { return n_; }
  double half_length() const { return half_length_; }
  double dx() const { return dx_; }
  /// Lattice spacing pi/L of the wavenumbers.
  double dxi() const { return dxi_; }
  /// Magnitude of the unpaired mode, pi*n/(2L).
  double xi_max() const { return dxi_ * static_cast<double>(n_ / 2); }
  std::size_t nyquist_index() const { return n_ / 2; }

  std::span<const double> xs() const { return xs_; }
  std::span<const double> xis() const { return xis_; }

  /// Continuum-matching transform: uhat(xi_k) = dx * sum_j u_j exp(-i xi_k x_j).
  void forward(std::span<const cplx> in, std::span<cplx> out) const;
  /// Inverse of forward: u_j = (1/2L) * sum_k uhat_k exp(i xi_k x_j).
  void inverse(std::span<const cplx> in, std::span<cplx> out) const;

 private:
  std::size_t n_;
  double half_length_;
  double dx_;
  double dxi_;
  std::vector<double> xs_;
  std::vector<double> xis_;
  std::unique_ptr<FftPlan> plan_;
};

/// Validates (n, L) and builds a shared grid.
GridPtr make_grid(std::size_t n, double half_length);

struct Field {
  GridPtr grid;
  std::vector<double> values;

  Field() = default;
  explicit Field(GridPtr g);
  Field(GridPtr g, std::vector<double> v);

  std::size_t size() const { return values.size(); }
  double operator[](std::size_t i) const { return values[i]; }
  double& operator[](std::size_t i) { return values[i]; }
};

struct Spectrum {
  GridPtr grid;
  std::vector<cplx> coeffs;

  Spectrum() = default;
  explicit Spectrum(GridPtr g);
  Spectrum(GridPtr g, std::vector<cplx> c);

  std::size_t size() const { return coeffs.size(); }
};

/// Samples f at the grid points.
template <class F>
Field sample(GridPtr grid, F&& f) {
  Field out(grid);
  const auto xs = grid->xs();
  for (std::size_t j = 0; j < xs.size(); ++j) out.values[j] = f(xs[j]);
  return out;
}

Spectrum forward(const Field& field);
/// Returns the real part; the imaginary residue is dropped.
Field inverse(const Spectrum& spec);
/// Full complex inverse, for realness checks.
std::vector<cplx> inverse_complex(const Spectrum& spec);

/// Throws GridError unless both operands live on the same grid object.
void require_same_grid(const GridPtr& a, const GridPtr& b, const char* what);

// Quadrature on the grid.
double integral(const Field& u);
double l2_norm(const Field& u);
double linf_norm(const Field& u);
/// (1/2pi) * sum |uhat|^2 * dxi; equals l2_norm^2 by Parseval.
double spectral_l2_squared(const Spectrum& s);

Field operator+(const Field& a, const Field& b);
Field operator-(const Field& a, const Field& b);
Field operator*(const Field& a, const Field& b);
Field operator*(double c, const Field& a);

}  // namespace fbbm
