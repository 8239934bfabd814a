#pragma once

// Data-parallel inner loops. Every kernel comes as a serial reference and an
// OpenMP version with identical per-element arithmetic, so the two agree
// bit-for-bit and results do not depend on the thread count.

#include <cstddef>
#include <exception>
#include <span>
#include <vector>

#include "fbbm/grid.hpp"

namespace fbbm::kernels {

enum class Exec { Serial, Parallel };

/// Stein square-function quadrature on a uniform periodic grid, integrating
/// over the line against the periodic extension of f.
///   off-diagonal cells: midpoint rule with the image-summed kernel
///     sum_j |x - y + 2jL|^(-1-2b)
///   diagonal cell: local linear model, 2 |f'|^2 (dx/2)^(2-2b) / (2-2b)
/// Writes the square root of the integral.
void stein_grid_serial(std::span<const double> f, std::span<const double> df, double dx, double b,
                       std::span<double> out);
void stein_grid_omp(std::span<const double> f, std::span<const double> df, double dx, double b,
                    std::span<double> out);

/// Evaluates the trigonometric interpolant
///   u(y) = (1/2L) * Re sum_k c_k exp(i xi_k y)
/// at arbitrary points.
void trig_eval_serial(std::span<const cplx> coeffs, std::span<const double> xis,
                      double half_length, std::span<const double> points, std::span<double> out);
void trig_eval_omp(std::span<const cplx> coeffs, std::span<const double> xis, double half_length,
                   std::span<const double> points, std::span<double> out);

/// out[i] = f(in[i]); f must be safe to call concurrently.
template <class F>
void map_serial(std::span<const double> in, std::span<double> out, F&& f) {
  for (std::size_t i = 0; i < in.size(); ++i) out[i] = f(in[i]);
}

/// Exceptions thrown by f are carried out of the parallel region; the one
/// from the lowest index is rethrown.
template <class F>
void map_omp(std::span<const double> in, std::span<double> out, F&& f) {
  const long long n = static_cast<long long>(in.size());
  std::vector<std::exception_ptr> errors(in.size());
#pragma omp parallel for schedule(dynamic, 1)
  for (long long i = 0; i < n; ++i) {
    try {
      out[i] = f(in[i]);
    } catch (...) {
      errors[i] = std::current_exception();
    }
  }
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
}

template <class F>
void map(Exec exec, std::span<const double> in, std::span<double> out, F&& f) {
  if (exec == Exec::Parallel)
    map_omp(in, out, f);
  else
    map_serial(in, out, f);
}

}  // namespace fbbm::kernels
