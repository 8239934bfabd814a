#include "fbbm/kernels.hpp"

#include <cmath>
#include <vector>

#include "fbbm/special.hpp"

namespace fbbm::kernels {

namespace {

// dx * sum_j |m dx + 2jL|^(-1-2b) for m = 1..n-1; index 0 unused.
std::vector<double> offdiag_weights(std::size_t n, double dx, double b) {
  const double s = 1.0 + 2.0 * b;
  const double period = dx * static_cast<double>(n);
  std::vector<double> w(n, 0.0);
  for (std::size_t m = 1; m < n; ++m) {
    const double q = static_cast<double>(m) / static_cast<double>(n);
    w[m] = dx * std::pow(period, -s) * (hurwitz_zeta(s, q) + hurwitz_zeta(s, 1.0 - q));
  }
  return w;
}

inline double stein_point(std::size_t j, std::span<const double> f, std::span<const double> df,
                          const std::vector<double>& w, double dx, double b) {
  const std::size_t n = f.size();
  const double fj = f[j];
  double acc = 0.0;
  for (std::size_t i = 0; i < j; ++i) {
    const double d = fj - f[i];
    acc += d * d * w[j - i];
  }
  for (std::size_t i = j + 1; i < n; ++i) {
    const double d = fj - f[i];
    acc += d * d * w[n - (i - j)];
  }
  const double e = 2.0 - 2.0 * b;
  acc += 2.0 * df[j] * df[j] * std::pow(0.5 * dx, e) / e;
  return std::sqrt(acc);
}

inline double trig_point(std::span<const cplx> coeffs, std::span<const double> xis, double scale,
                         double y) {
  double acc = 0.0;
  for (std::size_t k = 0; k < coeffs.size(); ++k) {
    const double ph = xis[k] * y;
    acc += coeffs[k].real() * std::cos(ph) - coeffs[k].imag() * std::sin(ph);
  }
  return acc * scale;
}

}  // namespace

void stein_grid_serial(std::span<const double> f, std::span<const double> df, double dx, double b,
                       std::span<double> out) {
  const auto w = offdiag_weights(f.size(), dx, b);
  for (std::size_t j = 0; j < f.size(); ++j) out[j] = stein_point(j, f, df, w, dx, b);
}

void stein_grid_omp(std::span<const double> f, std::span<const double> df, double dx, double b,
                    std::span<double> out) {
  const auto w = offdiag_weights(f.size(), dx, b);
  const long long n = static_cast<long long>(f.size());
#pragma omp parallel for schedule(static)
  for (long long j = 0; j < n; ++j)
    out[j] = stein_point(static_cast<std::size_t>(j), f, df, w, dx, b);
}

void trig_eval_serial(std::span<const cplx> coeffs, std::span<const double> xis,
                      double half_length, std::span<const double> points, std::span<double> out) {
  const double scale = 1.0 / (2.0 * half_length);
  for (std::size_t i = 0; i < points.size(); ++i) out[i] = trig_point(coeffs, xis, scale, points[i]);
}

void trig_eval_omp(std::span<const cplx> coeffs, std::span<const double> xis, double half_length,
                   std::span<const double> points, std::span<double> out) {
  const double scale = 1.0 / (2.0 * half_length);
  const long long m = static_cast<long long>(points.size());
#pragma omp parallel for schedule(static)
  for (long long i = 0; i < m; ++i) out[i] = trig_point(coeffs, xis, scale, points[i]);
}

}  // namespace fbbm::kernels
