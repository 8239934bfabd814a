#include "fbbm/grid.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <mutex>
#include <numbers>
#include <string>

#include "fbbm/error.hpp"

namespace fbbm {

namespace {

// The FFTW planner is not thread-safe; execution on new arrays is.
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

bool is_power_of_two(std::size_t n) { return n != 0 && (n & (n - 1)) == 0; }

}  // namespace

class FftPlan {
 public:
  explicit FftPlan(std::size_t n) : n_(n) {
    std::lock_guard<std::mutex> lock(planner_mutex());
    auto* buf = fftw_alloc_complex(n);
    const int ni = static_cast<int>(n);
    const unsigned flags = FFTW_ESTIMATE | FFTW_UNALIGNED;
    fwd_ = fftw_plan_dft_1d(ni, buf, buf, FFTW_FORWARD, flags);
    bwd_ = fftw_plan_dft_1d(ni, buf, buf, FFTW_BACKWARD, flags);
    fftw_free(buf);
  }
  ~FftPlan() {
    std::lock_guard<std::mutex> lock(planner_mutex());
    fftw_destroy_plan(fwd_);
    fftw_destroy_plan(bwd_);
  }
  FftPlan(const FftPlan&) = delete;
  FftPlan& operator=(const FftPlan&) = delete;

  void run_forward(cplx* data) const { exec(fwd_, data); }
  void run_backward(cplx* data) const { exec(bwd_, data); }

 private:
  static void exec(fftw_plan p, cplx* data) {
    auto* d = reinterpret_cast<fftw_complex*>(data);
    fftw_execute_dft(p, d, d);
  }

  std::size_t n_;
  fftw_plan fwd_;
  fftw_plan bwd_;
};

SpectralGrid::SpectralGrid(std::size_t n, double half_length)
    : n_(n),
      half_length_(half_length),
      dx_(2.0 * half_length / static_cast<double>(n)),
      dxi_(std::numbers::pi / half_length),
      xs_(n),
      xis_(n),
      plan_(std::make_unique<FftPlan>(n)) {
  for (std::size_t j = 0; j < n; ++j) {
    xs_[j] = -half_length + static_cast<double>(j) * dx_;
    const auto k = static_cast<long long>(j);
    const long long signed_k = j < n / 2 ? k : k - static_cast<long long>(n);
    xis_[j] = dxi_ * static_cast<double>(signed_k);
  }
}

SpectralGrid::~SpectralGrid() = default;

void SpectralGrid::forward(std::span<const cplx> in, std::span<cplx> out) const {
  if (in.size() != n_ || out.size() != n_) throw GridError("forward: length mismatch");
  if (in.data() != out.data()) std::copy(in.begin(), in.end(), out.begin());
  plan_->run_forward(out.data());
  // exp(-i xi_k x_j) = (-1)^k exp(-2 pi i k j / n) with x_0 = -L.
  for (std::size_t k = 0; k < n_; ++k) out[k] *= (k % 2 == 0 ? dx_ : -dx_);
}

void SpectralGrid::inverse(std::span<const cplx> in, std::span<cplx> out) const {
  if (in.size() != n_ || out.size() != n_) throw GridError("inverse: length mismatch");
  const double scale = 1.0 / (2.0 * half_length_);
  for (std::size_t k = 0; k < n_; ++k) out[k] = in[k] * (k % 2 == 0 ? scale : -scale);
  plan_->run_backward(out.data());
}

GridPtr make_grid(std::size_t n, double half_length) {
  if (!is_power_of_two(n) || n < 16)
    throw GridError("grid size must be a power of two >= 16, got " + std::to_string(n));
  if (!(half_length > 0.0) || !std::isfinite(half_length))
    throw GridError("grid half-length must be positive and finite");
  return std::make_shared<const SpectralGrid>(n, half_length);
}

Field::Field(GridPtr g) : grid(std::move(g)), values(grid ? grid->n() : 0, 0.0) {}

Field::Field(GridPtr g, std::vector<double> v) : grid(std::move(g)), values(std::move(v)) {
  if (!grid || values.size() != grid->n()) throw GridError("field length does not match grid");
}

Spectrum::Spectrum(GridPtr g) : grid(std::move(g)), coeffs(grid ? grid->n() : 0) {}

Spectrum::Spectrum(GridPtr g, std::vector<cplx> c) : grid(std::move(g)), coeffs(std::move(c)) {
  if (!grid || coeffs.size() != grid->n()) throw GridError("spectrum length does not match grid");
}

void require_same_grid(const GridPtr& a, const GridPtr& b, const char* what) {
  if (!a || !b || a.get() != b.get()) throw GridError(std::string(what) + ": mismatched grid");
}

Spectrum forward(const Field& field) {
  if (!field.grid || field.values.size() != field.grid->n())
    throw GridError("forward: field does not match its grid");
  Spectrum out(field.grid);
  for (std::size_t j = 0; j < field.values.size(); ++j) out.coeffs[j] = field.values[j];
  field.grid->forward(out.coeffs, out.coeffs);
  return out;
}

std::vector<cplx> inverse_complex(const Spectrum& spec) {
  if (!spec.grid || spec.coeffs.size() != spec.grid->n())
    throw GridError("inverse: spectrum does not match its grid");
  std::vector<cplx> out(spec.coeffs.size());
  spec.grid->inverse(spec.coeffs, out);
  return out;
}

Field inverse(const Spectrum& spec) {
  auto z = inverse_complex(spec);
  Field out(spec.grid);
  for (std::size_t j = 0; j < z.size(); ++j) out.values[j] = z[j].real();
  return out;
}

double integral(const Field& u) {
  double s = 0.0;
  for (double v : u.values) s += v;
  return s * u.grid->dx();
}

double l2_norm(const Field& u) {
  double s = 0.0;
  for (double v : u.values) s += v * v;
  return std::sqrt(s * u.grid->dx());
}

double linf_norm(const Field& u) {
  double m = 0.0;
  for (double v : u.values) m = std::max(m, std::abs(v));
  return m;
}

double spectral_l2_squared(const Spectrum& s) {
  double acc = 0.0;
  for (const auto& c : s.coeffs) acc += std::norm(c);
  return acc * s.grid->dxi() / (2.0 * std::numbers::pi);
}

namespace {
template <class Op>
Field zip(const Field& a, const Field& b, Op op, const char* what) {
  require_same_grid(a.grid, b.grid, what);
  Field out(a.grid);
  for (std::size_t j = 0; j < a.values.size(); ++j) out.values[j] = op(a.values[j], b.values[j]);
  return out;
}
}  // namespace

Field operator+(const Field& a, const Field& b) {
  return zip(a, b, [](double x, double y) { return x + y; }, "operator+");
}
Field operator-(const Field& a, const Field& b) {
  return zip(a, b, [](double x, double y) { return x - y; }, "operator-");
}
Field operator*(const Field& a, const Field& b) {
  return zip(a, b, [](double x, double y) { return x * y; }, "operator*");
}
Field operator*(double c, const Field& a) {
  Field out(a.grid);
  for (std::size_t j = 0; j < a.values.size(); ++j) out.values[j] = c * a.values[j];
  return out;
}

}  // namespace fbbm
