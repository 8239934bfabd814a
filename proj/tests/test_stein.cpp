#include <doctest.h>

#include <cmath>

#include "fbbm/error.hpp"
#include "fbbm/stein.hpp"

using namespace fbbm;

TEST_CASE("cutoff is smooth, even and a partition of its plateau") {
  CutoffSpec c;
  CHECK(c.value(0.0) == 1.0);
  CHECK(c.value(1.0) == 1.0);
  CHECK(c.value(2.0) == 0.0);
  CHECK(c.value(-3.0) == 0.0);
  CHECK(c.value(1.5) == doctest::Approx(0.5).epsilon(1e-14));
  for (double x = 1.01; x < 2.0; x += 0.07) {
    CHECK(c.value(x) == c.value(-x));
    CHECK(c.derivative(x) == -c.derivative(-x));
    const double h = 1e-6;
    const double fd = (c.value(x + h) - c.value(x - h)) / (2 * h);
    CHECK(c.derivative(x) == doctest::Approx(fd).epsilon(1e-6));
    CHECK(c.derivative(x) <= 0.0);
  }
}

TEST_CASE("pointwise Stein function of the cutoff at zero") {
  // psi = 1 on [-1, 1]: D^theta psi(0)^2 = 2 int_1^2 (1 - psi)^2 t^(-1-2 theta) + 2 int_2^inf t^(-1-2 theta)
  auto g = cutoff_function({});
  const double theta = 0.3;
  const double got = stein_pointwise_sq(g, 0.0, theta);
  double inner = 0.0;
  const int m = 200000;
  for (int i = 0; i < m; ++i) {
    const double t = 1.0 + (i + 0.5) / m;
    const double d = 1.0 - CutoffSpec{}.value(t);
    inner += d * d * std::pow(t, -1 - 2 * theta) / m;
  }
  const double want = 2.0 * inner + 2.0 * std::pow(2.0, -2 * theta) / (2 * theta);
  CHECK(got == doctest::Approx(want).epsilon(1e-8));
}

TEST_CASE("Stein function of a pure power at zero") {
  // f(0) = 0, so D^theta f(0)^2 = 2 int_0^2 t^(2 alpha - 1 - 2 theta) psi(t)^2 dt
  const double alpha = 0.75, theta = 0.25;
  auto g = power_times_cutoff(alpha, {});
  double outer = 0.0;
  const int m = 200000;
  for (int i = 0; i < m; ++i) {
    const double t = 1.0 + (i + 0.5) / m;
    const double p = CutoffSpec{}.value(t);
    outer += std::pow(t, 2 * alpha - 1 - 2 * theta) * p * p / m;
  }
  const double want = 2.0 / (2 * alpha - 2 * theta) + 2.0 * outer;
  CHECK(stein_pointwise_sq(g, 0.0, theta) == doctest::Approx(want).epsilon(1e-8));
}

TEST_CASE("Stein asymptotic exponents") {
  struct Pair {
    double alpha, theta;
  };
  for (auto p : {Pair{0.5, 0.25}, Pair{0.75, 0.5}, Pair{0.25, 0.125}}) {
    const auto r = stein_asymptotics(p.alpha, p.theta);
    CAPTURE(p.alpha);
    CAPTURE(p.theta);
    CHECK(std::abs(r.p_small - (p.alpha - p.theta)) <= 0.1);
    CHECK(std::abs(r.p_large + 0.5 + p.theta) <= 0.1);
    CHECK(r.plateau > 0.0);
    CHECK_FALSE(r.small_inconclusive);
    CHECK_FALSE(r.large_inconclusive);
  }
  CHECK(stein_asymptotics(0.5, 0.25).log_corrected);
  CHECK_FALSE(stein_asymptotics(0.75, 0.5, {}, 10).log_corrected);
}

TEST_CASE("alpha below theta fits the raw singular branch") {
  const auto r = stein_asymptotics(0.25, 0.5, {}, 10);
  CHECK(r.plateau == 0.0);
  CHECK(std::abs(r.p_small - (0.25 - 0.5)) <= 0.1);
}

TEST_CASE("alpha == theta is rejected") {
  CHECK_THROWS_AS(stein_asymptotics(0.5, 0.5), DomainError);
  CHECK_THROWS_AS(stein_asymptotics(0.5, 1.0), DomainError);
  CHECK_THROWS_AS(stein_asymptotics(2.5, 0.5), DomainError);
}

TEST_CASE("L2 membership threshold theta = alpha + 1/2") {
  const double alpha = 0.25;
  const auto below = stein_l2_membership(alpha, alpha + 0.4);
  const auto above = stein_l2_membership(alpha, alpha + 0.6);
  CHECK(below.cauchy);
  CHECK_FALSE(above.cauchy);
  // D^2 ~ eta^(2 alpha - 2 theta), so decade integrals scale by 10^(1 + 2 alpha - 2 theta)
  CHECK(below.fitted_exponent == doctest::Approx(0.2).epsilon(0.25));
  CHECK(above.fitted_exponent == doctest::Approx(-0.2).epsilon(0.25));
  CHECK_THROWS_AS(stein_l2_membership(alpha, 0.5, {}, 2), DomainError);
}

TEST_CASE("bbm symbol bound is finite and stable") {
  const auto r = bbm_symbol_stein_bound(0.5, 0.25, {}, 10);
  CHECK(std::isfinite(r.constant));
  CHECK(r.constant > 0.0);
  CHECK(r.refinement_factor <= 2.0);
  CHECK(r.refinement_factor >= 1.0 - 1e-12);
  // 1/(1+|xi|^alpha) <= 1, so the quotient never needs a large constant at eta = 10
  auto lhs = bbm_symbol_times_cutoff(0.5, {});
  auto psi = cutoff_function({});
  CHECK(stein_pointwise(lhs, 10.0, 0.25) <= 2.0 * stein_pointwise(psi, 10.0, 0.25));
}

TEST_CASE("negative power bound") {
  const auto r = negative_power_bound(0.25, 0.25, {}, 10);
  CHECK(std::isfinite(r.constant));
  CHECK(r.refinement_factor <= 2.0);
  CHECK_THROWS_AS(negative_power_bound(0.5, 0.25), DomainError);
  CHECK_THROWS_AS(negative_power_bound(0.0, 0.25), DomainError);
}

TEST_CASE("probe sweep is identical serial and parallel") {
  auto g = power_times_cutoff(0.5, {});
  std::vector<double> etas;
  for (int i = 0; i < 40; ++i) etas.push_back(-3.0 + 0.15 * i);
  const auto a = stein_probe_sweep(g, etas, 0.3, kernels::Exec::Serial);
  const auto b = stein_probe_sweep(g, etas, 0.3, kernels::Exec::Parallel);
  CHECK(a == b);
  for (std::size_t i = 0; i < etas.size(); ++i) {
    CHECK(std::isfinite(a[i]));
    // even function, even Stein function
    CHECK(stein_pointwise(g, -etas[i], 0.3) == doctest::Approx(a[i]).epsilon(1e-9));
  }
  CHECK_THROWS_AS(stein_pointwise(g, 0.1, 0.0), DomainError);
  CHECK_THROWS_AS(stein_pointwise(g, INFINITY, 0.3), DomainError);
}
