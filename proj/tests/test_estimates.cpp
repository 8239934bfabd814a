#include <doctest.h>

#include <cmath>

#include "fbbm/diagnostics.hpp"
#include "fbbm/error.hpp"
#include "fbbm/estimates.hpp"
#include "fbbm/multiplier.hpp"

using namespace fbbm;

namespace {

constexpr double pi = 3.141592653589793;

bool same_series(const TrigSeries& a, const TrigSeries& b) {
  return a.L == b.L && a.offset == b.offset && a.modes == b.modes && a.amplitudes == b.amplitudes &&
         a.phases == b.phases;
}

// real symbol of A on cos: A cos(w x) = m(w) sin(w x)
double a_mult(double w, double alpha) { return w / (1.0 + std::pow(std::abs(w), alpha)); }

}  // namespace

TEST_CASE("corpus is deterministic and prefix-stable") {
  const auto a = TestCorpus::generate(7, 10);
  const auto b = TestCorpus::generate(7, 10);
  const auto c = TestCorpus::generate(7, 4);
  const auto d = TestCorpus::generate(8, 4);
  REQUIRE(a.size() == 10);
  for (std::size_t i = 0; i < a.size(); ++i) {
    CHECK(same_series(a.fs[i], b.fs[i]));
    CHECK(same_series(a.gs[i], b.gs[i]));
    CHECK(a.g_prime_inf[i] == b.g_prime_inf[i]);
  }
  for (std::size_t i = 0; i < c.size(); ++i) {
    CHECK(same_series(a.fs[i], c.fs[i]));
    CHECK(same_series(a.gs[i], c.gs[i]));
  }
  CHECK_FALSE(same_series(a.fs[0], d.fs[0]));
  CHECK_THROWS_AS(TestCorpus::generate(1, 0), DomainError);
}

TEST_CASE("trig series derivative and grid mismatch") {
  const auto c = TestCorpus::generate(3, 1);
  const auto& f = c.fs[0];
  for (double x : {-3.0, 0.0, 1.7, 40.0}) {
    const double h = 1e-5;
    CHECK(f.derivative(x) == doctest::Approx((f(x + h) - f(x - h)) / (2 * h)).epsilon(1e-6));
  }
  CHECK(f(-c.L) == doctest::Approx(f(c.L)).epsilon(1e-12));
  CHECK_THROWS_AS(f.sample(make_grid(256, 10.0)), GridError);
}

TEST_CASE("commutator with A matches the two-mode closed form") {
  // L = 16 pi puts 1/8 and 2 on the lattice
  auto g = make_grid(1024, 16 * pi);
  const double k = 2.0, eta = 0.125;
  auto f = sample(g, [&](double x) { return std::cos(k * x); });
  auto s = sample(g, [&](double x) { return std::sin(eta * x) / eta; });
  for (double alpha : {0.25, 0.5, 1.0, 2.0}) {
    const double mp = a_mult(k + eta, alpha) - a_mult(k, alpha);
    const double mm = a_mult(k - eta, alpha) - a_mult(k, alpha);
    const double want = std::sqrt(mp * mp + mm * mm) / (2 * eta);
    CHECK(commutator_A_ratio(s, f, alpha) == doctest::Approx(want).epsilon(1e-10));
  }
}

TEST_CASE("constant symbols give exactly zero") {
  auto g = make_grid(512, 16 * pi);
  const auto c = TestCorpus::generate(11, 3);
  auto one = sample(g, [](double) { return 3.0; });
  for (std::size_t i = 0; i < c.size(); ++i) {
    const auto f = c.fs[i].sample(g);
    CHECK(commutator_A_ratio(one, f, 0.5) == 0.0);
    CHECK(calderon_ratio(one, f, 0, 1) == 0.0);
    CHECK(calderon_ratio(one, f, 1, 1) == 0.0);
    CHECK(dalpha_commutator_ratio(one, f, 0.25, 0.5) == 0.0);
  }
  CHECK_THROWS_AS(commutator_A_ratio(one, Field(g), 0.5), DomainError);
}

TEST_CASE("Hilbert commutator vanishes when no frequency changes sign") {
  auto g = make_grid(512, 16 * pi);
  auto psi = sample(g, [](double x) { return std::cos(x / 8); });
  auto f = sample(g, [](double x) { return std::cos(2 * x); });
  CHECK(calderon_ratio(psi, f, 0, 1) <= 1e-11);
  CHECK(calderon_ratio(psi, f, 1, 1) <= 1e-11);
  auto low = sample(g, [](double x) { return std::cos(x / 16); });
  CHECK(calderon_ratio(psi, low, 0, 1) > 0.1);
}

TEST_CASE("Calderon ratios on a periodic tanh symbol stay bounded") {
  auto psi_f = [](int n) {
    return sample(make_grid(n, 16 * pi), [](double x) { return std::tanh(2 * std::sin(x / 16)); });
  };
  const auto c = TestCorpus::generate(5, 6);
  for (int l = 0; l <= 1; ++l) {
    double prev = 0.0;
    for (int n : {1024, 2048}) {
      auto psi = psi_f(n);
      double worst = 0.0;
      for (std::size_t i = 0; i < c.size(); ++i)
        worst = std::max(worst, calderon_ratio(psi, c.fs[i].sample(psi.grid), l, 1));
      CHECK(std::isfinite(worst));
      CHECK(worst < 10.0);
      if (prev > 0.0) CHECK(worst / prev == doctest::Approx(1.0).epsilon(1e-6));
      prev = worst;
    }
  }
  auto g = make_grid(256, 16 * pi);
  CHECK_THROWS_AS(calderon_ratio(Field(g), Field(g), 2, 1), DomainError);
  CHECK_THROWS_AS(calderon_ratio(Field(g), Field(g), -1, 1), DomainError);
  CHECK_THROWS_AS(calderon_ratio(Field(g), Field(make_grid(512, 16 * pi)), 0, 1), GridError);
}

TEST_CASE("fractional commutator matches the two-mode closed form") {
  auto g = make_grid(1024, 16 * pi);
  const double k = 2.0, eta = 0.125;
  auto f = sample(g, [&](double x) { return std::cos(k * x); });
  auto psi = sample(g, [&](double x) { return std::cos(eta * x); });
  struct AB {
    double a, b;
  };
  for (auto p : {AB{0.0, 0.5}, AB{0.25, 0.5}, AB{0.5, 0.5}, AB{0.0, 0.99}}) {
    const double c = 1.0 - p.a - p.b;
    const double up = std::pow(k + eta, p.a) * (std::pow(k + eta, p.b) - std::pow(k, p.b));
    const double dn = std::pow(k - eta, p.a) * (std::pow(k - eta, p.b) - std::pow(k, p.b));
    const double want = std::pow(k, c) / (2 * eta) * std::sqrt(up * up + dn * dn);
    CAPTURE(p.a);
    CAPTURE(p.b);
    CHECK(dalpha_commutator_ratio(psi, f, p.a, p.b) == doctest::Approx(want).epsilon(1e-10));
  }
  CHECK_THROWS_AS(dalpha_commutator_ratio(psi, f, 1.0, 0.5), DomainError);
  CHECK_THROWS_AS(dalpha_commutator_ratio(psi, f, 0.0, 1.0), DomainError);
  CHECK_THROWS_AS(dalpha_commutator_ratio(psi, f, 0.0, 0.0), DomainError);
  CHECK_THROWS_AS(dalpha_commutator_ratio(psi, f, 0.6, 0.6), DomainError);
}

TEST_CASE("ratio study is stable on a small corpus") {
  const auto c = TestCorpus::generate(20240607, 8);
  for (const auto& lc : {LemmaCase{Lemma::CommutatorA, 0.5, 0.5, 0, 1},
                         LemmaCase{Lemma::Calderon, 0.5, 0.5, 1, 1},
                         LemmaCase{Lemma::DAlphaCommutator, 0.25, 0.5, 0, 1}}) {
    const auto r = ratio_study(lc, c, 1024);
    CAPTURE(lc.label());
    CHECK(r.stable());
    CHECK(r.ratios.size() == 8);
    CHECK(r.refinement_factor == doctest::Approx(1.0).epsilon(1e-3));
    CHECK(r.corpus_max >= r.half_corpus_max);
  }
}

TEST_CASE("weighted growth of the linear group") {
  auto g = make_grid(2048, 200.0);
  auto phi = sample(g, [](double x) { return std::exp(-x * x); });
  std::vector<double> times;
  for (int t = 1; t <= 20; ++t) times.push_back(t);

  const auto r0 = group_weighted_growth(phi, 2.0, 0.0, times);
  CHECK(std::abs(r0.slope) <= 1e-10);
  for (double v : r0.norms) CHECK(v == doctest::Approx(r0.initial_norm).epsilon(1e-12));

  const auto r1 = group_weighted_growth(phi, 2.0, 1.0, times);
  CHECK(r1.within_bound());
  CHECK(r1.slope > 0.0);
  CHECK(r1.max_tail_fraction <= 1e-8);

  const auto early = group_weighted_growth(phi, 2.0, 1.0, {1e-4, 2e-4});
  CHECK(early.norms[0] == doctest::Approx(early.initial_norm).epsilon(1e-6));

  CHECK_THROWS_AS(group_weighted_growth(phi, 2.0, 3.5, times), DomainError);
  CHECK_THROWS_AS(group_weighted_growth(phi, 2.0, 1.0, {0.0, 1.0}), DomainError);
  CHECK_THROWS_AS(group_weighted_growth(phi, 2.0, 1.0, {1.0}), DomainError);
}

TEST_CASE("non-smooth symbol on a small box is flagged as contaminated") {
  auto g = make_grid(2048, 100.0);
  auto phi = sample(g, [](double x) { return std::exp(-x * x); });
  CHECK_THROWS_AS(group_weighted_growth(phi, 0.5, 1.0, {10.0, 20.0, 40.0}), Error);
}

TEST_CASE("tail fraction") {
  auto g = make_grid(256, 10.0);
  auto flat = sample(g, [](double) { return 1.0; });
  CHECK(tail_fraction(flat) == doctest::Approx(std::sqrt(0.2)).epsilon(0.02));
  CHECK(tail_fraction(Field(g)) == 0.0);
}

namespace {

Trajectory ucp_run(double amplitude, int k, double shift = 0.0) {
  EvolveConfig cfg;
  cfg.alpha = 0.5;
  cfg.k = k;
  cfg.n = 1024;
  cfg.L = 50.0;
  cfg.dt = 0.01;
  cfg.T = 2.0;
  cfg.record_every = 5;
  auto g = make_grid(cfg.n, cfg.L);
  auto phi = sample(g, [&](double x) { return amplitude * std::exp(-(x - shift) * (x - shift)); });
  return run(cfg, phi);
}

}  // namespace

TEST_CASE("UCP residual") {
  const auto zero = ucp_run(0.0, 2);
  CHECK(ucp_residual(zero, 0.5, 1.5, 2) == 0.0);

  const auto pos = ucp_run(0.5, 2);
  const double m0 = pos.diagnostics.records.front().mass;
  CHECK(m0 == doctest::Approx(0.5 * std::sqrt(pi)).epsilon(1e-12));
  const double R = ucp_residual(pos, 0.5, 1.5, 2);
  CHECK(R >= m0);
  CHECK(R > m0 + 0.1);

  // a lattice translation of the data leaves R unchanged
  const auto moved = ucp_run(0.5, 2, 10 * 100.0 / 1024);
  CHECK(ucp_residual(moved, 0.5, 1.5, 2) == doctest::Approx(R).epsilon(1e-10));

  // odd power from snapshots of an even-k run
  const double r3 = ucp_residual(pos, 0.5, 1.5, 3);
  CHECK(std::isfinite(r3));
  CHECK(r3 > m0);

  CHECK_THROWS_AS(ucp_residual(pos, 1.5, 0.5, 2), DomainError);
  CHECK_THROWS_AS(ucp_residual(pos, 0.5, 5.0, 2), DomainError);
}
