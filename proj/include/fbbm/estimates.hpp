#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "fbbm/evolution.hpp"
#include "fbbm/grid.hpp"

namespace fbbm {

/// Trigonometric series on [-L, L): c0 + sum_k amp_k cos(pi k x / L + phase_k).
/// Defined independently of the sampling grid so refinement studies compare
/// the same functions.
struct TrigSeries {
  double L = 0.0;
  double offset = 0.0;
  std::vector<int> modes;
  std::vector<double> amplitudes;
  std::vector<double> phases;

  double operator()(double x) const;
  double derivative(double x) const;
  Field sample(GridPtr grid) const;
};

/// Seeded random corpus of smooth fields f and smooth symbols g.
///
/// Instance i draws from its own generator seeded by (seed, i), so a corpus
/// of size m is a prefix of any larger corpus with the same seed.
struct TestCorpus {
  std::uint64_t seed = 0;
  double L = 16.0 * 3.141592653589793;
  int field_modes = 40;   // f uses lattice modes 1..field_modes
  int symbol_modes = 6;   // g uses lattice modes 1..symbol_modes
  std::vector<TrigSeries> fs;
  std::vector<TrigSeries> gs;
  std::vector<double> g_prime_inf;  // sup |g'|, sampled finely at generation

  std::size_t size() const { return fs.size(); }

  static TestCorpus generate(std::uint64_t seed, std::size_t size, double L = 16.0 * 3.141592653589793,
                             int field_modes = 40, int symbol_modes = 6);
};

/// ||A(g f) - g A f||_2 / (||g'||_inf ||f||_2).
double commutator_A_ratio(const Field& g, const Field& f, double alpha);
/// ||d^l [H, psi] d^m f||_2 / (||d^(l+m) psi||_inf ||f||_2), l + m <= 2.
double calderon_ratio(const Field& psi, const Field& f, int l, int m);
/// ||D^a [D^b, psi] D^(1-a-b) f||_2 / (||psi'||_inf ||f||_2),
/// a in [0, 1), b in (0, 1), a + b <= 1.
double dalpha_commutator_ratio(const Field& psi, const Field& f, double a, double b);

enum class Lemma { CommutatorA, Calderon, DAlphaCommutator };
std::string to_string(Lemma lemma);

struct LemmaCase {
  Lemma lemma = Lemma::CommutatorA;
  double alpha = 0.5;  // CommutatorA: alpha; DAlphaCommutator: a
  double beta = 0.5;   // DAlphaCommutator: b
  int l = 0;           // Calderon
  int m = 1;
  std::string label() const;
};

double evaluate_case(const LemmaCase& c, const Field& g, const Field& f);

struct RatioReport {
  LemmaCase lemma_case;
  std::uint64_t seed = 0;
  std::size_t corpus_size = 0;
  std::size_t n = 0;
  std::vector<double> ratios;      // at n
  std::vector<double> ratios_2n;   // at 2n
  double corpus_max = 0.0;
  double corpus_max_2n = 0.0;
  double refinement_factor = 0.0;  // corpus_max_2n / corpus_max
  double half_corpus_max = 0.0;    // max over the first half of the corpus
  double size_factor = 0.0;        // corpus_max / half_corpus_max
  bool stable() const;
};

/// Evaluates one lemma over the corpus at n and 2n; instances run in parallel.
RatioReport ratio_study(const LemmaCase& c, const TestCorpus& corpus, std::size_t n);

struct GrowthReport {
  double alpha = 0.0;
  double r = 0.0;
  std::vector<double> times;
  std::vector<double> norms;        // ||<x>^r e^{tA} phi||_2
  double initial_norm = 0.0;        // ||<x>^r phi||_2
  double slope = 0.0;
  double r_squared = 0.0;
  double bound = 0.0;               // ceil(r) + 0.2
  double max_tail_fraction = 0.0;   // sqrt(int_{|x|>0.8L} u^2) / ||u||_2
  bool within_bound() const { return slope <= bound; }
};

/// Least-squares slope of log ||<x>^r e^{tA} phi||_2 against log t.
/// Throws Error if any propagated state carries relative L2 mass above
/// 1e-8 in |x| > 0.8L.
GrowthReport group_weighted_growth(const Field& phi, double alpha, double r,
                                   const std::vector<double>& times);

/// Relative L2 mass of u beyond |x| > frac * L.
double tail_fraction(const Field& u, double frac = 0.8);

/// R = uhat(0, t1) + (1/(t2 - t1)) int_{t1}^{t2} int u^k dx dtau, trapezoid in
/// tau over the recorded diagnostics, interpolated linearly at t1 and t2.
double ucp_residual(const Trajectory& traj, double t1, double t2, int k);

}  // namespace fbbm
