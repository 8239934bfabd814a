#include "fbbm/special.hpp"

#include <cmath>

#include "fbbm/error.hpp"

namespace fbbm {

double hurwitz_zeta(double s, double q) {
  if (!(s > 1.0) || !(q > 0.0)) throw DomainError("hurwitz_zeta: need s > 1, q > 0");
  constexpr int kTerms = 12;
  double acc = 0.0;
  for (int m = 0; m < kTerms; ++m) acc += std::pow(m + q, -s);
  const double a = kTerms + q;
  acc += std::pow(a, 1.0 - s) / (s - 1.0) + 0.5 * std::pow(a, -s);
  // Euler-Maclaurin corrections B_2j / (2j)! * s(s+1)...(s+2j-2) * a^(-s-2j+1)
  static constexpr double kB[] = {1.0 / 6, -1.0 / 30, 1.0 / 42, -1.0 / 30, 5.0 / 66, -691.0 / 2730};
  double rising = s;  // s (s+1) ... (s + 2j - 2)
  double fact = 2.0;  // (2j)!
  for (int j = 1; j <= 6; ++j) {
    acc += kB[j - 1] / fact * rising * std::pow(a, -s - 2 * j + 1);
    rising *= (s + 2 * j - 1) * (s + 2 * j);
    fact *= (2 * j + 1) * (2 * j + 2);
  }
  return acc;
}

}  // namespace fbbm
