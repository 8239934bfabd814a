#pragma once

namespace fbbm {

/// Hurwitz zeta sum_{m>=0} (m + q)^(-s), s > 1, q > 0, by Euler-Maclaurin
/// after twelve explicit terms.
double hurwitz_zeta(double s, double q);

}  // namespace fbbm
