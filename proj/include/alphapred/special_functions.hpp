#pragma once

namespace alphapred {

// Regularized lower incomplete gamma function P(a, x) = gamma(a, x) / Gamma(a).
// Series expansion for x < a + 1, Lentz continued fraction for the upper tail
// otherwise. Relative error ~1e-14 over a <= 100, x <= 1e4.
double reg_lower_inc_gamma(double a, double x);

}  // namespace alphapred
