#pragma once

#include <functional>
#include <vector>

#include "alphapred/common.hpp"

namespace alphapred {

// Adaptive Gauss-Kronrod (G7,K15) integration of f over [a, b].
//
// lower_exponent p declares an integrable power-law singularity f ~ (x-a)^p,
// p > -1, at the lower endpoint; it is removed exactly by the substitution
// x = a + u^{1/(1+p)} before integrating. The returned Estimate carries the
// accumulated Kronrod error bound in `error` and the evaluation count in `n`.
// Throws numerical_error if the subdivision budget is exhausted before
// |error| <= rel_tol * |value| + 1e-300.
Estimate adaptive_quad(const std::function<double(double)>& f, double a, double b,
                       double rel_tol, double lower_exponent = 0.0);

// Nodes and weights of the n-point Gauss-Legendre rule on [-1, 1],
// computed by Newton iteration and cached per order.
struct GaussLegendre {
    std::vector<double> node;
    std::vector<double> weight;
};
const GaussLegendre& gauss_legendre(int n);

}  // namespace alphapred
