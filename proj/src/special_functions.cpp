#include "alphapred/special_functions.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "alphapred/common.hpp"

namespace alphapred {

namespace {

// lower series: P(a,x) = x^a e^{-x} / Gamma(a+1) * sum_k x^k / ((a+1)...(a+k))
double gamma_p_series(double a, double x) {
    double ap = a;
    double del = 1.0 / a;
    double sum = del;
    for (int i = 0; i < 500; ++i) {
        ap += 1.0;
        del *= x / ap;
        sum += del;
        if (std::fabs(del) < std::fabs(sum) * 1e-17)
            return sum * std::exp(-x + a * std::log(x) - std::lgamma(a));
    }
    throw numerical_error("reg_lower_inc_gamma: series did not converge");
}

// upper continued fraction (modified Lentz): Q(a,x)
double gamma_q_cf(double a, double x) {
    constexpr double kFpMin = std::numeric_limits<double>::min() / 1e-30;
    double b = x + 1.0 - a;
    double c = 1.0 / kFpMin;
    double d = 1.0 / b;
    double h = d;
    for (int i = 1; i <= 500; ++i) {
        const double an = -i * (i - a);
        b += 2.0;
        d = an * d + b;
        if (std::fabs(d) < kFpMin) d = kFpMin;
        c = b + an / c;
        if (std::fabs(c) < kFpMin) c = kFpMin;
        d = 1.0 / d;
        const double del = d * c;
        h *= del;
        if (std::fabs(del - 1.0) < 1e-16)
            return std::exp(-x + a * std::log(x) - std::lgamma(a)) * h;
    }
    throw numerical_error("reg_lower_inc_gamma: continued fraction did not converge");
}

}  // namespace

double reg_lower_inc_gamma(double a, double x) {
    if (!(a > 0.0)) throw std::invalid_argument("reg_lower_inc_gamma: a must be > 0");
    if (x < 0.0) throw std::invalid_argument("reg_lower_inc_gamma: x must be >= 0");
    if (x == 0.0) return 0.0;
    if (x < a + 1.0) return gamma_p_series(a, x);
    return 1.0 - gamma_q_cf(a, x);
}

}  // namespace alphapred
