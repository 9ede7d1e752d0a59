#include "alphapred/marginal.hpp"

#include <cmath>

#include "alphapred/problem.hpp"
#include "alphapred/special_functions.hpp"

namespace alphapred {

namespace {

constexpr double kSmallC = 1e-8;  // Taylor branch threshold for c = z/(2v)

void check_args(double z, double v, int d) {
    if (z < 0.0) throw std::invalid_argument("harmonic marginal: z must be >= 0");
    if (!(v > 0.0)) throw std::invalid_argument("harmonic marginal: v must be > 0");
    if (d < 3) throw std::invalid_argument("harmonic marginal: d must be >= 3");
}

// int_0^1 lambda^{a+k-1} e^{-lambda c} dlambda for small c, four Taylor terms
double lambda_integral_taylor(double a, int k, double c) {
    const double a0 = a + k;
    return 1.0 / a0 - c / (a0 + 1.0) + c * c / (2.0 * (a0 + 2.0)) -
           c * c * c / (6.0 * (a0 + 3.0));
}

// b = 1 / (Gamma(d/2-1) 2^{d/2-1} v^{d/2-1})
double log_b(double a, double v) { return -std::lgamma(a) - a * std::log(2.0 * v); }

}  // namespace

double harmonic_marginal(double z, double v, int d) {
    check_args(z, v, d);
    const double a = 0.5 * d - 1.0;
    const double c = z / (2.0 * v);
    if (c <= kSmallC)
        return std::exp(log_b(a, v)) * lambda_integral_taylor(a, 0, c);
    return reg_lower_inc_gamma(a, c) / std::pow(z, a);
}

double harmonic_marginal_log(double z, double v, int d) {
    check_args(z, v, d);
    const double a = 0.5 * d - 1.0;
    const double c = z / (2.0 * v);
    if (c <= kSmallC)
        return log_b(a, v) + std::log(lambda_integral_taylor(a, 0, c));
    return std::log(reg_lower_inc_gamma(a, c)) - a * std::log(z);
}

double harmonic_marginal_dz(double z, double v, int d, int order) {
    check_args(z, v, d);
    if (order != 1 && order != 2)
        throw std::invalid_argument("harmonic_marginal_dz: order must be 1 or 2");
    const double a = 0.5 * d - 1.0;
    const double c = z / (2.0 * v);
    if (order == 1) {
        if (c <= kSmallC)
            return -std::exp(log_b(a, v)) / (2.0 * v) * lambda_integral_taylor(a, 1, c);
        return -a * reg_lower_inc_gamma(a + 1.0, c) / std::pow(z, a + 1.0);
    }
    if (c <= kSmallC)
        return std::exp(log_b(a, v)) / (4.0 * v * v) * lambda_integral_taylor(a, 2, c);
    return a * (a + 1.0) * reg_lower_inc_gamma(a + 2.0, c) / std::pow(z, a + 2.0);
}

double gaussian_prior_marginal(double z, double v, int d, double c, double base) {
    if (!(c > 0.0)) throw std::invalid_argument("gaussian_prior_marginal: c must be > 0");
    return std::exp(gaussian_logpdf_sq(z, v + c * base, d));
}

Marginal Marginal::uniform(int d) { return Marginal(Prior::uniform, d, 0.0, 0.0); }
Marginal Marginal::harmonic(int d) {
    if (d < 3) throw std::invalid_argument("Marginal::harmonic: d must be >= 3");
    return Marginal(Prior::harmonic, d, 0.0, 0.0);
}
Marginal Marginal::gaussian(int d, double c, double base) {
    if (!(c > 0.0 && base > 0.0))
        throw std::invalid_argument("Marginal::gaussian: c and base must be > 0");
    return Marginal(Prior::gaussian, d, c, base);
}

double Marginal::value(double z, double v) const {
    switch (prior_) {
        case Prior::uniform: return 1.0;
        case Prior::harmonic: return harmonic_marginal(z, v, d_);
        case Prior::gaussian: return gaussian_prior_marginal(z, v, d_, c_, base_);
    }
    return 0.0;
}

double Marginal::log_value(double z, double v) const {
    switch (prior_) {
        case Prior::uniform: return 0.0;
        case Prior::harmonic: return harmonic_marginal_log(z, v, d_);
        case Prior::gaussian: return gaussian_logpdf_sq(z, v + c_ * base_, d_);
    }
    return 0.0;
}

double Marginal::dz(double z, double v, int order) const {
    if (order != 1 && order != 2)
        throw std::invalid_argument("Marginal::dz: order must be 1 or 2");
    switch (prior_) {
        case Prior::uniform: return 0.0;
        case Prior::harmonic: return harmonic_marginal_dz(z, v, d_, order);
        case Prior::gaussian: {
            const double vv = v + c_ * base_;
            const double m = gaussian_prior_marginal(z, v, d_, c_, base_);
            return order == 1 ? -m / (2.0 * vv) : m / (4.0 * vv * vv);
        }
    }
    return 0.0;
}

double laplacian_m(const Marginal& m, double z, double v, int d) {
    if (!m.radial()) throw std::invalid_argument("laplacian_m: marginal must be radial");
    return 2.0 * d * m.dz(z, v, 1) + 4.0 * z * m.dz(z, v, 2);
}

double laplacian_m_power(const Marginal& m, double z, double v, int d, double a) {
    if (a == 0.0) throw std::invalid_argument("laplacian_m_power: a must be nonzero");
    const double val = m.value(z, v);
    const double lap = laplacian_m(m, z, v, d);
    const double mz = m.dz(z, v, 1);
    const double grad_log_sq = 4.0 * z * (mz / val) * (mz / val);
    return a * std::pow(val, a) * (lap / val + (a - 1.0) * grad_log_sq);
}

}  // namespace alphapred
