#include "alphapred/radial.hpp"

#include <algorithm>
#include <cmath>

#include "alphapred/quadrature.hpp"

namespace alphapred {

double radial_laplacian(const RadialProfile& f, double r, int d, double h) {
    if (!(h > 0.0)) throw std::invalid_argument("radial_laplacian: h must be > 0");
    if (r < 0.0) throw std::invalid_argument("radial_laplacian: r must be >= 0");
    if (r == 0.0) {
        // symmetric limit: Delta f = d * f''(0) with f'(0) = 0
        const double f0 = f.value(0.0);
        const double fh = f.value(h);
        return d * 2.0 * (fh - f0) / (h * h);
    }
    // profiles are even in r; reflect when the stencil crosses the origin
    const double fp = f.value(r + h);
    const double fm = f.value(std::fabs(r - h));
    const double f0 = f.value(r);
    const double d2 = (fp - 2.0 * f0 + fm) / (h * h);
    const double d1 = (fp - fm) / (2.0 * h);
    return d2 + (d - 1) * d1 / r;
}

namespace {

// log of e^{-y} * (cosh y - sinh y / y), the scaled order-3/2 Bessel kernel
double log_scaled_g32(double y) {
    if (y <= 2.0) {
        // sum_{k>=1} y^{2k} * 2k / (2k+1)!
        double term = y * y / 3.0;
        double sum = term;
        const double y2 = y * y;
        for (int k = 2; k < 60; ++k) {
            term *= y2 / ((2.0 * k + 1.0) * (2.0 * k - 2.0));
            sum += term;
            if (term < 1e-17 * sum) break;
        }
        return std::log(sum) - y;
    }
    const double e2 = std::exp(-2.0 * y);
    return std::log(0.5 * (1.0 + e2) - 0.5 * (1.0 - e2) / y);
}

double lgamma_half(int k) { return std::lgamma(0.5 * k); }

// log f_{chi^2_k}(x)
double chisq_logpdf(double x, int k) {
    return (0.5 * k - 1.0) * std::log(x) - 0.5 * x - 0.5 * k * M_LN2 - lgamma_half(k);
}

}  // namespace

double noncentral_chisq_pdf(double x, int k, double delta) {
    if (x <= 0.0) return 0.0;
    if (delta <= 0.0) return std::exp(chisq_logpdf(x, k));
    const double half = 0.5 * delta;
    // joint mode of the Poisson(j; half) x chi^2_{k+2j}(x) term sequence
    const double p = 0.25 * delta * x;
    long j0 = std::lround(std::max(0.0, 0.5 * (-0.5 * k + std::sqrt(0.25 * k * k + 4.0 * p))));
    // consecutive-term ratio; elementary, so the sum avoids lgamma
    // cancellation for noncentralities far beyond 1e4
    auto up_ratio = [&](long j) {  // t_{j+1} / t_j
        return (half / (j + 1.0)) * ((0.5 * x) / (0.5 * k + j));
    };
    while (j0 > 0 && up_ratio(j0 - 1) < 1.0) --j0;
    while (up_ratio(j0) > 1.0) ++j0;

    const double t0 = -half + j0 * std::log(half) - std::lgamma(j0 + 1.0) +
                      chisq_logpdf(x, k + 2 * static_cast<int>(j0));
    double sum = 1.0;  // scaled by exp(-t0)
    double term = 1.0;
    for (long j = j0;; ++j) {
        term *= up_ratio(j);
        sum += term;
        if (term < 1e-18 * sum) break;
    }
    term = 1.0;
    for (long j = j0 - 1; j >= 0; --j) {
        term /= up_ratio(j);
        sum += term;
        if (term < 1e-18 * sum) break;
    }
    return std::exp(t0) * sum;
}

double noncentral_chi_logpdf(double r, double c, double t, int d) {
    if (d < 1) throw std::invalid_argument("noncentral_chi_logpdf: d must be >= 1");
    if (!(t > 0.0)) throw std::invalid_argument("noncentral_chi_logpdf: t must be > 0");
    if (c < 0.0) throw std::invalid_argument("noncentral_chi_logpdf: c must be >= 0");
    if (r <= 0.0) return -std::numeric_limits<double>::infinity();

    if (c == 0.0) {
        // central chi, scale t
        return (1.0 - 0.5 * d) * M_LN2 + (d - 1.0) * std::log(r / t) -
               0.5 * r * r / (t * t) - lgamma_half(d) - std::log(t);
    }

    const double x = (r / t) * (r / t);
    const double delta = (c / t) * (c / t);

    if (d == 3 || d == 5) {
        // f_ncx2(x; k, delta) = 0.5 e^{-(x+delta)/2} (x/delta)^{k/4-1/2} I_{k/2-1}(sqrt(delta x));
        // written with the scaled Bessel e^{-y} I(y) so the exponent becomes
        // -((r-c)/t)^2/2 exactly, with no large-argument cancellation
        const double y = std::sqrt(delta * x);
        const double nu_pow = 0.25 * d - 0.5;
        double log_bessel_scaled;  // log of e^{-y} I_{d/2-1}(y)
        if (d == 3) {
            // I_{1/2}(y) = sqrt(2/(pi y)) sinh(y)
            log_bessel_scaled = 0.5 * (std::log(2.0 / M_PI) - std::log(y)) +
                                std::log(-std::expm1(-2.0 * y)) - M_LN2;
        } else {
            log_bessel_scaled = 0.5 * (std::log(2.0 / M_PI) - std::log(y)) + log_scaled_g32(y);
        }
        const double zr = (r - c) / t;
        const double log_f = -M_LN2 - 0.5 * zr * zr +
                             nu_pow * (std::log(x) - std::log(delta)) + log_bessel_scaled;
        return std::log(2.0 * r / (t * t)) + log_f;
    }

    const double f = noncentral_chisq_pdf(x, d, delta);
    if (f <= 0.0) return -std::numeric_limits<double>::infinity();
    return std::log(2.0 * r / (t * t)) + std::log(f);
}

Estimate radial_expectation(const RadialProfile& g, double center_norm, double t,
                            int d, double rel_tol) {
    if (d < 1) throw std::invalid_argument("radial_expectation: d must be >= 1");
    if (t < 0.0) throw std::invalid_argument("radial_expectation: t must be >= 0");
    if (center_norm < 0.0)
        throw std::invalid_argument("radial_expectation: center_norm must be >= 0");
    if (t == 0.0) return Estimate{g.value(center_norm), 0.0, 1, 0};

    // ||u/t + Z|| is a 1-Lipschitz functional of Z: mass beyond +-16 of the
    // bulk is < 2 e^{-128}
    const double delta = (center_norm / t) * (center_norm / t);
    const double yc = std::sqrt(static_cast<double>(d) + delta);
    constexpr double kWindow = 16.0;
    const double r_lo = t * std::max(0.0, yc - kWindow);
    const double r_hi = t * (yc + kWindow);

    double shift = 0.0;
    if (g.log_value) {
        const double probe = g.log_value(t * yc);  // bulk of the chi mass
        if (std::isfinite(probe)) shift = probe;
    }

    auto integrand = [&](double r) {
        const double lp = noncentral_chi_logpdf(r, center_norm, t, d);
        if (g.log_value) {
            const double lg = g.log_value(r);
            return std::exp(lg - shift + lp);
        }
        return g.value(r) * std::exp(lp);
    };

    Estimate est = adaptive_quad(integrand, r_lo, r_hi, rel_tol);
    const double scale = std::exp(shift);
    est.value *= scale;
    est.error *= scale;
    return est;
}

PchipTable::PchipTable(std::vector<double> x, std::vector<double> y)
    : x_(std::move(x)), y_(std::move(y)) {
    const std::size_t n = x_.size();
    if (n < 2 || y_.size() != n)
        throw std::invalid_argument("PchipTable: need >= 2 nodes and matching sizes");
    for (std::size_t i = 1; i < n; ++i)
        if (!(x_[i] > x_[i - 1]))
            throw std::invalid_argument("PchipTable: nodes must be strictly increasing");

    std::vector<double> h(n - 1), slope(n - 1);
    for (std::size_t i = 0; i + 1 < n; ++i) {
        h[i] = x_[i + 1] - x_[i];
        slope[i] = (y_[i + 1] - y_[i]) / h[i];
    }
    m_.assign(n, 0.0);
    for (std::size_t i = 1; i + 1 < n; ++i) {
        if (slope[i - 1] * slope[i] <= 0.0) {
            m_[i] = 0.0;
        } else {
            const double w1 = 2.0 * h[i] + h[i - 1];
            const double w2 = h[i] + 2.0 * h[i - 1];
            m_[i] = (w1 + w2) / (w1 / slope[i - 1] + w2 / slope[i]);
        }
    }
    auto end_deriv = [](double h0, double h1, double s0, double s1) {
        double m = ((2.0 * h0 + h1) * s0 - h0 * s1) / (h0 + h1);
        if (m * s0 <= 0.0) return 0.0;
        if (std::fabs(m) > 3.0 * std::fabs(s0)) return 3.0 * s0;
        return m;
    };
    if (n == 2) {
        m_[0] = m_[1] = slope[0];
    } else {
        m_[0] = end_deriv(h[0], h[1], slope[0], slope[1]);
        m_[n - 1] = end_deriv(h[n - 2], h[n - 3], slope[n - 2], slope[n - 3]);
    }
}

double PchipTable::operator()(double x) const {
    if (x_.empty()) throw std::logic_error("PchipTable: empty table");
    if (x <= x_.front()) x = x_.front();
    if (x >= x_.back()) x = x_.back();
    const auto it = std::upper_bound(x_.begin(), x_.end(), x);
    const std::size_t i = std::min(x_.size() - 2, static_cast<std::size_t>(
                                                      std::max<std::ptrdiff_t>(0, it - x_.begin() - 1)));
    const double h = x_[i + 1] - x_[i];
    const double s = (x - x_[i]) / h;
    const double s2 = s * s, s3 = s2 * s;
    const double h00 = 2.0 * s3 - 3.0 * s2 + 1.0;
    const double h10 = s3 - 2.0 * s2 + s;
    const double h01 = -2.0 * s3 + 3.0 * s2;
    const double h11 = s3 - s2;
    return h00 * y_[i] + h10 * h * m_[i] + h01 * y_[i + 1] + h11 * h * m_[i + 1];
}

}  // namespace alphapred
