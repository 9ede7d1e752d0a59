#pragma once

#include <functional>
#include <optional>
#include <vector>

#include "alphapred/common.hpp"

namespace alphapred {

// A function of the radius r >= 0, assumed twice differentiable (even
// extension about r = 0). Analytic radial derivatives and a log-domain
// evaluator are optional; routines use them when present.
struct RadialProfile {
    std::function<double(double)> value;
    std::function<double(double)> log_value;  // optional, for strictly positive profiles
    std::function<double(double)> d1;         // optional analytic f'
    std::function<double(double)> d2;         // optional analytic f''

    explicit RadialProfile(std::function<double(double)> f) : value(std::move(f)) {}
    RadialProfile(std::function<double(double)> f, std::function<double(double)> lf)
        : value(std::move(f)), log_value(std::move(lf)) {}

    double operator()(double r) const { return value(r); }
};

// Default central-difference step balancing truncation against cancellation
// for profiles evaluated at ~1e-12 relative accuracy.
inline double radial_fd_step(double r) { return std::max(1e-4, 1e-3 * (1.0 + r)); }

// f''(r) + (d-1) f'(r)/r by central differences with step h; at r = 0 the
// symmetric limit d * f''(0) is used. Error O(h^2).
double radial_laplacian(const RadialProfile& f, double r, int d, double h);

// log density of R = ||c e1 + t Z||, Z ~ N_d(0, I). Dispatches between the
// central chi form (c = 0), elementary Bessel forms (odd d), and a log-domain
// Poisson mixture of central chi-squares (general d, stable for
// noncentrality c^2/t^2 up to ~1e6).
double noncentral_chi_logpdf(double r, double c, double t, int d);

// Poisson-mixture density of the noncentral chi-square distribution,
// f(x; k, delta); series truncated when the remaining mass is negligible
// (< 1e-14 of the total). Exposed for cross-checking the odd-d closed forms.
double noncentral_chisq_pdf(double x, int k, double delta);

// E[g(||u + t Z1||)] for Z1 ~ N_d(0, I) and ||u|| = center_norm, reduced to a
// one-dimensional integral against the noncentral chi density. t = 0 returns
// g(center_norm) exactly.
Estimate radial_expectation(const RadialProfile& g, double center_norm, double t,
                            int d, double rel_tol);

// Monotonicity-preserving cubic interpolation (Fritsch-Carlson). Nodes must
// be strictly increasing; evaluation outside the grid clamps to the ends.
class PchipTable {
public:
    PchipTable() = default;
    PchipTable(std::vector<double> x, std::vector<double> y);
    double operator()(double x) const;
    bool empty() const { return x_.empty(); }
    double x_min() const { return x_.front(); }
    double x_max() const { return x_.back(); }

private:
    std::vector<double> x_, y_, m_;  // m_ = node derivatives
};

}  // namespace alphapred
