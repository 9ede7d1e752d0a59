#pragma once

#include "alphapred/common.hpp"

namespace alphapred {

// Marginal density m(w, v) of X ~ N_d(mu, v I) under a prior on mu, for
// priors that make it radial: m(w, v) = M(||w||^2, v). Evaluation is fresh
// per (z, v); nothing is cached across v.
//
// harmonic:  Stein prior ||mu||^{-(d-2)}; M(z, v) = P(d/2-1, z/(2v)) z^{-(d/2-1)}
//            (the prior itself diverges at 0 and is never evaluated).
// uniform:   improper flat prior, M = 1.
// gaussian:  mu ~ N(0, c * base I), M(z, v) = N(0, (v + c*base) I) at radius^2 z.
class Marginal {
public:
    enum class Prior { uniform, harmonic, gaussian };

    static Marginal uniform(int d);
    static Marginal harmonic(int d);
    static Marginal gaussian(int d, double c, double base);

    Prior prior() const { return prior_; }
    int d() const { return d_; }
    bool radial() const { return true; }

    double value(double z, double v) const;       // M(z, v)
    double log_value(double z, double v) const;
    // analytic dM/dz (order 1) or d^2M/dz^2 (order 2)
    double dz(double z, double v, int order) const;

private:
    Marginal(Prior p, int d, double c, double base) : prior_(p), d_(d), c_(c), base_(base) {}
    Prior prior_;
    int d_;
    double c_ = 0.0, base_ = 0.0;
};

// Harmonic marginal and its radial derivatives (free-function forms).
double harmonic_marginal(double z, double v, int d);
double harmonic_marginal_log(double z, double v, int d);
double harmonic_marginal_dz(double z, double v, int d, int order);

// Marginal of X under the prior N(0, c * base I): a Gaussian with inflated
// variance v + c * base, evaluated at squared radius z.
double gaussian_prior_marginal(double z, double v, int d, double c, double base);

// Laplacian of a radial function via the chain rule:
// Delta_w m = 2 d dM/dz + 4 z d2M/dz2 at z = ||w||^2.
double laplacian_m(const Marginal& m, double z, double v, int d);

// Laplacian of m^a via Delta h^a = a h^a { Delta h / h + (a-1) ||grad log h||^2 }
// with ||grad log m||^2 = 4 z (M_z / M)^2. a must be nonzero.
double laplacian_m_power(const Marginal& m, double z, double v, int d, double a);

}  // namespace alphapred
