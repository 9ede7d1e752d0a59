#pragma once

#include <Eigen/Core>
#include <optional>

#include "alphapred/common.hpp"

namespace alphapred {

// The prediction problem: observe X ~ N_d(mu, vx I), predict the density of
// Y ~ N_d(mu, vy I) under alpha-divergence loss. mu enters risk operations as
// an argument, not state.
struct ProblemSpec {
    int d = 3;          // dimension, >= 3
    double vx = 1.0;    // variance of X
    double vy = 1.0;    // variance of Y
    double alpha = 0.0; // divergence index in [-1, 1]

    void validate() const;
    // operations whose formulas are singular at alpha = +-1 call this
    void require_open_interval() const;
};

// Everything downstream is phrased through these derived quantities.
// kappa and c_beta exist only when 1/beta is not an integer (the detection
// uses a relative tolerance: floating alpha values like 1/3 are inexact).
struct DerivedConstants {
    double beta = 0.0;    // (1 - alpha) / 2
    double gamma = 0.0;   // 1 / (1 + beta vx / vy)
    double xi = 0.0;      // (1 - gamma) sqrt(vy / gamma)
    double v_star = 0.0;  // vx vy / (vx + vy)
    std::optional<int> kappa;      // smallest integer > 1/beta
    std::optional<double> c_beta;  // (kappa - 1/beta + 1) / 2, in (1/2, 1)
};

inline constexpr double kIntegerDetectRelTol = 1e-9;

// true when 1/beta is an integer up to the relative detection tolerance
bool inv_beta_is_integer(double beta);

DerivedConstants derive_constants(const ProblemSpec& spec);

// Generator of the alpha-divergence: f_a(z) for z > 0.
double f_alpha(double z, double alpha);

// log density of N_d(0, v I) at offset u, exact in the log domain
double gaussian_logpdf(const Eigen::VectorXd& u, double v);
// same, given the squared norm ||u||^2 (radial form shared by hot loops)
double gaussian_logpdf_sq(double sq_norm, double v, int d);

// Exact D_alpha{ N(mu1, v1 I) || N(mu2, v2 I) } for |alpha| < 1 via the
// exponential-family interpolation integral; mu1 is the true density.
double alpha_div_gaussians(const Eigen::VectorXd& mu1, double v1,
                           const Eigen::VectorXd& mu2, double v2, double alpha);
// radial form taking the squared mean offset ||mu1 - mu2||^2
double alpha_div_gaussians_sq(double mean_sq_dist, double v1, double v2,
                              double alpha, int d);

}  // namespace alphapred
