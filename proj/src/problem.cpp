#include "alphapred/problem.hpp"

#include <cmath>

namespace alphapred {

void ProblemSpec::validate() const {
    if (d < 3) throw std::invalid_argument("ProblemSpec: d must be >= 3");
    if (!(vx > 0.0)) throw std::invalid_argument("ProblemSpec: vx must be > 0");
    if (!(vy > 0.0)) throw std::invalid_argument("ProblemSpec: vy must be > 0");
    if (!(alpha >= -1.0 && alpha <= 1.0))
        throw std::invalid_argument("ProblemSpec: alpha must lie in [-1, 1]");
}

void ProblemSpec::require_open_interval() const {
    validate();
    if (alpha == -1.0 || alpha == 1.0)
        throw std::invalid_argument("operation requires alpha in the open interval (-1, 1)");
}

bool inv_beta_is_integer(double beta) {
    if (!(beta > 0.0)) return false;
    const double ib = 1.0 / beta;
    return std::fabs(ib - std::round(ib)) < kIntegerDetectRelTol * ib;
}

DerivedConstants derive_constants(const ProblemSpec& spec) {
    spec.validate();
    DerivedConstants k;
    k.beta = 0.5 * (1.0 - spec.alpha);
    k.v_star = spec.vx * spec.vy / (spec.vx + spec.vy);
    if (k.beta > 0.0) {
        k.gamma = 1.0 / (1.0 + k.beta * spec.vx / spec.vy);
        k.xi = (1.0 - k.gamma) * std::sqrt(spec.vy / k.gamma);
        const double ib = 1.0 / k.beta;
        if (!inv_beta_is_integer(k.beta)) {
            k.kappa = static_cast<int>(std::floor(ib)) + 1;
            k.c_beta = 0.5 * (*k.kappa - ib + 1.0);
        }
    } else {
        // alpha = 1: beta = 0, the smoothing disappears
        k.gamma = 1.0;
        k.xi = 0.0;
    }
    return k;
}

double f_alpha(double z, double alpha) {
    if (!(z > 0.0)) throw std::invalid_argument("f_alpha: z must be > 0");
    if (alpha == 1.0) return z * std::log(z);
    if (alpha == -1.0) return -std::log(z);
    if (!(alpha > -1.0 && alpha < 1.0))
        throw std::invalid_argument("f_alpha: alpha must lie in [-1, 1]");
    const double c = 4.0 / (1.0 - alpha * alpha);
    return c * (1.0 - std::pow(z, 0.5 * (1.0 + alpha)));
}

double gaussian_logpdf_sq(double sq_norm, double v, int d) {
    if (!(v > 0.0)) throw std::invalid_argument("gaussian_logpdf: v must be > 0");
    return -0.5 * d * std::log(kTwoPi * v) - 0.5 * sq_norm / v;
}

double gaussian_logpdf(const Eigen::VectorXd& u, double v) {
    return gaussian_logpdf_sq(u.squaredNorm(), v, static_cast<int>(u.size()));
}

double alpha_div_gaussians_sq(double mean_sq_dist, double v1, double v2,
                              double alpha, int d) {
    if (!(v1 > 0.0 && v2 > 0.0))
        throw std::invalid_argument("alpha_div_gaussians: variances must be > 0");
    if (!(alpha > -1.0 && alpha < 1.0))
        throw std::invalid_argument("alpha_div_gaussians: alpha must lie in (-1, 1)");
    if (mean_sq_dist == 0.0 && v1 == v2) return 0.0;
    const double beta = 0.5 * (1.0 - alpha);
    // int p^beta q^{1-beta} = [v1^{1-beta} v2^beta / vmix]^{d/2}
    //                         * exp(-beta(1-beta) ||mu1-mu2||^2 / (2 vmix)),
    // vmix = beta v2 + (1-beta) v1
    const double vmix = beta * v2 + (1.0 - beta) * v1;
    const double log_i = 0.5 * d * ((1.0 - beta) * std::log(v1) + beta * std::log(v2) -
                                    std::log(vmix)) -
                         0.5 * beta * (1.0 - beta) * mean_sq_dist / vmix;
    return (1.0 - std::exp(log_i)) / (beta * (1.0 - beta));
}

double alpha_div_gaussians(const Eigen::VectorXd& mu1, double v1,
                           const Eigen::VectorXd& mu2, double v2, double alpha) {
    if (mu1.size() != mu2.size())
        throw std::invalid_argument("alpha_div_gaussians: dimension mismatch");
    return alpha_div_gaussians_sq((mu1 - mu2).squaredNorm(), v1, v2, alpha,
                                  static_cast<int>(mu1.size()));
}

}  // namespace alphapred
