#pragma once

#include <Eigen/Core>
#include <string>

#include "alphapred/common.hpp"
#include "alphapred/marginal.hpp"
#include "alphapred/predictive.hpp"
#include "alphapred/problem.hpp"

namespace alphapred {

// Which predictive procedure a risk query evaluates. For |alpha| < 1 `uniform`
// is the best invariant density and `harmonic` the harmonic-prior Bayes
// density; at alpha = 1 both reduce to plug-in densities centered at the
// respective posterior means.
enum class QueryDensity { uniform, harmonic };

struct RiskQuery {
    ProblemSpec spec;
    Eigen::VectorXd mu;
    QueryDensity density = QueryDensity::uniform;
    std::int64_t n = 100000;  // >= 1000 for reported results
    std::uint64_t seed = 1;
    int threads = 1;
};

struct RiskWarnings {
    long overflow_clips = 0;  // (p/phi)^{1-beta} evaluations clamped at exp(700)
};

struct RiskDifferenceResult {
    Estimate diff;       // estimate of R(p_U) - R(p_f)
    std::string method;  // crn_mc | rho_oracle | alpha1_formula | kl_integral
    long clips = 0;
};

// Lemma-level closed form: risk of the invariant candidate phi(. , q_variance),
// (1 - gamma^{(1-beta)d/2}) / (beta(1-beta))
//   + gamma^{(1-beta)d/2} D_alpha{ phi(., vy/gamma) || phi(., q_variance) };
// minimized exactly at q_variance = vy / gamma.
double invariant_risk_closed_form(const ProblemSpec& spec, double q_variance);

// Monte Carlo alpha-risk. X is sampled from N(mu, vx I); the inner
// Y-expectation uses the exact Gaussian divergence for Gaussian candidates and
// a paired Y-sample otherwise. alpha = 1 uses the quadratic-loss form
// ||posterior_mean(X) - mu||^2 / (2 vy).
Estimate risk_mc(const RiskQuery& query, RiskWarnings* warnings = nullptr);

// Paired common-random-numbers estimate of diff R_{alpha,U,f}: a single (X, Y)
// loop evaluating both densities on the same draws. family = nullptr selects
// the harmonic Bayes family.
RiskDifferenceResult risk_difference_crn(const ProblemSpec& spec, const Eigen::VectorXd& mu,
                                         std::int64_t n, std::uint64_t seed,
                                         const FInducedFamily* family = nullptr,
                                         int threads = 1);

// Independent representation of the same risk difference: E[rho(W, Z)] with
// W ~ N(mu, vx gamma I), Z ~ N(0, I),
//   rho(w, z) = 4 gamma^{(1-beta)d/2} f(w)^{1-beta} / beta^2
//               * int_0^xi t (-Delta varrho(w + t z; t)) / varrho^{2/beta-1} dt,
//   varrho(u; t) = E_{Z1}[ f(||u + t Z1||) ]^{beta/2}.
// The t-integral runs on nested Gauss rules with per-node radial tables of the
// Laplacian term; the outer expectation is Monte Carlo with n_outer samples.
RiskDifferenceResult risk_difference_rho_oracle(const ProblemSpec& spec,
                                                const Eigen::VectorXd& mu,
                                                const RadialProfile& f, double quad_tol,
                                                std::int64_t n_outer = 10000,
                                                std::uint64_t seed = 1, int threads = 1);

// Exact alpha = 1 risk difference (2 vx^2 / vy) E_X[-Delta m^{1/2} / m^{1/2}],
// X ~ N(mu, vx I), by radial quadrature.
double alpha1_risk_difference(const ProblemSpec& spec, const Eigen::VectorXd& mu,
                              const Marginal& marginal, double quad_tol);

// Exact alpha = -1 (KL) risk difference
// 2 int_{v*}^{vx} E_Z[-Delta m^{1/2}(Z, v)/m^{1/2}(Z, v)] dv, Z ~ N(mu, v I).
double kl_risk_difference_integral(const ProblemSpec& spec, const Eigen::VectorXd& mu,
                                   const Marginal& marginal, double quad_tol);

// Bayes risk under the prior N(0, c vx gamma I):
// (1 - ((1+c gamma)/(1+c))^{d(1-beta)/2}) / (beta(1-beta)); increasing in c and
// converging to the constant invariant risk.
double extended_bayes_risk(const ProblemSpec& spec, double c);

// -Delta m^{1/2} / m^{1/2} at squared radius z, from analytic derivatives
double neg_lap_sqrt_ratio(const Marginal& marginal, double z, double v, int d);

}  // namespace alphapred
