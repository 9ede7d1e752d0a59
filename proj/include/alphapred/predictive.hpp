#pragma once

#include <Eigen/Core>
#include <memory>

#include "alphapred/common.hpp"
#include "alphapred/marginal.hpp"
#include "alphapred/problem.hpp"
#include "alphapred/radial.hpp"

namespace alphapred {

enum class DensityKind { best_invariant, f_induced, harmonic_bayes, plugin_alpha1 };

// Predictive family p_f(y|x) = f(||gamma x + (1-gamma) y||) / N(||x||) * p_U(y|x)
// shared across conditioning points: f is fixed and the normalizer
// N(r) = E_{Z1}[ f(||x + xi Z1||) ] depends on x only through r = ||x||.
//
// An optional monotone-cubic table over log N accelerates runs needing many
// normalizer evaluations; it must be built before the family is shared across
// threads and is immutable afterwards. Radii outside the table fall back to
// direct quadrature.
class FInducedFamily {
public:
    FInducedFamily(const ProblemSpec& spec, RadialProfile f, DensityKind kind);

    void build_table(double r_max, int nodes = 1024);
    bool has_table() const { return !table_.empty(); }

    double log_normalizer(double x_norm) const;
    // log f(||gamma x + (1-gamma) y||) - log N(||x||), i.e. log p_f - log p_U
    double log_ratio_vs_invariant(double w_norm, double x_norm) const;
    double log_density(const Eigen::VectorXd& y, const Eigen::VectorXd& x) const;

    const ProblemSpec& spec() const { return spec_; }
    const DerivedConstants& constants() const { return k_; }
    const RadialProfile& f() const { return f_; }
    DensityKind kind() const { return kind_; }

private:
    ProblemSpec spec_;
    DerivedConstants k_;
    RadialProfile f_;
    DensityKind kind_;
    PchipTable table_;  // r -> log N(r)
    double table_rmax_ = 0.0;
};

// One conditioned predictive density p(.|x), evaluable in the log domain.
struct PredictiveDensity {
    DensityKind kind;
    ProblemSpec spec;
    Eigen::VectorXd x;
    Estimate log_normalizer;  // zero for the Gaussian kinds

    // Gaussian kinds carry (center, variance); f-induced kinds delegate to the
    // family. The best-invariant evaluator reads y and x only through y - x.
    bool gaussian = false;
    Eigen::VectorXd gauss_center;
    double gauss_variance = 0.0;
    std::shared_ptr<const FInducedFamily> family;

    double log_density(const Eigen::VectorXd& y) const;
};

// phi(y - x, vy + beta vx): the best invariant predictive density. Defined for
// alpha in [-1, 1); at alpha = -1 this is phi(y - x, vx + vy).
PredictiveDensity best_invariant(const ProblemSpec& spec, const Eigen::VectorXd& x);

PredictiveDensity f_induced(const ProblemSpec& spec, const Eigen::VectorXd& x,
                            std::shared_ptr<const FInducedFamily> family);
PredictiveDensity f_induced(const ProblemSpec& spec, const Eigen::VectorXd& x,
                            RadialProfile f);

// Bayes solution under the harmonic prior: the f-induced density with
// f = m_H^{1/beta}(., vx gamma).
PredictiveDensity harmonic_bayes(const ProblemSpec& spec, const Eigen::VectorXd& x);

// Plug-in density phi(y - posterior_mean(x), vy): the alpha = 1 Bayes solution.
PredictiveDensity plugin_alpha1(const ProblemSpec& spec, const Eigen::VectorXd& x,
                                const Marginal& marginal);

// r -> m_H(r^2, vx gamma)^{1/beta}, with log evaluator
RadialProfile harmonic_power_profile(const ProblemSpec& spec);

std::shared_ptr<FInducedFamily> harmonic_family(const ProblemSpec& spec);
std::shared_ptr<FInducedFamily> f_family(const ProblemSpec& spec, RadialProfile f);

// posterior mean x (1 + 2 vx d/dz log M(||x||^2, vx))
Eigen::VectorXd posterior_mean(const ProblemSpec& spec, const Eigen::VectorXd& x,
                               const Marginal& marginal);

// Importance-sampling check of int p(y|x) dy = 1 with proposal p_U(.|x);
// exact (zero-error) for the Gaussian kinds. Weights are clipped at 1e6;
// clip events are counted into *clipped when provided.
Estimate normalization_check(const PredictiveDensity& p, std::int64_t n,
                             std::uint64_t seed, int threads = 1,
                             long* clipped = nullptr);

}  // namespace alphapred
