#include "alphapred/risk.hpp"

#include <atomic>
#include <cmath>

#include "alphapred/mc.hpp"
#include "alphapred/quadrature.hpp"
#include "alphapred/radial.hpp"

namespace alphapred {

namespace {

constexpr double kExpClamp = 700.0;
constexpr std::int64_t kMinReportedN = 1000;
constexpr std::int64_t kTableThreshold = 10000;

// (1-beta) * lr exponentiated with the overflow guard
double pow_term(double lr, double one_minus_beta, std::atomic<long>& clips) {
    double a = one_minus_beta * lr;
    if (a > kExpClamp) {
        a = kExpClamp;
        clips.fetch_add(1, std::memory_order_relaxed);
    }
    return std::exp(a);
}

double table_radius(const ProblemSpec& spec, double mu_norm) {
    return 1.2 * (mu_norm + std::sqrt(spec.vx) * (std::sqrt(double(spec.d)) + 10.0));
}

}  // namespace

double neg_lap_sqrt_ratio(const Marginal& marginal, double z, double v, int d) {
    const double m = marginal.value(z, v);
    const double lap = laplacian_m(marginal, z, v, d);
    const double mz = marginal.dz(z, v, 1);
    const double grad_log_sq = 4.0 * z * (mz / m) * (mz / m);
    return -0.5 * lap / m + 0.25 * grad_log_sq;
}

double invariant_risk_closed_form(const ProblemSpec& spec, double q_variance) {
    spec.require_open_interval();
    if (!(q_variance > 0.0))
        throw std::invalid_argument("invariant_risk_closed_form: q_variance must be > 0");
    const auto k = derive_constants(spec);
    const double gpow = std::pow(k.gamma, 0.5 * (1.0 - k.beta) * spec.d);
    const double base = (1.0 - gpow) / (k.beta * (1.0 - k.beta));
    const double target_v = spec.vy / k.gamma;
    if (q_variance == target_v) return base;
    return base + gpow * alpha_div_gaussians_sq(0.0, target_v, q_variance, spec.alpha, spec.d);
}

Estimate risk_mc(const RiskQuery& query, RiskWarnings* warnings) {
    query.spec.validate();
    if (query.n < kMinReportedN)
        throw std::invalid_argument("risk_mc: n must be >= 1000 for reported results");
    if (query.mu.size() != query.spec.d)
        throw std::invalid_argument("risk_mc: mu dimension mismatch");
    if (!query.mu.allFinite()) throw std::invalid_argument("risk_mc: mu must be finite");

    const ProblemSpec& spec = query.spec;
    const int d = spec.d;
    const double sx = std::sqrt(spec.vx);
    const Eigen::VectorXd mu = query.mu;
    std::atomic<long> clips{0};
    Estimate est;

    if (spec.alpha == 1.0) {
        // quadratic-loss form ||posterior_mean(X) - mu||^2 / (2 vy)
        if (query.density == QueryDensity::uniform) {
            est = mc_mean(
                [&, d, sx](SplitMix64& rng) {
                    double sq = 0.0;
                    for (int i = 0; i < d; ++i) {
                        const double dev = sx * rng.normal();
                        sq += dev * dev;
                    }
                    return sq / (2.0 * spec.vy);
                },
                query.n, query.seed, query.threads);
        } else {
            const Marginal marg = Marginal::harmonic(d);
            est = mc_mean(
                [&, d, sx](SplitMix64& rng) {
                    // shrinkage factor c(x): posterior mean is c(x) x
                    double x_sq = 0.0, x_dot_mu = 0.0, mu_sq = 0.0;
                    for (int i = 0; i < d; ++i) {
                        const double xi = mu[i] + sx * rng.normal();
                        x_sq += xi * xi;
                        x_dot_mu += xi * mu[i];
                        mu_sq += mu[i] * mu[i];
                    }
                    const double c =
                        1.0 + 2.0 * spec.vx * marg.dz(x_sq, spec.vx, 1) / marg.value(x_sq, spec.vx);
                    const double dev_sq = c * c * x_sq - 2.0 * c * x_dot_mu + mu_sq;
                    return dev_sq / (2.0 * spec.vy);
                },
                query.n, query.seed, query.threads);
        }
        if (warnings) warnings->overflow_clips = 0;
        return est;
    }

    spec.require_open_interval();
    const auto k = derive_constants(spec);

    if (query.density == QueryDensity::uniform) {
        // Gaussian candidate: the inner Y-expectation is exact
        const double cand_v = spec.vy / k.gamma;
        est = mc_mean(
            [&, d, sx, cand_v](SplitMix64& rng) {
                double dev_sq = 0.0;
                for (int i = 0; i < d; ++i) {
                    const double dev = sx * rng.normal();
                    dev_sq += dev * dev;
                }
                return alpha_div_gaussians_sq(dev_sq, spec.vy, cand_v, spec.alpha, d);
            },
            query.n, query.seed, query.threads);
        if (warnings) warnings->overflow_clips = 0;
        return est;
    }

    // harmonic Bayes density: paired (X, Y) sample
    auto family = harmonic_family(spec);
    if (query.n > kTableThreshold) family->build_table(table_radius(spec, mu.norm()));
    const double sy = std::sqrt(spec.vy);
    const double one_minus_beta = 1.0 - k.beta;
    const double pref = 1.0 / (k.beta * one_minus_beta);
    est = mc_mean(
        [&, d, sx, sy](SplitMix64& rng) {
            double w_sq = 0.0, x_sq = 0.0, yx_sq = 0.0, ymu_sq = 0.0;
            for (int i = 0; i < d; ++i) {
                const double z1 = rng.normal(), z2 = rng.normal();
                const double xi = mu[i] + sx * z1;
                const double yi = mu[i] + sy * z2;
                const double wi = k.gamma * xi + (1.0 - k.gamma) * yi;
                w_sq += wi * wi;
                x_sq += xi * xi;
                yx_sq += (yi - xi) * (yi - xi);
                ymu_sq += sy * z2 * sy * z2;
            }
            const double lr = gaussian_logpdf_sq(yx_sq, spec.vy / k.gamma, d) -
                              gaussian_logpdf_sq(ymu_sq, spec.vy, d) +
                              family->log_ratio_vs_invariant(std::sqrt(w_sq), std::sqrt(x_sq));
            return pref * (1.0 - pow_term(lr, one_minus_beta, clips));
        },
        query.n, query.seed, query.threads);
    if (warnings) warnings->overflow_clips = clips.load();
    return est;
}

RiskDifferenceResult risk_difference_crn(const ProblemSpec& spec, const Eigen::VectorXd& mu,
                                         std::int64_t n, std::uint64_t seed,
                                         const FInducedFamily* family, int threads) {
    spec.require_open_interval();
    if (n < kMinReportedN)
        throw std::invalid_argument("risk_difference_crn: n must be >= 1000");
    if (mu.size() != spec.d) throw std::invalid_argument("risk_difference_crn: mu dimension");

    std::shared_ptr<FInducedFamily> owned;
    if (!family) {
        owned = harmonic_family(spec);
        if (n > kTableThreshold) owned->build_table(table_radius(spec, mu.norm()));
        family = owned.get();
    }

    const auto k = derive_constants(spec);
    const int d = spec.d;
    const double sx = std::sqrt(spec.vx), sy = std::sqrt(spec.vy);
    const double one_minus_beta = 1.0 - k.beta;
    const double pref = 1.0 / (k.beta * one_minus_beta);
    std::atomic<long> clips{0};

    Estimate est = mc_mean(
        [&, d, sx, sy](SplitMix64& rng) {
            double w_sq = 0.0, x_sq = 0.0, yx_sq = 0.0, ymu_sq = 0.0;
            for (int i = 0; i < d; ++i) {
                const double z1 = rng.normal(), z2 = rng.normal();
                const double xi = mu[i] + sx * z1;
                const double yi = mu[i] + sy * z2;
                const double wi = k.gamma * xi + (1.0 - k.gamma) * yi;
                w_sq += wi * wi;
                x_sq += xi * xi;
                yx_sq += (yi - xi) * (yi - xi);
                ymu_sq += sy * z2 * sy * z2;
            }
            const double lr_u = gaussian_logpdf_sq(yx_sq, spec.vy / k.gamma, d) -
                                gaussian_logpdf_sq(ymu_sq, spec.vy, d);
            const double lr_f =
                lr_u + family->log_ratio_vs_invariant(std::sqrt(w_sq), std::sqrt(x_sq));
            return pref * (pow_term(lr_f, one_minus_beta, clips) -
                           pow_term(lr_u, one_minus_beta, clips));
        },
        n, seed, threads);

    return RiskDifferenceResult{est, "crn_mc", clips.load()};
}

namespace {

// Per-t-node radial table of (-Delta varrho) / varrho^{2/beta - 1}; built once
// and shared read-only across Monte Carlo workers.
class RhoNodeTable {
public:
    RhoNodeTable(const RadialProfile& f, double t, int d, double beta, double r_max,
                 double radial_tol) {
        const int nodes = 240;
        std::vector<double> grid{0.0};
        const double r_min = r_max * 2e-5;
        const double step = std::log(r_max / r_min) / (nodes - 2);
        for (int i = 0; i < nodes - 1; ++i) grid.push_back(r_min * std::exp(i * step));
        grid.back() = r_max;

        f_ = &f;
        t_ = t;
        d_ = d;
        beta_ = beta;
        tol_ = radial_tol;
        std::vector<double> vals(grid.size());
        bool positive = true;
        for (std::size_t i = 0; i < grid.size(); ++i) {
            vals[i] = direct(grid[i]);
            if (vals[i] <= 0.0) positive = false;
        }
        log_scale_ = positive;
        if (positive)
            for (double& v : vals) v = std::log(v);
        table_ = PchipTable(grid, vals);
        r_max_ = r_max;
    }

    double operator()(double r) const {
        if (r > r_max_) return direct(r);  // rare tail samples
        const double v = table_(r);
        return log_scale_ ? std::exp(v) : v;
    }

    // (-Delta varrho)(r; t) / varrho^{2/beta-1}(r; t), varrho = E[f]^{beta/2}
    double direct(double r) const {
        auto varrho = [this](double rr) {
            return std::pow(radial_expectation(*f_, rr, t_, d_, tol_).value, 0.5 * beta_);
        };
        RadialProfile prof(varrho);
        const double h = radial_fd_step(r);
        const double lap = radial_laplacian(prof, r, d_, h);
        const double v = varrho(r);
        return -lap / std::pow(v, 2.0 / beta_ - 1.0);
    }

private:
    const RadialProfile* f_ = nullptr;
    double t_ = 0, beta_ = 0, tol_ = 0, r_max_ = 0;
    int d_ = 0;
    bool log_scale_ = false;
    PchipTable table_;
};

}  // namespace

RiskDifferenceResult risk_difference_rho_oracle(const ProblemSpec& spec,
                                                const Eigen::VectorXd& mu,
                                                const RadialProfile& f, double quad_tol,
                                                std::int64_t n_outer, std::uint64_t seed,
                                                int threads) {
    spec.require_open_interval();
    if (spec.d > 5)
        throw std::invalid_argument("risk_difference_rho_oracle: d <= 5 (tensor cost)");
    if (mu.size() != spec.d) throw std::invalid_argument("rho_oracle: mu dimension");
    if (n_outer < kMinReportedN)
        throw std::invalid_argument("rho_oracle: n_outer must be >= 1000");

    const auto k = derive_constants(spec);
    const int d = spec.d;
    const double xi = k.xi;
    const double sig = std::sqrt(spec.vx * k.gamma);
    const double radial_tol = std::min(1e-9, 0.01 * quad_tol);

    const double mu_norm = mu.norm();
    const double r_max = mu_norm + (std::sqrt(double(d)) + 9.0) * (sig + xi) + 1.0;

    // nested Gauss rules in t over [0, xi]; each node owns a radial table
    const GaussLegendre& coarse = gauss_legendre(16);
    const GaussLegendre& fine = gauss_legendre(32);
    struct Node {
        double t, w;
        std::shared_ptr<RhoNodeTable> table;
    };
    auto build_nodes = [&](const GaussLegendre& gl) {
        std::vector<Node> nodes(gl.node.size());
        for (std::size_t i = 0; i < gl.node.size(); ++i) {
            const double t = 0.5 * xi * (1.0 + gl.node[i]);
            nodes[i] = Node{t, 0.5 * xi * gl.weight[i],
                            std::make_shared<RhoNodeTable>(f, t, d, k.beta, r_max, radial_tol)};
        }
        return nodes;
    };
    const auto nodes16 = build_nodes(coarse);
    const auto nodes32 = build_nodes(fine);

    const double log_pref_const =
        std::log(4.0) - 2.0 * std::log(k.beta) + (1.0 - k.beta) * 0.5 * d * std::log(k.gamma);
    auto log_f = [&](double r) {
        return f.log_value ? f.log_value(r) : std::log(f.value(r));
    };

    // per-sample rho-hat: pref(w) * sum_k w_k t_k A_k(||w + t_k z||)
    auto sample_parts = [&](SplitMix64& rng, double& i16, double& i32, double& lpref) {
        double w_sq = 0.0, wz = 0.0, z_sq = 0.0;
        for (int i = 0; i < d; ++i) {
            const double zw = rng.normal(), zz = rng.normal();
            const double wi = mu[i] + sig * zw;
            w_sq += wi * wi;
            wz += wi * zz;
            z_sq += zz * zz;
        }
        auto integral = [&](const std::vector<Node>& nodes) {
            double acc = 0.0;
            for (const auto& nd : nodes) {
                const double r_sq = w_sq + 2.0 * nd.t * wz + nd.t * nd.t * z_sq;
                acc += nd.w * nd.t * (*nd.table)(std::sqrt(std::max(r_sq, 0.0)));
            }
            return acc;
        };
        i16 = integral(nodes16);
        i32 = integral(nodes32);
        lpref = log_pref_const + (1.0 - k.beta) * log_f(std::sqrt(w_sq));
    };

    Estimate est = mc_mean(
        [&](SplitMix64& rng) {
            double i16, i32, lpref;
            sample_parts(rng, i16, i32, lpref);
            return std::exp(lpref) * i32;
        },
        n_outer, seed, threads);

    // same draws again for the t-rule discrepancy: a deterministic bound on
    // the quadrature part of the error
    Estimate sys = mc_mean(
        [&](SplitMix64& rng) {
            double i16, i32, lpref;
            sample_parts(rng, i16, i32, lpref);
            return std::exp(lpref) * std::fabs(i32 - i16);
        },
        n_outer, seed, threads);

    est.error += sys.value;
    return RiskDifferenceResult{est, "rho_oracle", 0};
}

double alpha1_risk_difference(const ProblemSpec& spec, const Eigen::VectorXd& mu,
                              const Marginal& marginal, double quad_tol) {
    spec.validate();
    if (mu.size() != spec.d) throw std::invalid_argument("alpha1_risk_difference: mu dimension");
    if (marginal.prior() == Marginal::Prior::uniform) return 0.0;
    const int d = spec.d;
    RadialProfile ratio([&, d](double r) {
        return neg_lap_sqrt_ratio(marginal, r * r, spec.vx, d);
    });
    const double e =
        radial_expectation(ratio, mu.norm(), std::sqrt(spec.vx), d, quad_tol).value;
    return 2.0 * spec.vx * spec.vx / spec.vy * e;
}

double kl_risk_difference_integral(const ProblemSpec& spec, const Eigen::VectorXd& mu,
                                   const Marginal& marginal, double quad_tol) {
    spec.validate();
    if (spec.alpha != -1.0)
        throw std::invalid_argument("kl_risk_difference_integral: requires alpha = -1");
    if (mu.size() != spec.d) throw std::invalid_argument("kl integral: mu dimension");
    if (marginal.prior() == Marginal::Prior::uniform) return 0.0;
    const int d = spec.d;
    const double v_star = spec.vx * spec.vy / (spec.vx + spec.vy);
    const double mu_norm = mu.norm();
    auto inner = [&, d](double v) {
        RadialProfile ratio([&, d, v](double r) {
            return neg_lap_sqrt_ratio(marginal, r * r, v, d);
        });
        return radial_expectation(ratio, mu_norm, std::sqrt(v), d, 0.01 * quad_tol).value;
    };
    return 2.0 * adaptive_quad(inner, v_star, spec.vx, quad_tol).value;
}

double extended_bayes_risk(const ProblemSpec& spec, double c) {
    spec.require_open_interval();
    if (!(c > 0.0)) throw std::invalid_argument("extended_bayes_risk: c must be > 0");
    const auto k = derive_constants(spec);
    const double ratio = (1.0 + c * k.gamma) / (1.0 + c);
    const double gpow = std::pow(ratio, 0.5 * spec.d * (1.0 - k.beta));
    return (1.0 - gpow) / (k.beta * (1.0 - k.beta));
}

}  // namespace alphapred
