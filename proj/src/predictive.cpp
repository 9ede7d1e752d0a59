#include "alphapred/predictive.hpp"
#include <algorithm>

#include <atomic>
#include <cmath>

#include "alphapred/mc.hpp"

namespace alphapred {

namespace {

constexpr double kNormalizerTol = 1e-9;

std::vector<double> radius_grid(double r_max, int nodes) {
    if (nodes < 8) throw std::invalid_argument("normalizer table: need >= 8 nodes");
    if (!(r_max > 0.0)) throw std::invalid_argument("normalizer table: r_max must be > 0");
    // uniform spacing: cubic interpolation needs smoothly varying gaps, and a
    // log-spaced grid grows too sparse at large radii
    std::vector<double> r(nodes);
    for (int i = 0; i < nodes; ++i) r[i] = r_max * i / (nodes - 1.0);
    return r;
}

}  // namespace

FInducedFamily::FInducedFamily(const ProblemSpec& spec, RadialProfile f, DensityKind kind)
    : spec_(spec), k_(derive_constants(spec)), f_(std::move(f)), kind_(kind) {
    spec.require_open_interval();
    if (!f_.value) throw std::invalid_argument("FInducedFamily: f must be callable");
}

void FInducedFamily::build_table(double r_max, int nodes) {
    const auto grid = radius_grid(r_max, nodes);
    std::vector<double> log_n(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) log_n[i] = log_normalizer(grid[i]);
    table_ = PchipTable(grid, log_n);
    table_rmax_ = r_max;
}

double FInducedFamily::log_normalizer(double x_norm) const {
    if (!table_.empty() && x_norm <= table_rmax_) return table_(x_norm);
    const Estimate e = radial_expectation(f_, x_norm, k_.xi, spec_.d, kNormalizerTol);
    if (!(e.value > 0.0))
        throw numerical_error("f_induced normalizer is not positive; divergent f?");
    return std::log(e.value);
}

double FInducedFamily::log_ratio_vs_invariant(double w_norm, double x_norm) const {
    const double lf =
        f_.log_value ? f_.log_value(w_norm) : std::log(f_.value(w_norm));
    return lf - log_normalizer(x_norm);
}

double FInducedFamily::log_density(const Eigen::VectorXd& y, const Eigen::VectorXd& x) const {
    const Eigen::VectorXd w = k_.gamma * x + (1.0 - k_.gamma) * y;
    const double lpu = gaussian_logpdf((y - x).eval(), spec_.vy / k_.gamma);
    return log_ratio_vs_invariant(w.norm(), x.norm()) + lpu;
}

double PredictiveDensity::log_density(const Eigen::VectorXd& y) const {
    if (gaussian) {
        if (kind == DensityKind::best_invariant)
            return gaussian_logpdf((y - x).eval(), gauss_variance);  // reads y - x only
        return gaussian_logpdf((y - gauss_center).eval(), gauss_variance);
    }
    return family->log_density(y, x);
}

PredictiveDensity best_invariant(const ProblemSpec& spec, const Eigen::VectorXd& x) {
    spec.validate();
    if (spec.alpha == 1.0)
        throw std::invalid_argument("best_invariant: alpha = 1 has no density of this form");
    const double beta = 0.5 * (1.0 - spec.alpha);
    PredictiveDensity p;
    p.kind = DensityKind::best_invariant;
    p.spec = spec;
    p.x = x;
    p.gaussian = true;
    p.gauss_center = x;
    p.gauss_variance = spec.vy + beta * spec.vx;
    p.log_normalizer = Estimate{0.0, 0.0, 0, 0};
    return p;
}

PredictiveDensity f_induced(const ProblemSpec& spec, const Eigen::VectorXd& x,
                            std::shared_ptr<const FInducedFamily> family) {
    spec.require_open_interval();
    PredictiveDensity p;
    p.kind = family->kind();
    p.spec = spec;
    p.x = x;
    p.family = std::move(family);
    const double ln = p.family->log_normalizer(x.norm());
    p.log_normalizer = Estimate{ln, kNormalizerTol, 0, 0};
    return p;
}

PredictiveDensity f_induced(const ProblemSpec& spec, const Eigen::VectorXd& x,
                            RadialProfile f) {
    return f_induced(spec, x, f_family(spec, std::move(f)));
}

RadialProfile harmonic_power_profile(const ProblemSpec& spec) {
    const auto k = derive_constants(spec);
    const double base_v = spec.vx * k.gamma;
    const double inv_beta = 1.0 / k.beta;
    const int d = spec.d;
    RadialProfile prof(
        [base_v, inv_beta, d](double r) {
            return std::exp(inv_beta * harmonic_marginal_log(r * r, base_v, d));
        },
        [base_v, inv_beta, d](double r) {
            return inv_beta * harmonic_marginal_log(r * r, base_v, d);
        });
    return prof;
}

std::shared_ptr<FInducedFamily> f_family(const ProblemSpec& spec, RadialProfile f) {
    return std::make_shared<FInducedFamily>(spec, std::move(f), DensityKind::f_induced);
}

std::shared_ptr<FInducedFamily> harmonic_family(const ProblemSpec& spec) {
    return std::make_shared<FInducedFamily>(spec, harmonic_power_profile(spec),
                                            DensityKind::harmonic_bayes);
}

PredictiveDensity harmonic_bayes(const ProblemSpec& spec, const Eigen::VectorXd& x) {
    return f_induced(spec, x, harmonic_family(spec));
}

Eigen::VectorXd posterior_mean(const ProblemSpec& spec, const Eigen::VectorXd& x,
                               const Marginal& marginal) {
    if (!marginal.radial()) throw std::invalid_argument("posterior_mean: marginal must be radial");
    const double z = x.squaredNorm();
    const double ratio = marginal.dz(z, spec.vx, 1) / marginal.value(z, spec.vx);
    return x * (1.0 + 2.0 * spec.vx * ratio);
}

PredictiveDensity plugin_alpha1(const ProblemSpec& spec, const Eigen::VectorXd& x,
                                const Marginal& marginal) {
    spec.validate();
    PredictiveDensity p;
    p.kind = DensityKind::plugin_alpha1;
    p.spec = spec;
    p.x = x;
    p.gaussian = true;
    p.gauss_center = posterior_mean(spec, x, marginal);
    p.gauss_variance = spec.vy;
    p.log_normalizer = Estimate{0.0, 0.0, 0, 0};
    return p;
}

Estimate normalization_check(const PredictiveDensity& p, std::int64_t n,
                             std::uint64_t seed, int threads, long* clipped) {
    if (p.gaussian) return Estimate{1.0, 0.0, 0, seed};  // analytic short-circuit

    const auto& k = p.family->constants();
    const double prop_sd = std::sqrt(p.spec.vy / k.gamma);
    const int d = p.spec.d;
    const Eigen::VectorXd x = p.x;
    const double log_norm = p.log_normalizer.value;  // fixed x: hoisted out of the loop
    const RadialProfile& f = p.family->f();
    std::atomic<long> clip_count{0};

    auto sampler = [&, d, prop_sd, log_norm](SplitMix64& rng) {
        double w_sq = 0.0;
        for (int i = 0; i < d; ++i) {
            const double yi = x[i] + prop_sd * rng.normal();
            const double wi = k.gamma * x[i] + (1.0 - k.gamma) * yi;
            w_sq += wi * wi;
        }
        const double w_norm = std::sqrt(w_sq);
        const double lf = f.log_value ? f.log_value(w_norm) : std::log(f.value(w_norm));
        double weight = std::exp(lf - log_norm);
        if (weight > 1e6) {
            weight = 1e6;
            clip_count.fetch_add(1, std::memory_order_relaxed);
        }
        return weight;
    };
    Estimate est = mc_mean(sampler, n, seed, threads);
    if (clipped) *clipped = clip_count.load();
    return est;
}

}  // namespace alphapred
