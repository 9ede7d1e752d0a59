#include "alphapred/domination.hpp"

#include <algorithm>
#include <cmath>

#include "alphapred/hypercube.hpp"
#include "alphapred/marginal.hpp"
#include "alphapred/radial.hpp"

namespace alphapred {

ThresholdResult threshold(int d, double alpha) {
    if (d < 3) throw std::invalid_argument("threshold: d must be >= 3");
    if (!(alpha > -1.0 && alpha < 1.0))
        throw std::invalid_argument("threshold: alpha must lie in (-1, 1)");
    const double beta = 0.5 * (1.0 - alpha);
    const double ib = 1.0 / beta;  // 2 / (1 - alpha)

    ThresholdResult res;
    res.alpha = alpha;
    res.d = d;
    res.integer_case = inv_beta_is_integer(beta);
    if (res.integer_case) {
        res.bound = (d + 2.0) / (d * (1.0 + alpha));
    } else {
        const int kappa = static_cast<int>(std::floor(ib)) + 1;
        res.kappa = kappa;
        res.c_beta = 0.5 * (kappa - ib + 1.0);
        res.bound = ib * ib * ((d + 2.0) / d) * (1.0 - (kappa - ib)) /
                    (2.0 * kappa * (kappa - 1.0));
    }
    return res;
}

std::vector<double> default_alpha_grid(int points) {
    std::vector<double> grid;
    grid.reserve(points + 64);
    for (int i = 0; i < points; ++i)
        grid.push_back(-0.99 + 1.98 * (i + 0.5) / points);
    // exact integer-case alphas 1 - 2/n below 0.99
    for (int n = 2; 1.0 - 2.0 / n < 0.99; ++n) grid.push_back(1.0 - 2.0 / n);
    std::sort(grid.begin(), grid.end());
    grid.erase(std::unique(grid.begin(), grid.end()), grid.end());
    return grid;
}

std::vector<ThresholdResult> figure1_curve(int d, const std::vector<double>& alpha_grid) {
    std::vector<ThresholdResult> rows;
    rows.reserve(alpha_grid.size());
    for (double a : alpha_grid) rows.push_back(threshold(d, a));
    return rows;
}

double t_max(int nu, double c, double v, int d) {
    if (nu < 2) throw std::invalid_argument("t_max: nu must be >= 2");
    if (!(c > 0.0 && c < 1.0)) throw std::invalid_argument("t_max: c must lie in (0, 1)");
    if (!(v > 0.0)) throw std::invalid_argument("t_max: v must be > 0");
    if (d < 3) throw std::invalid_argument("t_max: d must be >= 3");
    return std::sqrt((d + 2.0) * (1.0 - c) * v / (d * nu * (nu - 1.0)));
}

std::vector<double> default_r_grid(double scale) {
    std::vector<double> grid{0.0};
    const double lo = 1e-3 * scale, hi = 30.0 * scale;
    for (int i = 0; i < 40; ++i)
        grid.push_back(lo * std::exp(std::log(hi / lo) * i / 39.0));
    return grid;
}

namespace {

constexpr double kSuperharmonicTol = 1e-8;

SuperharmonicRow analytic_t0_row(const Marginal& m, double r, double v, int d, double a) {
    // Delta m^a = a m^a (lap/m + (a-1) glsq); scale adds the magnitudes
    const double z = r * r;
    const double val = m.value(z, v);
    const double lap_m = laplacian_m(m, z, v, d);
    const double glsq = 4.0 * z * std::pow(m.dz(z, v, 1) / val, 2.0);
    const double common = a * std::pow(val, a);
    SuperharmonicRow row;
    row.r = r;
    row.laplacian = common * (lap_m / val + (a - 1.0) * glsq);
    row.scale = std::fabs(common) * (std::fabs(lap_m / val) + std::fabs(a - 1.0) * glsq) + 1e-300;
    row.normalized = row.laplacian / row.scale;
    row.pass = row.normalized <= kSuperharmonicTol;
    return row;
}

SuperharmonicRow hypercube_row(int nu, double c, double v, int d, double t, double r) {
    // E[m_H^nu(t Z1 + u, v)] = K psi(u/t; nu, s) with s = v/t^2, K > 0, so
    // Delta_u {E}^{c/nu} = (c/nu) K^{c/nu} t^{-2} psi^{c/nu-2}
    //                      [ (c/nu - 1)|grad psi|^2 + psi lap psi ]
    const double s = v / (t * t);
    const double z = 0.5 * r * r / (t * t);
    const PsiQuadForm form = psi_quad_form(s, z, d, nu, c);

    const double a = 0.5 * d - 1.0;
    const double log_b = -std::lgamma(a) - a * std::log(2.0 * v);
    const double log_k = nu * log_b + 0.5 * d * std::log(v) - d * std::log(t);
    const double cn = c / nu;
    const double log_pref = std::log(cn) + cn * log_k - 2.0 * std::log(t) +
                            (cn - 2.0) * std::log(form.psi);
    const double pref = std::exp(log_pref);

    SuperharmonicRow row;
    row.r = r;
    row.laplacian = pref * form.q;
    row.scale = pref * form.scale + 1e-300;
    row.normalized = form.q / form.scale;
    row.pass = row.normalized <= kSuperharmonicTol;
    return row;
}

}  // namespace

SuperharmonicReport check_superharmonic_harmonic_power(int nu, double c, double v, int d,
                                                       double t,
                                                       const std::vector<double>& r_grid) {
    if (nu < 2) throw std::invalid_argument("superharmonic check: nu must be >= 2");
    if (!(c > 0.0 && c < 1.0))
        throw std::invalid_argument("superharmonic check: c must lie in (0, 1)");
    if (!(v > 0.0)) throw std::invalid_argument("superharmonic check: v must be > 0");
    if (t < 0.0) throw std::invalid_argument("superharmonic check: t must be >= 0");

    SuperharmonicReport rep;
    rep.t = t;
    rep.v = v;
    rep.d = d;
    rep.p = nu;
    rep.q = c / nu;
    rep.pass_tol = kSuperharmonicTol;
    rep.method = (t == 0.0) ? "analytic_t0" : "hypercube";

    const Marginal mh = Marginal::harmonic(d);
    rep.max_normalized = -std::numeric_limits<double>::infinity();
    for (double r : r_grid) {
        SuperharmonicRow row = (t == 0.0) ? analytic_t0_row(mh, r, v, d, c)
                                          : hypercube_row(nu, c, v, d, t, r);
        rep.max_normalized = std::max(rep.max_normalized, row.normalized);
        rep.rows.push_back(row);
    }
    rep.pass = std::all_of(rep.rows.begin(), rep.rows.end(),
                           [](const SuperharmonicRow& r) { return r.pass; });
    return rep;
}

SuperharmonicReport check_superharmonic_condition(const ProblemSpec& spec, double t,
                                                  ExponentMode mode,
                                                  const std::vector<double>& r_grid,
                                                  double fd_step) {
    spec.require_open_interval();
    const auto k = derive_constants(spec);
    const double v = spec.vx * k.gamma;
    double p, q;
    if (mode == ExponentMode::one_over_beta) {
        p = 1.0 / k.beta;
        q = 0.5 * k.beta;
    } else {
        if (!k.kappa)
            throw std::invalid_argument(
                "superharmonic check: kappa mode needs non-integer 1/beta");
        p = *k.kappa;
        q = *k.c_beta / *k.kappa;
    }

    // exact routes: t = 0 analytically, integer p through the hypercube form
    if (t == 0.0 || inv_beta_is_integer(1.0 / p)) {
        const int nu = static_cast<int>(std::llround(p));
        if (t == 0.0 || nu >= 2) {
            SuperharmonicReport rep =
                (t == 0.0)
                    ? check_superharmonic_harmonic_power(std::max(nu, 2), p * q, v, spec.d,
                                                         0.0, r_grid)
                    : check_superharmonic_harmonic_power(nu, p * q, v, spec.d, t, r_grid);
            rep.p = p;
            rep.q = q;
            return rep;
        }
    }

    // fractional power: profile {E[m^p]}^q by radial expectation, Laplacian by
    // central differences; the certification floor widens accordingly
    SuperharmonicReport rep;
    rep.t = t;
    rep.v = v;
    rep.d = spec.d;
    rep.p = p;
    rep.q = q;
    rep.method = "finite_difference";

    const int d = spec.d;
    constexpr double quad_tol = 1e-11;
    RadialProfile mp([&, d, v](double r) {
        return std::exp(p * harmonic_marginal_log(r * r, v, d));
    },
                     [&, d, v](double r) { return p * harmonic_marginal_log(r * r, v, d); });
    auto profile_val = [&](double r) {
        return std::pow(radial_expectation(mp, r, t, d, quad_tol).value, q);
    };
    RadialProfile prof(profile_val);

    rep.max_normalized = -std::numeric_limits<double>::infinity();
    for (double r : r_grid) {
        const double h = fd_step > 0.0 ? fd_step : radial_fd_step(r);
        const double lap = radial_laplacian(prof, r, d, h);
        const double val = profile_val(r);
        const double d1 = r > 0.0
                              ? (profile_val(r + h) - profile_val(std::fabs(r - h))) / (2.0 * h)
                              : 0.0;
        const double d2 = lap - (r > 0.0 ? (d - 1) * d1 / r : 0.0);
        SuperharmonicRow row;
        row.r = r;
        row.laplacian = lap;
        row.scale = std::fabs(d2) + (r > 0.0 ? std::fabs((d - 1) * d1 / r) : 0.0) +
                    std::fabs(val) / v + 1e-300;
        row.normalized = lap / row.scale;
        // the finite-difference floor: quadrature noise amplified by 1/h^2
        const double noise = 8.0 * quad_tol * std::fabs(val) / (h * h) / row.scale;
        row.pass = row.normalized <= std::max(kSuperharmonicTol, noise);
        rep.pass_tol = std::max(kSuperharmonicTol, noise);
        rep.max_normalized = std::max(rep.max_normalized, row.normalized);
        rep.rows.push_back(row);
    }
    rep.pass = std::all_of(rep.rows.begin(), rep.rows.end(),
                           [](const SuperharmonicRow& r) { return r.pass; });
    return rep;
}

std::string to_string(Verdict v) {
    switch (v) {
        case Verdict::PASS: return "PASS";
        case Verdict::NEUTRAL: return "NEUTRAL";
        case Verdict::INCONCLUSIVE: return "INCONCLUSIVE";
        case Verdict::FAIL: return "FAIL";
    }
    return "?";
}

std::vector<double> default_mu_grid() { return {0.0, 0.5, 1.0, 2.0, 4.0, 8.0, 16.0}; }

DominationReport domination_experiment(const ProblemSpec& spec,
                                       const std::vector<double>& mu_grid, std::int64_t n,
                                       std::uint64_t seed, const FInducedFamily* family,
                                       int threads) {
    spec.require_open_interval();
    if (mu_grid.empty()) throw std::invalid_argument("domination_experiment: empty mu grid");

    DominationReport rep;
    rep.spec = spec;
    rep.bound = threshold(spec.d, spec.alpha).bound;
    rep.within_bound = spec.vx / spec.vy <= rep.bound;
    rep.mu_norms = mu_grid;

    // share one family (and normalizer table) across the grid
    std::shared_ptr<FInducedFamily> owned;
    if (!family) {
        owned = harmonic_family(spec);
        const double mu_max = *std::max_element(mu_grid.begin(), mu_grid.end());
        if (n > 10000)
            owned->build_table(1.2 * (mu_max + std::sqrt(spec.vx) *
                                                   (std::sqrt(double(spec.d)) + 10.0)));
        family = owned.get();
    }

    bool all_zero = true, any_fail = false;
    bool zero_radius_significant = false, has_zero_radius = false;
    for (double r : mu_grid) {
        Eigen::VectorXd mu = Eigen::VectorXd::Zero(spec.d);
        mu[0] = r;
        auto res = risk_difference_crn(spec, mu, n, seed, family, threads);
        if (res.diff.value != 0.0 || res.diff.error != 0.0) all_zero = false;
        if (res.diff.value < -3.0 * res.diff.error) any_fail = true;
        if (r == 0.0) {
            has_zero_radius = true;
            if (res.diff.value >= 3.0 * res.diff.error && res.diff.error > 0.0)
                zero_radius_significant = true;
        }
        rep.results.push_back(std::move(res));
    }

    if (all_zero)
        rep.verdict = Verdict::NEUTRAL;
    else if (any_fail)
        rep.verdict = Verdict::FAIL;
    else if (has_zero_radius && zero_radius_significant)
        rep.verdict = Verdict::PASS;
    else
        rep.verdict = Verdict::INCONCLUSIVE;
    return rep;
}

}  // namespace alphapred
