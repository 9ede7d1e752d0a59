#include "alphapred/hypercube.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "alphapred/quadrature.hpp"

namespace alphapred {

void HypercubeParams::validate() const {
    if (nu < 2 || nu > 3) throw std::invalid_argument("HypercubeParams: nu must be 2 or 3");
    if (d < 3) throw std::invalid_argument("HypercubeParams: d must be >= 3");
    if (!(s > 0.0)) throw std::invalid_argument("HypercubeParams: s must be > 0");
    if (z < 0.0) throw std::invalid_argument("HypercubeParams: z must be >= 0");
}

double log_zeta(const std::vector<double>& lambda, double s, double z, int d) {
    if (!(s > 0.0)) throw std::invalid_argument("log_zeta: s must be > 0");
    double sum = 0.0;
    double log_prod = 0.0;
    const double a = 0.5 * d - 2.0;
    for (double li : lambda) {
        if (li < 0.0 || li > 1.0)
            throw std::invalid_argument("log_zeta: lambda components must lie in [0, 1]");
        sum += li;
        if (li == 0.0) {
            if (a < 0.0) return std::numeric_limits<double>::infinity();   // d = 3: integrable pole
            if (a > 0.0) return -std::numeric_limits<double>::infinity();  // zeta vanishes
        } else if (a != 0.0) {
            log_prod += a * std::log(li);
        }
    }
    const double t = sum + s;
    return log_prod - 0.5 * d * std::log(t) - z * sum / t;
}

double zeta(const std::vector<double>& lambda, double s, double z, int d) {
    return std::exp(log_zeta(lambda, s, z, d));
}

namespace {

// integer power with negative exponents
double ipow(double x, int n) {
    if (n < 0) return 1.0 / ipow(x, -n);
    double r = 1.0;
    while (n > 0) {
        if (n & 1) r *= x;
        x *= x;
        n >>= 1;
    }
    return r;
}

// (sum + s)^{-d/2} for integer d
double pow_neg_half_d(double t, int d) {
    const double inv = 1.0 / t;
    double r = ipow(inv, d / 2);
    if (d & 1) r *= std::sqrt(inv);
    return r;
}

// One coordinate's nodes and combined weights on lambda in [0, 1], including
// the lambda^{d/2-2} factor. Odd d substitutes lambda = u^2; panels are laid
// geometrically when the exponential factor concentrates near 0 with rate
// `decay` (= z/s at the origin).
struct CoordRule {
    std::vector<double> lam;
    std::vector<double> w;
};

CoordRule make_coord_rule(int d, double decay, int order) {
    const bool odd = (d % 2 != 0);
    const double lam_scale = decay > 3.0 ? std::min(1.0, 3.0 / decay) : 1.0;
    const double u_scale = odd ? std::sqrt(lam_scale) : lam_scale;

    std::vector<double> breaks{0.0};
    if (u_scale >= 0.5) {
        breaks.push_back(1.0);
    } else {
        double b = u_scale;
        while (b < 1.0) {
            breaks.push_back(b);
            b *= 2.0;
        }
        breaks.push_back(1.0);
    }

    const GaussLegendre& gl = gauss_legendre(order);
    CoordRule rule;
    rule.lam.reserve((breaks.size() - 1) * gl.node.size());
    rule.w.reserve(rule.lam.capacity());
    for (std::size_t p = 0; p + 1 < breaks.size(); ++p) {
        const double lo = breaks[p], hi = breaks[p + 1];
        const double mid = 0.5 * (lo + hi), half = 0.5 * (hi - lo);
        for (std::size_t k = 0; k < gl.node.size(); ++k) {
            const double u = mid + half * gl.node[k];
            double lam, w;
            if (odd) {
                lam = u * u;
                // lambda^{d/2-2} dlambda = 2 u^{d-3} du
                w = 2.0 * ipow(u, d - 3) * half * gl.weight[k];
            } else {
                lam = u;
                w = ipow(u, d / 2 - 2) * half * gl.weight[k];
            }
            rule.lam.push_back(lam);
            rule.w.push_back(w);
        }
    }
    return rule;
}

// single sweep accumulating every rho moment at a fixed rule
std::vector<double> sweep_rho(const HypercubeParams& p, const std::vector<MomentKey>& keys,
                              const CoordRule& rule) {
    const std::size_t n = rule.lam.size();
    const std::size_t nk = keys.size();
    // lambda powers for coordinates 1 and 2 (j in 0..2 suffices for all keys)
    int jmax = 0;
    for (const auto& k : keys) jmax = std::max({jmax, k.j1, k.j2});
    std::vector<std::vector<double>> lam_pow(jmax + 1, std::vector<double>(n, 1.0));
    for (int j = 1; j <= jmax; ++j)
        for (std::size_t k = 0; k < n; ++k) lam_pow[j][k] = lam_pow[j - 1][k] * rule.lam[k];

    std::vector<double> acc(nk, 0.0);
    auto accumulate = [&](double sum, double base_w, std::size_t k1, std::size_t k2) {
        const double t = sum + p.s;
        const double core = base_w * pow_neg_half_d(t, p.d) * std::exp(-p.z * sum / t);
        for (std::size_t i = 0; i < nk; ++i)
            acc[i] += core * lam_pow[keys[i].j1][k1] * lam_pow[keys[i].j2][k2] * ipow(t, keys[i].l);
    };

    if (p.nu == 2) {
        for (std::size_t k1 = 0; k1 < n; ++k1)
            for (std::size_t k2 = 0; k2 < n; ++k2)
                accumulate(rule.lam[k1] + rule.lam[k2], rule.w[k1] * rule.w[k2], k1, k2);
    } else {
        for (std::size_t k1 = 0; k1 < n; ++k1)
            for (std::size_t k2 = 0; k2 < n; ++k2) {
                const double s12 = rule.lam[k1] + rule.lam[k2];
                const double w12 = rule.w[k1] * rule.w[k2];
                for (std::size_t k3 = 0; k3 < n; ++k3)
                    accumulate(s12 + rule.lam[k3], w12 * rule.w[k3], k1, k2);
            }
    }
    return acc;
}

// eta sweep: lambda_1 pinned at 1, integration over the remaining nu-1
std::vector<double> sweep_eta(const HypercubeParams& p,
                              const std::vector<std::pair<int, int>>& keys,
                              const CoordRule& rule) {
    const std::size_t n = rule.lam.size();
    const std::size_t nk = keys.size();
    int jmax = 0;
    for (const auto& k : keys) jmax = std::max(jmax, k.first);
    std::vector<std::vector<double>> lam_pow(jmax + 1, std::vector<double>(n, 1.0));
    for (int j = 1; j <= jmax; ++j)
        for (std::size_t k = 0; k < n; ++k) lam_pow[j][k] = lam_pow[j - 1][k] * rule.lam[k];

    std::vector<double> acc(nk, 0.0);
    auto accumulate = [&](double sum2, double base_w, std::size_t k2) {
        const double sum = 1.0 + sum2;  // includes lambda_1 = 1
        const double t = sum + p.s;
        const double core = base_w * pow_neg_half_d(t, p.d) * std::exp(-p.z * sum / t);
        for (std::size_t i = 0; i < nk; ++i)
            acc[i] += core * lam_pow[keys[i].first][k2] * ipow(t, keys[i].second);
    };

    if (p.nu == 2) {
        for (std::size_t k2 = 0; k2 < n; ++k2) accumulate(rule.lam[k2], rule.w[k2], k2);
    } else {
        for (std::size_t k2 = 0; k2 < n; ++k2)
            for (std::size_t k3 = 0; k3 < n; ++k3)
                accumulate(rule.lam[k2] + rule.lam[k3], rule.w[k2] * rule.w[k3], k2);
    }
    return acc;
}

constexpr double kMomentRelTol = 1e-11;

template <typename Keys, typename Sweep>
std::vector<double> refine(const HypercubeParams& p, const Keys& keys, Sweep&& sweep) {
    p.validate();
    const double decay = p.z / p.s;
    std::vector<double> prev;
    for (int order : {32, 64, 128, 256}) {
        const CoordRule rule = make_coord_rule(p.d, decay, order);
        std::vector<double> cur = sweep(p, keys, rule);
        if (!prev.empty()) {
            bool ok = true;
            for (std::size_t i = 0; i < cur.size(); ++i) {
                const double scale = std::max(std::fabs(cur[i]), 1e-280);
                if (std::fabs(cur[i] - prev[i]) > kMomentRelTol * scale) {
                    ok = false;
                    break;
                }
            }
            if (ok) return cur;
        }
        prev = std::move(cur);
    }
    throw numerical_error("hypercube moments did not converge to 1e-11");
}

}  // namespace

std::vector<double> rho_moments(const HypercubeParams& p, const std::vector<MomentKey>& keys) {
    return refine(p, keys, [](const HypercubeParams& pp, const std::vector<MomentKey>& kk,
                              const CoordRule& r) { return sweep_rho(pp, kk, r); });
}

std::vector<double> eta_moments(const HypercubeParams& p,
                                const std::vector<std::pair<int, int>>& keys) {
    return refine(p, keys, [](const HypercubeParams& pp,
                              const std::vector<std::pair<int, int>>& kk,
                              const CoordRule& r) { return sweep_eta(pp, kk, r); });
}

double rho_int(const HypercubeParams& p, int j1, int j2, int l) {
    return rho_moments(p, {MomentKey{j1, j2, l}})[0];
}

double eta_int(const HypercubeParams& p, int j2, int l) {
    return eta_moments(p, {{j2, l}})[0];
}

CheckReport verify_identities(double s, double z, int d, int nu) {
    const HypercubeParams p{nu, d, s, z};
    p.validate();
    CheckReport rep;
    rep.params = p;

    // every rho/eta needed, fetched in two batched sweeps
    const std::vector<MomentKey> rho_keys = {
        {1, 0, -1}, {0, 0, 1}, {1, 0, 0},   // rinsetsu.0 at (1,0,-1)
        {2, 0, -2}, {2, 0, -1},             // rinsetsu.0 at (2,0,-2)
        {1, 1, -2}, {0, 1, 0}, {1, 1, -1},  // rinsetsu.0 at (1,1,-2)
        {0, 0, 0},  {0, 0, -1},             // rinsetsu.1
    };
    const std::vector<std::pair<int, int>> eta_keys = {{0, 1}, {0, 0}, {1, 0}};
    const auto rho_vals = rho_moments(p, rho_keys);
    const auto eta_vals = eta_moments(p, eta_keys);
    auto rho = [&](int j1, int j2, int l) {
        for (std::size_t i = 0; i < rho_keys.size(); ++i)
            if (rho_keys[i].j1 == j1 && rho_keys[i].j2 == j2 && rho_keys[i].l == l)
                return rho_vals[i];
        throw std::logic_error("verify_identities: moment not prefetched");
    };
    auto eta = [&](int j2, int l) {
        for (std::size_t i = 0; i < eta_keys.size(); ++i)
            if (eta_keys[i].first == j2 && eta_keys[i].second == l) return eta_vals[i];
        throw std::logic_error("verify_identities: eta moment not prefetched");
    };

    auto identity_row = [&](const std::string& name, double lhs, double rhs, double scale) {
        CheckRow row;
        row.name = name;
        row.lhs = lhs;
        row.rhs = rhs;
        row.margin = std::fabs(lhs - rhs) / std::max(scale, 1e-280);
        row.pass = row.margin <= 1e-8;
        rep.rows.push_back(row);
    };

    // rinsetsu.0: s z rho(j1,j2,l) = -eta(j2,l+2) + (j1+d/2-2) rho(j1-1,j2,l+2)
    //                                + (l-d/2+2) rho(j1,j2,l+1)
    for (const MomentKey k : {MomentKey{1, 0, -1}, MomentKey{2, 0, -2}, MomentKey{1, 1, -2}}) {
        const double lhs = s * z * rho(k.j1, k.j2, k.l);
        const double t_eta = eta(k.j2, k.l + 2);
        const double t_a = (k.j1 + 0.5 * d - 2.0) * rho(k.j1 - 1, k.j2, k.l + 2);
        const double t_b = (k.l - 0.5 * d + 2.0) * rho(k.j1, k.j2, k.l + 1);
        const double rhs = -t_eta + t_a + t_b;
        const double scale =
            std::fabs(lhs) + std::fabs(t_eta) + std::fabs(t_a) + std::fabs(t_b);
        identity_row("rinsetsu.0(" + std::to_string(k.j1) + "," + std::to_string(k.j2) + "," +
                         std::to_string(k.l) + ")",
                     lhs, rhs, scale);
    }

    {  // rinsetsu.1 at l = 0
        const double lhs = rho(0, 0, 0);
        const double rhs = nu * rho(1, 0, -1) + s * rho(0, 0, -1);
        identity_row("rinsetsu.1", lhs, rhs, std::fabs(lhs) + std::fabs(rhs));
    }
    {  // rinsetsu.2 at l = 0
        const double lhs = rho(1, 0, 0);
        const double rhs = rho(2, 0, -1) + (nu - 1) * rho(1, 1, -1) + s * rho(1, 0, -1);
        identity_row("rinsetsu.2", lhs, rhs, std::fabs(lhs) + std::fabs(rhs));
    }
    {  // rinsetsu.3
        const double lhs = eta(0, 1);
        const double rhs = (1.0 + s) * eta(0, 0) + (nu - 1) * eta(1, 0);
        identity_row("rinsetsu.3", lhs, rhs, std::fabs(lhs) + std::fabs(rhs));
    }

    rep.pass = std::all_of(rep.rows.begin(), rep.rows.end(),
                           [](const CheckRow& r) { return r.pass; });
    return rep;
}

CheckReport verify_inequalities(double s, double z, int d, int nu) {
    const HypercubeParams p{nu, d, s, z};
    p.validate();
    CheckReport rep;
    rep.params = p;
    const std::vector<MomentKey> rho_keys = {{0, 0, -1}, {0, 0, 0}, {1, 0, -1},
                                             {1, 0, 0},  {2, 0, 0}, {1, 1, 0}};
    const std::vector<std::pair<int, int>> eta_keys = {{0, 1}, {0, 0}};
    const auto rho_vals = rho_moments(p, rho_keys);
    const auto eta_vals = eta_moments(p, eta_keys);
    auto rho = [&](int j1, int j2, int l) {
        for (std::size_t i = 0; i < rho_keys.size(); ++i)
            if (rho_keys[i].j1 == j1 && rho_keys[i].j2 == j2 && rho_keys[i].l == l)
                return rho_vals[i];
        throw std::logic_error("verify_inequalities: moment not prefetched");
    };
    auto eta = [&](int j2, int l) {
        for (std::size_t i = 0; i < eta_keys.size(); ++i)
            if (eta_keys[i].first == j2 && eta_keys[i].second == l) return eta_vals[i];
        throw std::logic_error("verify_inequalities: eta moment not prefetched");
    };

    auto geq_row = [&](const std::string& name, double lhs, double rhs) {
        CheckRow row;
        row.name = name;
        row.lhs = lhs;
        row.rhs = rhs;
        const double scale = std::max(std::fabs(lhs) + std::fabs(rhs), 1e-280);
        row.margin = (lhs - rhs) / scale;
        row.pass = row.margin >= -1e-10;
        rep.rows.push_back(row);
    };

    // FKG: eta(0,1) rho(0,0,-1) >= eta(0,0) rho(0,0,0)
    geq_row("fkg", eta(0, 1) * rho(0, 0, -1), eta(0, 0) * rho(0, 0, 0));
    // rho(1,0,-1)/rho(1,0,0) >= 1 / (nu d/(d+2) + s)
    geq_row("ratio_lower_bound", rho(1, 0, -1) / rho(1, 0, 0),
            1.0 / (nu * d / (d + 2.0) + s));
    // component moment-ratio bounds
    geq_row("second_moment_bound", d / (d + 2.0), rho(2, 0, 0) / rho(1, 0, 0));
    geq_row("cross_moment_bound", (d - 2.0) / d, rho(1, 1, 0) / rho(1, 0, 0));

    rep.pass = std::all_of(rep.rows.begin(), rep.rows.end(),
                           [](const CheckRow& r) { return r.pass; });
    return rep;
}

PsiQuadForm psi_quad_form(double s, double z, int d, int nu, double c) {
    const HypercubeParams p{nu, d, s, z};
    p.validate();
    if (!(c > 0.0 && c < 1.0))
        throw std::invalid_argument("psi_quad_form: c must lie in (0, 1)");
    const std::vector<MomentKey> keys = {{0, 0, 0}, {1, 0, -1}, {2, 0, -2}, {1, 1, -2}};
    const auto m = rho_moments(p, keys);
    const double psi = m[0];
    const double r101 = m[1], r202 = m[2], r112 = m[3];

    PsiQuadForm f;
    f.psi = psi;
    f.grad_sq = 2.0 * nu * nu * z * r101 * r101;
    f.lap_psi = -d * nu * r101 + 2.0 * nu * z * r202 + 2.0 * nu * (nu - 1) * z * r112;
    f.q = (c / nu - 1.0) * f.grad_sq + psi * f.lap_psi;
    f.scale = (1.0 - c / nu) * f.grad_sq +
              psi * (d * nu * r101 + 2.0 * nu * z * r202 + 2.0 * nu * (nu - 1) * z * r112);
    return f;
}

PsiConditionReport verify_psi_condition(double s, double z, int d, int nu, double c) {
    PsiConditionReport rep;
    rep.params = HypercubeParams{nu, d, s, z};
    rep.c = c;
    rep.form = psi_quad_form(s, z, d, nu, c);
    rep.s_bound = nu * d * (nu - 1.0) / ((1.0 - c) * (d + 2.0));
    rep.in_range = s >= rep.s_bound;
    const double slack = 1e-12 * rep.form.scale;
    rep.pass = !rep.in_range || rep.form.q <= slack;
    return rep;
}

bool mtp2_check(const std::vector<double>& a, const std::vector<double>& b,
                double s, double z, int d) {
    if (a.size() != b.size()) throw std::invalid_argument("mtp2_check: size mismatch");
    std::vector<double> hi(a.size()), lo(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
        hi[i] = std::max(a[i], b[i]);
        lo[i] = std::min(a[i], b[i]);
    }
    const double lhs = log_zeta(a, s, z, d) + log_zeta(b, s, z, d);
    const double rhs = log_zeta(hi, s, z, d) + log_zeta(lo, s, z, d);
    return lhs <= rhs + 1e-12 * (std::fabs(lhs) + std::fabs(rhs) + 1.0);
}

}  // namespace alphapred
