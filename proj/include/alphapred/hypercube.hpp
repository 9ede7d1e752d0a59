#pragma once

#include <string>
#include <vector>

#include "alphapred/common.hpp"

namespace alphapred {

// Unit-hypercube integrals behind the superharmonicity analysis of smoothed
// powers of the harmonic marginal. With s = v/t^2 and z = ||u||^2 / (2 t^2),
//
//   zeta(l) = prod l_i^{d/2-2} (sum l + s)^{-d/2} exp(-z sum l / (sum l + s))
//   rho(j1,j2,l)  = int_{[0,1]^nu} l1^{j1} l2^{j2} (sum l + s)^l zeta dl
//   eta(j2,l)     = same over [0,1]^{nu-1} with l1 pinned at 1 and weight
//                   (1 + sum_{i>=2} l + s)^l
struct HypercubeParams {
    int nu = 2;    // number of lambda coordinates, 2 or 3
    int d = 4;     // dimension, >= 3
    double s = 1;  // > 0
    double z = 0;  // >= 0
    void validate() const;
};

struct MomentKey {
    int j1 = 0, j2 = 0, l = 0;
};

double log_zeta(const std::vector<double>& lambda, double s, double z, int d);
double zeta(const std::vector<double>& lambda, double s, double z, int d);

// Batched evaluation: one tensor sweep accumulates every requested moment.
// Tensor-product Gauss-Legendre with the odd-d endpoint substitution
// lambda = u^2 and geometric panels when exp(-z sum l/(sum l+s)) concentrates
// near 0; orders are doubled until two refinements agree to 1e-11.
std::vector<double> rho_moments(const HypercubeParams& p, const std::vector<MomentKey>& keys);
std::vector<double> eta_moments(const HypercubeParams& p,
                                const std::vector<std::pair<int, int>>& keys);
double rho_int(const HypercubeParams& p, int j1, int j2, int l);
double eta_int(const HypercubeParams& p, int j2, int l);

// One verified relation: both sides, the comparison scale, and a pass flag.
struct CheckRow {
    std::string name;
    double lhs = 0, rhs = 0;
    double margin = 0;  // identities: |lhs-rhs|/scale; inequalities: signed slack/scale
    bool pass = false;
};

struct CheckReport {
    HypercubeParams params;
    std::vector<CheckRow> rows;
    bool pass = false;  // conjunction of rows
};

// Integration-by-parts and symmetry identities among rho and eta.
CheckReport verify_identities(double s, double z, int d, int nu);
// Correlation inequalities: the eta/rho product bound, the moment-ratio bound
// with its two components.
CheckReport verify_inequalities(double s, double z, int d, int nu);

// Quadratic form controlling superharmonicity of {E[m_H^nu]}^{c/nu}:
// q = (c/nu - 1) ||grad psi||^2 + psi * laplacian(psi) expressed through
// rho(1,0,-1), rho(2,0,-2), rho(1,1,-2); scale is the sum of term magnitudes.
struct PsiQuadForm {
    double psi = 0, grad_sq = 0, lap_psi = 0;
    double q = 0, scale = 0;
};
PsiQuadForm psi_quad_form(double s, double z, int d, int nu, double c);

struct PsiConditionReport {
    HypercubeParams params;
    double c = 0;
    PsiQuadForm form;
    double s_bound = 0;   // nu d (nu-1) / ((1-c)(d+2))
    bool in_range = false;  // s >= s_bound: the range where nonpositivity is asserted
    bool pass = false;      // nonpositive whenever in_range; informational otherwise
};
PsiConditionReport verify_psi_condition(double s, double z, int d, int nu, double c);

// zeta(a) zeta(b) <= zeta(a v b) zeta(a ^ b), checked in the log domain with
// 1e-12 slack.
bool mtp2_check(const std::vector<double>& a, const std::vector<double>& b,
                double s, double z, int d);

}  // namespace alphapred
