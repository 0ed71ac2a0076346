#pragma once

// Value evaluators built on the energy-level reduction of the optimal-control
// problem. The oscillatory value at a probe is
//
//   u_eps(x0,t0) = min( nonpositive-energy branch,
//                       inf_{0<r<r0} A(r, right), inf_{0<r<r0} A(r, left) )
//
// with A(r, i) = -r t0 + int |H_i^{-1}(r - V(z, z/eps))| dz + u0(x_end) over
// the traversed interval, and the effective value replaces the oscillatory
// integral by its cell average (endpoints c_{i,r}) and the nonpositive branch
// by u0(x0). r0 is the energy cutoff above which paths are suboptimal by a
// margin of t0, so the search stays on (0, r0).
//
// certified_constants produces the explicit constants of the O(eps) rate
// certificate; closed forms in the separable quadratic case, sampled suprema
// otherwise.

#include <cmath>
#include <vector>

#include "hj1d/assumptions.hpp"
#include "hj1d/numerics.hpp"
#include "hj1d/problem.hpp"

namespace hj1d {

struct Setup {
    double lip_u0 = 0.0;
    double sup_v = 0.0;
    double cbar = 0.0;        // max_{|p|<=Lip} H(p) + ||V||, supersolution drift
    double r_cut = 0.0;       // r0
    double c0 = 0.0;          // T |G_1(r0 + ||V||)|, right travel bound
    double c0_left = 0.0;     // T |G_2(r0 + ||V||)|
    Interval window;          // I0 = [-R, c0 + R]
    Interval window_left;     // mirrored window [-R - c0_left, R]
};

Setup make_setup(const Problem& pb);

// Smallest energy at which every path is provably suboptimal by margin t0.
double r0_threshold(const Problem& pb);

struct CertifiedConstants {
    double r0 = 0.0;
    double alpha_T = 0.0, beta_T = 0.0;  // range of a(x) on I0 (separable case)
    double endpoint_constant = 0.0;       // |eps eta_end - c_{1,r}| <= C_K eps
    double averaging_constant = 0.0;      // oscillatory-vs-averaged action gap <= C_F eps
    double endpoint_constant_left = 0.0;  // branch-2 analogues on the mirrored window
    double averaging_constant_left = 0.0;
    double rate_constant = 0.0;     // |u_eps - u| <= C_total eps
    double uniform_constant = 0.0;  // 2(Lip + 4 sqrt ||V||), NaN unless V = V(y)
    double cbar = 0.0;
    double c0 = 0.0;
    Interval I0;
    bool closed_form = false;  // separable quadratic closed forms
    bool certified = true;     // sampled suprema converged
};

CertifiedConstants certified_constants(const Problem& pb);

// Action of the energy-r branch path through (x0, t0); r > 0.
double action_positive(const Problem& pb, const Query& q, double r, int branch);
// Equivalent classical-mechanics form (quadratic Hamiltonians only):
//   r t0 + 2 int (-V)/sqrt(2(r-V)) + u0(x_end).
double action_positive_classical(const Problem& pb, const Query& q, double r, int branch);

struct NonpositiveValue {
    double value = 0.0;
    double endpoint = 0.0;  // macro endpoint of the minimizing surrogate
};
// min over the zero-energy separatrices and the constant path; within
// (|H_1^{-1}(||V||)| + Lip) eps of u0(x0).
NonpositiveValue action_nonpositive(const Problem& pb, const Query& q);

// Averaged action I_i(r) with endpoint c_{i,r}; r > 0.
double effective_I(const Problem& pb, const Query& q, double r, int branch);
double effective_I_classical(const Problem& pb, const Query& q, double r, int branch);

enum class WinningBranch { nonpositive, positive_right, positive_left };

struct ValueReport {
    double value = 0.0;  // user-facing (constant shift re-applied)
    double value_normalized = 0.0;
    WinningBranch branch = WinningBranch::nonpositive;
    double r_star = 0.0;   // NaN on the nonpositive branch
    double endpoint = 0.0; // macro endpoint of the winning path
    double supersolution_bound = 0.0;  // u0(x0) + cbar t0 (normalized scale)
    double r_cut = 0.0;
};

ValueReport u_eps(const Problem& pb, const Query& q);
ValueReport u_effective(const Problem& pb, const Query& q);  // eps plays no role

// Shared r-scan: 64 logarithmic seeds on (0, r0) refined by golden section.
struct RScanResult {
    double r = 0.0;
    double value = 0.0;
};
template <class F>
RScanResult minimize_over_energy(const F& f, double r0) {
    constexpr int kSeeds = 64;
    const double rho = std::pow(1e-8, 1.0 / kSeeds);
    std::vector<double> rs(kSeeds);
    for (int k = 1; k <= kSeeds; ++k) rs[k - 1] = r0 * std::pow(rho, k);
    double best_v = 0.0;
    int best_k = 0;
    for (int k = 0; k < kSeeds; ++k) {
        const double v = f(rs[k]);
        if (k == 0 || v < best_v) {
            best_v = v;
            best_k = k;
        }
    }
    const double hi = best_k == 0 ? r0 * (1.0 - 1e-12) : rs[best_k - 1];
    const double lo = best_k == kSeeds - 1 ? rs[best_k] * rho : rs[best_k + 1];
    const auto refined = num::golden_min(f, lo, hi, 1e-9);
    if (refined.value < best_v) return {refined.x, refined.value};
    return {rs[best_k], best_v};
}

}  // namespace hj1d
