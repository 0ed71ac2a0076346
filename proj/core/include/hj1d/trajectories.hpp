#pragma once

// Trajectory machinery for the optimal-control evaluators.
//
// Positive-energy paths solve the conserved first-order form
//
//     eta'(s) = G_i( r - V(eps eta(s), eta(s)) ),        i = 1 (right), 2 (left)
//
// which keeps the energy H(L'(eta')) + V identically r along the path; the
// second-order Euler-Lagrange residual is used as an independent verification
// only. Endpoints are alternatively computed from the time reparametrization
//
//     t0 = int_{x0}^{x_end} dz / |G_i(r - V(z, z/eps))|       (macro variable)
//
// by monotone marching plus in-segment root finding; the two routes must
// agree, which is one of the structural certificates.
//
// Nonpositive energies are represented by the two separatrix paths (zero
// energy, flowing into the nearest zeros of the potential) plus the constant
// path; they bracket that branch of the optimization to O(eps).

#include <vector>

#include "hj1d/problem.hpp"

namespace hj1d {

struct TrajectoryError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct EnergyPath {
    int branch = 1;
    double energy = 0.0;
    double eps = 0.125;
    double start = 0.0;  // eta(0) = x0 / eps
    double end = 0.0;    // eta(eps^{-1} t0)
    // decimated trajectory samples
    std::vector<double> s, eta, eta_dot;
    double drift = 0.0;           // max_k |H(L'(eta_dot_k)) + V_k - r|
    double step = 0.0;            // accepted RK4 step
    double richardson_gap = 0.0;  // endpoint gap against a half-step run, macro units
};

// Fourth-order integration of the conserved form; step <= min(eps,1)/64,
// halved until the half-step endpoint agrees to 1e-8 (failure beyond 1e-6).
EnergyPath integrate_el(const Problem& pb, const Query& q, double r, int branch);

// max over stored samples of |H(L'(eta_dot)) + V - r|
double energy_drift(const Problem& pb, const EnergyPath& path);

// max over interior samples of |L''(eta') eta'' + eps Vx + Vy| with eta''
// from centered differences of the stored speeds
double el_residual(const Problem& pb, const EnergyPath& path);

struct MarchResult {
    double x_end = 0.0;         // macro endpoint (eps * eta(eps^{-1} t0) or c_{i,r})
    double action = 0.0;        // int |H_i^{-1}(r - V)| along the traversed interval
    double time_residual = 0.0; // |elapsed - t0| of the final bracket solve
};

// Endpoint x_end = eps eta(eps^{-1} t0) from the quadrature route. r > 0.
MarchResult oscillatory_march(const Problem& pb, double x0, double t0, double eps, double r,
                              int branch);
double oscillatory_endpoint(const Problem& pb, const Query& q, double r, int branch);

// Effective endpoint c_{i,r}: time budget t0 against the cell-averaged sojourn
// density int_0^1 dy/|G_i(r - V(x,y))|. Also accumulates the averaged action.
MarchResult averaged_march(const Problem& pb, double x0, double t0, double r, int branch);
double effective_endpoint(const Problem& pb, const Query& q, double r, int branch);

// Elapsed time of the macro interval [from, to] at energy r (diagnostic).
double oscillatory_elapsed(const Problem& pb, double from, double to, double eps, double r,
                           int branch);

struct Separatrix {
    double limit_hi = 0.0;  // smallest zero of the potential section >= x0/eps
    double limit_lo = 0.0;  // largest zero <= x0/eps
    bool stationary = false;
    std::vector<double> s, plus, minus;  // decimated paths
    double plus_end = 0.0, minus_end = 0.0;
};

// Zero-energy separatrices through x0/eps. Requires a zero line (A1); throws
// TrajectoryError when the potential section has no zero in the cell.
Separatrix separatrix_paths(const Problem& pb, const Query& q);

// Elapsed time for the rising separatrix to reach limit_hi - delta (diverges
// as delta -> 0 for C^2 potentials).
double separatrix_time_to(const Problem& pb, const Query& q, double delta);

}  // namespace hj1d
