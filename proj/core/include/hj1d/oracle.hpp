#pragma once

// Independent ground truth for the optimal-control evaluators: a monotone
// local Lax-Friedrichs scheme for the oscillatory and effective Cauchy
// problems, plus the 1D effective Hamiltonian.
//
// In one dimension with H(p) + V(x,y) and max_y V = 0, the effective
// Hamiltonian is characterized by the cell momentum integrals
//
//     pbar_{1,2}(x, r) = int_0^1 H_{1,2}^{-1}(r - V(x,y)) dy ,   r >= 0:
//
// Hbar(x, p) = r where pbar(x, r) = p, and Hbar = 0 on the flat piece
// [pbar_2(x,0), pbar_1(x,0)]. No corrector is ever constructed.

#include <vector>

#include "hj1d/problem.hpp"

namespace hj1d {

struct OracleError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Signed flat-piece edge pbar_i(x, 0); branch 1 gives the right edge (>= 0).
double flat_edge(const Problem& pb, double x, int branch);

// Direct evaluation by monotone inversion of the momentum integral.
double effective_hamiltonian(const Problem& pb, double x, double p);

// Tabulated Hbar for the FD solver: bucketed in the separable amplitude a(x)
// (or in x for general potentials) with per-bucket momentum tables.
class EffectiveHamiltonianTable {
public:
    static EffectiveHamiltonianTable build(const Problem& pb, double x_lo, double x_hi,
                                           double p_max);
    double value(double x, double p) const;
    double flat_plus(double x) const;
    double flat_minus(double x) const;
    double max_slope() const { return max_slope_; }
    double p_max() const { return p_max_; }

private:
    struct Bucket {
        double edge_plus = 0.0, edge_minus = 0.0;
        std::vector<double> h_right;  // Hbar on [edge_plus, p_max], uniform grid
        std::vector<double> h_left;   // Hbar on [-p_max, edge_minus], uniform grid
    };
    double bucket_coord(double x) const;
    double eval_bucket(const Bucket& b, double p) const;

    bool by_amplitude_ = true;  // bucket key: a(x) if separable else x
    double key_lo_ = 0.0, key_hi_ = 1.0;
    double p_max_ = 0.0;
    double max_slope_ = 0.0;
    std::vector<Bucket> buckets_;
    const Potential* pot_ = nullptr;
};

struct GridSolution {
    double x_lo = 0.0;
    double dx = 0.0;
    int n = 0;
    double t_end = 0.0;
    double dt = 0.0;
    double theta = 0.0;  // scheme dissipation coefficient
    std::vector<double> times;
    std::vector<std::vector<double>> slices;
    double max_grad = 0.0;  // over the ghost-influence-free range
    int steps = 0;
    int clean_lo = 0, clean_hi = 0;  // index range never touched by boundary data

    double x_at(int j) const { return x_lo + dx * j; }
    // Linear interpolation in x on the recorded slice nearest to t.
    double value_at(double x, double t) const;
};

struct FdOptions {
    double dx = 1e-2;
    std::vector<double> snapshot_times{1.0};
    // Half-width of the x-region whose values must stay free of boundary
    // influence (defaults to the problem window R).
    double report_halfwidth = -1.0;
    // Domain padding beyond the report region; negative = automatic
    // (numerical dependence cone + 1).
    double pad = -1.0;
    double cfl = 0.5;  // dt = cfl dx / theta; monotone for cfl <= 1/2
};

// Monotone solve of the oscillatory problem; requires dx <= eps/20.
GridSolution fd_solve_oscillatory(const Problem& pb, double eps, const FdOptions& opt);

// Monotone solve of the effective problem with tabulated Hbar.
GridSolution fd_solve_effective(const Problem& pb, const FdOptions& opt);

}  // namespace hj1d
