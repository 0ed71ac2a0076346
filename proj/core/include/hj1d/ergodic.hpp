#pragma once

// Quantitative averaging of oscillatory integrands. For F(x,y) continuously
// differentiable in x and 1-periodic in y,
//
//   | int_a^b F(x, x/eps) dx  -  int_a^b int_0^1 F(x,y) dy dx |  <=  C eps
//
// with the computable constant
//
//   C = 2 max_x int_0^1 |F(x,y)| dy + (b-a) max_x int_0^1 |dF/dx (x,y)| dy.
//
// verify_ergodic_bound asserts that inequality for a list of eps values; a
// violation indicates an integrand contract breach (e.g. non-periodicity).

#include <functional>
#include <span>
#include <vector>

namespace hj1d {

struct Oscilland {
    std::function<double(double, double)> f;   // F(x,y)
    std::function<double(double, double)> fx;  // dF/dx(x,y)
    std::vector<double> y_breakpoints;         // kinks of y -> F(.,y), if any
};

// int_a^b F(x, x/eps) dx, resolving every oscillation period (initial panels
// no wider than eps/8). Absolute tolerance 1e-10 (b-a).
double oscillatory_integral(const Oscilland& F, double a, double b, double eps);

// int_a^b int_0^1 F(x,y) dy dx by tensor adaptive quadrature.
double cell_average_integral(const Oscilland& F, double a, double b);

// The constant C above, computed on a 512-point x grid with local refinement
// around each argmax and inflated by 1% to stay a valid upper bound.
double ergodic_constant(const Oscilland& F, double a, double b);

struct ErgodicCheckRow {
    double eps;
    double oscillatory;
    double averaged;
    double error;  // |oscillatory - averaged|
    double bound;  // C eps + 2 quadrature tolerance
    double error_over_eps;
    bool pass;
};

struct ErgodicCheck {
    double constant;
    std::vector<ErgodicCheckRow> rows;
    bool all_pass = true;
};

ErgodicCheck verify_ergodic_bound(const Oscilland& F, double a, double b,
                                  std::span<const double> eps_list);

}  // namespace hj1d
