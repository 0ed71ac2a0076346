#pragma once

// Strictly convex Hamiltonians H(p) with H(0) = H'(0) = 0, their Legendre
// transforms and the two monotone branch maps used throughout the solver:
//
//   branch_inverse(i, r) : H restricted to [0,inf) (i=1) or (-inf,0] (i=2),
//                          inverted at energy r >= 0
//   velocity(i, r)       : H' evaluated on that branch inverse; this is the
//                          signed speed of an energy-r trajectory.
//
// Quadratic and power kinds use closed forms; custom Hamiltonians fall back
// to safeguarded root finding with residual tolerance 1e-12.

#include <functional>
#include <stdexcept>
#include <string>

namespace hj1d {

enum class HamiltonianKind { quadratic, power, custom };

struct CustomHamiltonian {
    std::function<double(double)> h;    // H(p)
    std::function<double(double)> dh;   // H'(p)
    std::function<double(double)> d2h;  // H''(p)
};

// Raised when a requested Hamiltonian fails validation (non-convex sample,
// power exponent below 2, ...). The message carries the witness point.
struct ModelError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

class Hamiltonian {
public:
    // Default a-priori Lipschitz bound on the solution gradient; callers with
    // sharper information can pass their own.
    static constexpr double kDefaultGradBound = 8.0;

    static Hamiltonian quadratic(double grad_bound = kDefaultGradBound);
    static Hamiltonian power(double gamma, double grad_bound = kDefaultGradBound);
    static Hamiltonian custom(CustomHamiltonian fns, double grad_bound = kDefaultGradBound);

    HamiltonianKind kind() const { return kind_; }
    double exponent() const { return gamma_; }
    double grad_bound() const { return grad_bound_; }

    // Smallest sampled K0 with
    //   max(p^2/2 - K0, p^2/2 - K0 |p|) <= H(p) <= min(p^2/2 + K0, p^2/2 + K0 |p|)
    // on the working range [-2M, 2M].
    double growth_constant() const { return k0_; }

    double value(double p) const;      // H(p)
    double slope(double p) const;      // H'(p)
    double curvature(double p) const;  // H''(p)

    double legendre(double v) const;            // L(v) = sup_p (p v - H(p))
    double legendre_slope(double v) const;      // L'(v), the maximizing p
    double legendre_curvature(double v) const;  // L''(v) = 1 / H''(L'(v))

    // branch 1: p >= 0, branch 2: p <= 0. Throws std::domain_error for r < 0.
    double branch_inverse(int branch, double r) const;
    double velocity(int branch, double r) const;
    // d/dr of velocity(i, r), equal to H''(p)/H'(p) at p = branch_inverse(i, r).
    double velocity_slope(int branch, double r) const;

    // max(|H'(p)|, |H'(-p)|); the dissipation coefficient used by monotone schemes.
    double max_slope(double p) const;

    // Defaults to the quadratic kind.
    Hamiltonian() = default;

private:
    void fit_growth_constant();
    void validate_custom() const;

    HamiltonianKind kind_ = HamiltonianKind::quadratic;
    double gamma_ = 2.0;
    double grad_bound_ = kDefaultGradBound;
    double k0_ = 0.0;
    CustomHamiltonian fns_;
};

}  // namespace hj1d
