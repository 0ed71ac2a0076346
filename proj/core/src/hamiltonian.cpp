#include "hj1d/hamiltonian.hpp"

#include <algorithm>
#include <cmath>

#include "hj1d/numerics.hpp"

namespace hj1d {

namespace {
constexpr double kResidualTol = 1e-12;

double sgn(double x) { return x < 0 ? -1.0 : 1.0; }
}  // namespace

Hamiltonian Hamiltonian::quadratic(double grad_bound) {
    Hamiltonian m;
    m.kind_ = HamiltonianKind::quadratic;
    m.grad_bound_ = grad_bound;
    m.fit_growth_constant();
    return m;
}

Hamiltonian Hamiltonian::power(double gamma, double grad_bound) {
    if (!(gamma >= 2.0))
        throw ModelError("power Hamiltonian requires exponent >= 2, got " + std::to_string(gamma));
    Hamiltonian m;
    m.kind_ = HamiltonianKind::power;
    m.gamma_ = gamma;
    m.grad_bound_ = grad_bound;
    m.fit_growth_constant();
    return m;
}

Hamiltonian Hamiltonian::custom(CustomHamiltonian fns, double grad_bound) {
    Hamiltonian m;
    m.kind_ = HamiltonianKind::custom;
    m.grad_bound_ = grad_bound;
    m.fns_ = std::move(fns);
    m.validate_custom();
    m.fit_growth_constant();
    return m;
}

void Hamiltonian::validate_custom() const {
    if (!fns_.h || !fns_.dh || !fns_.d2h)
        throw ModelError("custom Hamiltonian requires H, H' and H''");
    if (std::abs(fns_.h(0.0)) > 1e-10 || std::abs(fns_.dh(0.0)) > 1e-10)
        throw ModelError("custom Hamiltonian must satisfy H(0) = H'(0) = 0");
    const double m = 2.0 * grad_bound_;
    const int n = 401;
    double prev_slope = fns_.dh(-m);
    for (int i = 0; i <= n; ++i) {
        const double p = -m + 2.0 * m * i / n;
        if (fns_.h(p) < -1e-12)
            throw ModelError("custom Hamiltonian negative at p = " + std::to_string(p));
        if (p != 0.0 && fns_.d2h(p) <= 0.0)
            throw ModelError("non-convex sample detected at p = " + std::to_string(p));
        if (i > 0) {
            const double s = fns_.dh(p);
            if (s < prev_slope - 1e-12)
                throw ModelError("H' not increasing at p = " + std::to_string(p));
            prev_slope = s;
        }
    }
}

void Hamiltonian::fit_growth_constant() {
    const double m = 2.0 * grad_bound_;
    const int n = 2048;
    double k0 = 0.0;
    for (int i = 0; i <= n; ++i) {
        const double p = -m + 2.0 * m * i / n;
        if (p == 0.0) continue;
        const double gap = std::abs(value(p) - 0.5 * p * p);
        k0 = std::max(k0, gap / std::min(1.0, std::abs(p)));
    }
    k0_ = k0;
}

double Hamiltonian::value(double p) const {
    switch (kind_) {
        case HamiltonianKind::quadratic: return 0.5 * p * p;
        case HamiltonianKind::power: return std::pow(std::abs(p), gamma_);
        case HamiltonianKind::custom: return fns_.h(p);
    }
    return 0.0;
}

double Hamiltonian::slope(double p) const {
    switch (kind_) {
        case HamiltonianKind::quadratic: return p;
        case HamiltonianKind::power:
            return p == 0.0 ? 0.0 : gamma_ * std::pow(std::abs(p), gamma_ - 1.0) * sgn(p);
        case HamiltonianKind::custom: return fns_.dh(p);
    }
    return 0.0;
}

double Hamiltonian::curvature(double p) const {
    switch (kind_) {
        case HamiltonianKind::quadratic: return 1.0;
        case HamiltonianKind::power:
            if (p == 0.0) return gamma_ == 2.0 ? 2.0 : 0.0;
            return gamma_ * (gamma_ - 1.0) * std::pow(std::abs(p), gamma_ - 2.0);
        case HamiltonianKind::custom: return fns_.d2h(p);
    }
    return 0.0;
}

double Hamiltonian::legendre(double v) const {
    switch (kind_) {
        case HamiltonianKind::quadratic: return 0.5 * v * v;
        case HamiltonianKind::power: {
            // maximizer p* solves gamma p^(gamma-1) = |v|
            const double av = std::abs(v);
            if (av == 0.0) return 0.0;
            return (gamma_ - 1.0) * std::pow(av / gamma_, gamma_ / (gamma_ - 1.0));
        }
        case HamiltonianKind::custom: {
            const double p = legendre_slope(v);
            return p * v - fns_.h(p);
        }
    }
    return 0.0;
}

double Hamiltonian::legendre_slope(double v) const {
    switch (kind_) {
        case HamiltonianKind::quadratic: return v;
        case HamiltonianKind::power: {
            if (v == 0.0) return 0.0;
            return sgn(v) * std::pow(std::abs(v) / gamma_, 1.0 / (gamma_ - 1.0));
        }
        case HamiltonianKind::custom: {
            // solve H'(p) = v; H' is strictly increasing
            if (v == 0.0) return 0.0;
            const double av = std::abs(v);
            const double s = sgn(v);
            auto g = [&](double p) { return fns_.dh(s * p) * s - av; };
            double hi = num::expand_until([&](double p) { return g(p) >= 0.0; }, 1.0);
            double p = num::find_root(g, 0.0, hi, 1e-15 * std::max(1.0, hi));
            return s * p;
        }
    }
    return 0.0;
}

double Hamiltonian::legendre_curvature(double v) const {
    const double c = curvature(legendre_slope(v));
    if (c <= 0.0)
        throw ModelError("Legendre curvature undefined where H'' vanishes");
    return 1.0 / c;
}

double Hamiltonian::branch_inverse(int branch, double r) const {
    if (branch != 1 && branch != 2) throw std::invalid_argument("branch must be 1 or 2");
    if (r < 0.0) throw std::domain_error("branch_inverse: energy must be nonnegative");
    const double s = branch == 1 ? 1.0 : -1.0;
    if (r == 0.0) return 0.0;
    switch (kind_) {
        case HamiltonianKind::quadratic: return s * std::sqrt(2.0 * r);
        case HamiltonianKind::power: return s * std::pow(r, 1.0 / gamma_);
        case HamiltonianKind::custom: {
            auto g = [&](double p) { return fns_.h(s * p) - r; };
            double hi = num::expand_until([&](double p) { return g(p) >= 0.0; }, 1.0);
            double p = num::find_root(g, 0.0, hi, 1e-15 * std::max(1.0, hi));
            if (std::abs(fns_.h(s * p) - r) > kResidualTol * std::max(1.0, r))
                throw ModelError("branch inverse residual above tolerance at r = " +
                                 std::to_string(r));
            return s * p;
        }
    }
    return 0.0;
}

double Hamiltonian::velocity(int branch, double r) const {
    switch (kind_) {
        case HamiltonianKind::quadratic: {
            if (r < 0.0) throw std::domain_error("velocity: energy must be nonnegative");
            const double g = std::sqrt(2.0 * r);
            return branch == 1 ? g : -g;
        }
        case HamiltonianKind::power: {
            if (r < 0.0) throw std::domain_error("velocity: energy must be nonnegative");
            const double g = gamma_ * std::pow(r, 1.0 - 1.0 / gamma_);
            return branch == 1 ? g : -g;
        }
        case HamiltonianKind::custom: return slope(branch_inverse(branch, r));
    }
    return 0.0;
}

double Hamiltonian::velocity_slope(int branch, double r) const {
    const double p = branch_inverse(branch, r);
    const double hp = slope(p);
    if (hp == 0.0)
        throw std::domain_error("velocity_slope undefined at zero energy");
    return curvature(p) / hp;
}

double Hamiltonian::max_slope(double p) const {
    return std::max(std::abs(slope(p)), std::abs(slope(-p)));
}

}  // namespace hj1d
