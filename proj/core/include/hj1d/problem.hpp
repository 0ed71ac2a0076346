#pragma once

// Problem bundle shared by every evaluator: Hamiltonian, potential, initial
// datum, report window. A Query pins one probe (x0, t0) and one oscillation
// period eps.

#include <functional>
#include <stdexcept>

#include "hj1d/hamiltonian.hpp"
#include "hj1d/potential.hpp"

namespace hj1d {

enum class InitialDataKind { constant, clamp_ramp, cone, custom };

class InitialData {
public:
    // u0(x) = c
    static InitialData constant(double c);
    // u0(x) = -clamp(x, -1, 1); Lipschitz constant 1, bounded by 1
    static InitialData clamp_ramp();
    // u0(x) = slope * min(|x|, cap); bounded cone
    static InitialData cone(double slope, double cap);
    static InitialData custom(std::function<double(double)> f, double lipschitz, double sup_norm);

    double value(double x) const;
    double lipschitz() const { return lip_; }
    double sup_norm() const { return sup_; }
    InitialDataKind kind() const { return kind_; }

    // Defaults to u0 = 0.
    InitialData() = default;

private:
    InitialDataKind kind_ = InitialDataKind::constant;
    double c_ = 0.0;
    double slope_ = 0.0, cap_ = 0.0;
    double lip_ = 0.0, sup_ = 0.0;
    std::function<double(double)> f_;
};

struct Window {
    double R = 1.0;  // probe half-width: x0 in [-R, R]
    double T = 1.0;  // horizon: t0 in [0, T]
};

struct Problem {
    Hamiltonian ham;
    Potential pot;
    InitialData u0;
    Window window;
};

struct Query {
    double x0 = 0.0;
    double t0 = 1.0;
    double eps = 0.125;

    void validate(const Window& w) const {
        if (!(eps > 0.0 && eps < 1.0))
            throw std::invalid_argument("query: eps must lie in (0,1)");
        if (!(t0 >= 0.0 && t0 <= w.T) || !(x0 >= -w.R && x0 <= w.R))
            throw std::invalid_argument("query: probe outside the report window");
    }
};

}  // namespace hj1d
