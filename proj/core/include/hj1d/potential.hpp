#pragma once

// Potentials V(x,y), 1-periodic in the fast variable y. Admissible problems
// have max V = 0 attained along an x-independent zero line y = y0; that is
// audited, not silently enforced. A constant shift c0 rides along separately
// and is re-applied to solver outputs.
//
// Built-in y-profiles:
//   cos2pi_minus1  b(y) = cos(2 pi y) - 1
//   tent_prop43    b(y) = -min(1, 6 dist(y, 1/2))   (dist on the unit torus)
//   zero           b(y) = 0
//   table          periodic linear interpolation of uniform samples
// and x-profiles a(x) in { 1, constant c > 0, 2 + sin x }.

#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

namespace hj1d {

enum class PotentialAKind { one, constant, two_plus_sin };
enum class PotentialBKind { cos2pi_minus1, tent_prop43, zero, table };

class Potential {
public:
    struct Custom {
        std::function<double(double, double)> v, vx, vy;
        std::vector<double> y_zeros;        // zeros of the y-section in [0,1), if known
        std::vector<double> y_breakpoints;  // kinks for quadrature, if any
        double x_lo = -16.0, x_hi = 16.0;   // range used to sample metadata
    };

    // V(x,y) = a(x) * (scale * b(y) + offset)
    static Potential separable(PotentialAKind a_kind, PotentialBKind b_kind,
                               double a_value = 1.0, double scale = 1.0, double offset = 0.0,
                               std::vector<double> b_samples = {});
    static Potential zero();
    static Potential custom(Custom spec);

    double value(double x, double y) const;
    double dx(double x, double y) const;
    double dy(double x, double y) const;

    bool separable_form() const { return separable_; }
    bool x_independent() const { return x_independent_; }

    // Separable accessors (throw if not separable).
    double a(double x) const;
    double da(double x) const;
    double b(double y) const;  // includes scale and offset
    double db(double y) const;
    double a_min() const;
    double a_max() const;

    double sup_norm() const { return sup_norm_; }    // max |V|
    double max_value() const { return max_value_; }  // max V (0 when admissible)
    double min_b() const { return b_min_; }
    double max_b() const { return b_max_; }

    // A zero of the y-section (NaN when none was found).
    double y0() const { return y0_; }
    const std::vector<double>& y_zeros() const { return y_zeros_; }
    const std::vector<double>& y_breakpoints() const { return y_breakpoints_; }

    double c0_shift() const { return c0_shift_; }
    void set_c0_shift(double c0) { c0_shift_ = c0; }

    // Defaults to the zero potential.
    Potential() { finalize_metadata(); }

private:
    void finalize_metadata();

    bool separable_ = true;
    bool x_independent_ = true;
    PotentialAKind a_kind_ = PotentialAKind::one;
    PotentialBKind b_kind_ = PotentialBKind::zero;
    double a_value_ = 1.0;
    double scale_ = 1.0;
    double offset_ = 0.0;
    std::vector<double> b_samples_;
    Custom custom_;

    double sup_norm_ = 0.0;
    double max_value_ = 0.0;
    double b_min_ = 0.0, b_max_ = 0.0;
    double y0_ = 0.0;
    double c0_shift_ = 0.0;
    std::vector<double> y_zeros_;
    std::vector<double> y_breakpoints_;
};

}  // namespace hj1d
