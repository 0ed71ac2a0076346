#include "hj1d/potential.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace hj1d {

namespace {

constexpr double kPi = 3.14159265358979323846;

double wrap_unit(double y) {
    double w = y - std::floor(y);
    if (w >= 1.0) w -= 1.0;  // guards the floor rounding edge
    return w;
}

// distance from y to 1/2 on the unit torus
double dist_half(double y) {
    const double w = wrap_unit(y);
    return std::abs(w - 0.5);
}

double tent_value(double y) { return -std::min(1.0, 6.0 * dist_half(y)); }

double tent_slope(double y) {
    const double w = wrap_unit(y);
    const double d = std::abs(w - 0.5);
    if (d >= 1.0 / 6.0 || d == 0.0) return 0.0;
    return (w < 0.5) ? 6.0 : -6.0;  // b = -6(1/2 - w) left of the peak
}

double table_value(const std::vector<double>& s, double y) {
    const std::size_t n = s.size();
    const double t = wrap_unit(y) * static_cast<double>(n);
    const std::size_t i = std::min<std::size_t>(static_cast<std::size_t>(t), n - 1);
    const double frac = t - static_cast<double>(i);
    const double v0 = s[i];
    const double v1 = s[(i + 1) % n];
    return v0 + frac * (v1 - v0);
}

double table_slope(const std::vector<double>& s, double y) {
    const std::size_t n = s.size();
    const double t = wrap_unit(y) * static_cast<double>(n);
    const std::size_t i = std::min<std::size_t>(static_cast<std::size_t>(t), n - 1);
    return (s[(i + 1) % n] - s[i]) * static_cast<double>(n);
}

}  // namespace

Potential Potential::separable(PotentialAKind a_kind, PotentialBKind b_kind, double a_value,
                               double scale, double offset, std::vector<double> b_samples) {
    if (a_kind == PotentialAKind::constant && !(a_value > 0.0))
        throw std::invalid_argument("separable potential requires a(x) > 0");
    if (b_kind == PotentialBKind::table && b_samples.size() < 2)
        throw std::invalid_argument("table potential requires at least two samples");
    Potential p;
    p.separable_ = true;
    p.a_kind_ = a_kind;
    p.b_kind_ = b_kind;
    p.a_value_ = a_value;
    p.scale_ = scale;
    p.offset_ = offset;
    p.b_samples_ = std::move(b_samples);
    p.x_independent_ = (a_kind != PotentialAKind::two_plus_sin) || b_kind == PotentialBKind::zero;
    p.finalize_metadata();
    return p;
}

Potential Potential::zero() {
    return separable(PotentialAKind::one, PotentialBKind::zero);
}

Potential Potential::custom(Custom spec) {
    if (!spec.v || !spec.vx || !spec.vy)
        throw std::invalid_argument("custom potential requires V, Vx and Vy");
    Potential p;
    p.separable_ = false;
    p.x_independent_ = false;
    p.custom_ = std::move(spec);
    p.finalize_metadata();
    return p;
}

double Potential::a(double x) const {
    if (!separable_) throw std::logic_error("potential is not separable");
    switch (a_kind_) {
        case PotentialAKind::one: return 1.0;
        case PotentialAKind::constant: return a_value_;
        case PotentialAKind::two_plus_sin: return 2.0 + std::sin(x);
    }
    return 1.0;
}

double Potential::da(double x) const {
    if (!separable_) throw std::logic_error("potential is not separable");
    switch (a_kind_) {
        case PotentialAKind::one:
        case PotentialAKind::constant: return 0.0;
        case PotentialAKind::two_plus_sin: return std::cos(x);
    }
    return 0.0;
}

double Potential::a_min() const {
    return a_kind_ == PotentialAKind::two_plus_sin ? 1.0
         : a_kind_ == PotentialAKind::constant    ? a_value_
                                                  : 1.0;
}

double Potential::a_max() const {
    return a_kind_ == PotentialAKind::two_plus_sin ? 3.0
         : a_kind_ == PotentialAKind::constant    ? a_value_
                                                  : 1.0;
}

double Potential::b(double y) const {
    if (!separable_) throw std::logic_error("potential is not separable");
    double base = 0.0;
    switch (b_kind_) {
        // wrap before scaling by 2*pi so large y = x/eps keeps full precision
        case PotentialBKind::cos2pi_minus1: base = std::cos(2.0 * kPi * wrap_unit(y)) - 1.0; break;
        case PotentialBKind::tent_prop43: base = tent_value(y); break;
        case PotentialBKind::zero: base = 0.0; break;
        case PotentialBKind::table: base = table_value(b_samples_, y); break;
    }
    return scale_ * base + offset_;
}

double Potential::db(double y) const {
    if (!separable_) throw std::logic_error("potential is not separable");
    double base = 0.0;
    switch (b_kind_) {
        case PotentialBKind::cos2pi_minus1:
            base = -2.0 * kPi * std::sin(2.0 * kPi * wrap_unit(y));
            break;
        case PotentialBKind::tent_prop43: base = tent_slope(y); break;
        case PotentialBKind::zero: base = 0.0; break;
        case PotentialBKind::table: base = table_slope(b_samples_, y); break;
    }
    return scale_ * base;
}

double Potential::value(double x, double y) const {
    return separable_ ? a(x) * b(y) : custom_.v(x, y);
}

double Potential::dx(double x, double y) const {
    return separable_ ? da(x) * b(y) : custom_.vx(x, y);
}

double Potential::dy(double x, double y) const {
    return separable_ ? a(x) * db(y) : custom_.vy(x, y);
}

void Potential::finalize_metadata() {
    y_zeros_.clear();
    y_breakpoints_.clear();

    if (separable_) {
        switch (b_kind_) {
            case PotentialBKind::cos2pi_minus1:
                y_breakpoints_ = {0.0};
                break;
            case PotentialBKind::tent_prop43:
                y_breakpoints_ = {1.0 / 3.0, 0.5, 2.0 / 3.0};
                break;
            case PotentialBKind::zero:
                break;
            case PotentialBKind::table: {
                const std::size_t n = b_samples_.size();
                for (std::size_t i = 0; i < n; ++i)
                    y_breakpoints_.push_back(static_cast<double>(i) / static_cast<double>(n));
                break;
            }
        }

        // b range and zeros of the effective profile on a fine grid plus the
        // structural points above.
        std::vector<double> probe = y_breakpoints_;
        const int n = 8192;
        for (int i = 0; i < n; ++i) probe.push_back(static_cast<double>(i) / n);
        double bmin = std::numeric_limits<double>::infinity();
        double bmax = -std::numeric_limits<double>::infinity();
        for (double y : probe) {
            const double v = b(y);
            bmin = std::min(bmin, v);
            bmax = std::max(bmax, v);
        }
        b_min_ = bmin;
        b_max_ = bmax;

        if (b_kind_ == PotentialBKind::zero && offset_ == 0.0) {
            y_zeros_ = {0.0};
        } else {
            for (double y : probe)
                if (std::abs(b(y)) <= 1e-12) y_zeros_.push_back(wrap_unit(y));
            std::sort(y_zeros_.begin(), y_zeros_.end());
            y_zeros_.erase(std::unique(y_zeros_.begin(), y_zeros_.end(),
                                       [](double u, double v) { return std::abs(u - v) < 1e-9; }),
                           y_zeros_.end());
        }

        const double alo = a_min(), ahi = a_max();
        max_value_ = b_max_ >= 0.0 ? ahi * b_max_ : alo * b_max_;
        const double vmin = b_min_ <= 0.0 ? ahi * b_min_ : alo * b_min_;
        sup_norm_ = std::max(std::abs(max_value_), std::abs(vmin));
    } else {
        y_zeros_ = custom_.y_zeros;
        y_breakpoints_ = custom_.y_breakpoints;
        double vmax = -std::numeric_limits<double>::infinity();
        double vmin = std::numeric_limits<double>::infinity();
        const int nx = 128, ny = 512;
        for (int i = 0; i <= nx; ++i) {
            const double x = custom_.x_lo + (custom_.x_hi - custom_.x_lo) * i / nx;
            for (int j = 0; j < ny; ++j) {
                const double v = custom_.v(x, static_cast<double>(j) / ny);
                vmax = std::max(vmax, v);
                vmin = std::min(vmin, v);
            }
        }
        max_value_ = vmax;
        sup_norm_ = std::max(std::abs(vmax), std::abs(vmin));
        b_min_ = vmin;
        b_max_ = vmax;
    }

    y0_ = y_zeros_.empty() ? std::numeric_limits<double>::quiet_NaN() : y_zeros_.front();
}

}  // namespace hj1d
