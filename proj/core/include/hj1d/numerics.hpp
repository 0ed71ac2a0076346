#pragma once

// Small header-only numerics kit shared by the solver modules: adaptive
// Gauss-Kronrod quadrature, bracketed root finding and golden-section
// minimization. Everything is deterministic; no global state.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace hj1d::num {

struct IntegrandError : std::runtime_error {
    double location;
    explicit IntegrandError(double x)
        : std::runtime_error("non-finite integrand sample at x = " + std::to_string(x)),
          location(x) {}
};

struct BracketError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

namespace detail {

// Gauss-Kronrod 7-15 pair on [-1,1]; nodes with even index belong to the
// embedded Gauss rule.
inline constexpr double kKronrodNodes[15] = {
    -0.991455371120813, -0.949107912342759, -0.864864423359769,
    -0.741531185599394, -0.586087235467691, -0.405845151377397,
    -0.207784955007898, 0.0,                0.207784955007898,
    0.405845151377397,  0.586087235467691,  0.741531185599394,
    0.864864423359769,  0.949107912342759,  0.991455371120813};

inline constexpr double kKronrodWeights[15] = {
    0.022935322010529, 0.063092092629979, 0.104790010322250,
    0.140653259715525, 0.169004726639267, 0.190350578064785,
    0.204432940075298, 0.209482141084728, 0.204432940075298,
    0.190350578064785, 0.169004726639267, 0.140653259715525,
    0.104790010322250, 0.063092092629979, 0.022935322010529};

inline constexpr double kGaussWeights[7] = {
    0.129484966168870, 0.279705391489277, 0.381830050505119,
    0.417959183673469, 0.381830050505119, 0.279705391489277,
    0.129484966168870};

template <class F>
inline void gk15(const F& f, double a, double b, double& kronrod, double& err) {
    const double c = 0.5 * (a + b);
    const double h = 0.5 * (b - a);
    double rk = 0.0, rg = 0.0;
    for (int i = 0; i < 15; ++i) {
        const double x = c + h * kKronrodNodes[i];
        const double v = f(x);
        if (!std::isfinite(v)) throw IntegrandError(x);
        rk += kKronrodWeights[i] * v;
        if (i % 2 == 1) rg += kGaussWeights[i / 2] * v;
    }
    kronrod = rk * h;
    err = std::abs((rk - rg) * h);
}

}  // namespace detail

// Adaptive quadrature of f over [a, b] (a <= b). The interval is first split
// at the supplied breakpoints and into pieces no wider than max_panel; after
// that the segment with the largest embedded error estimate is bisected until
// the summed error meets abs_tol (worst-first refinement, which stays linear
// even for integrable endpoint singularities). Throws IntegrandError on a
// non-finite sample.
template <class F>
double integrate(const F& f, double a, double b, double abs_tol,
                 std::span<const double> breakpoints = {},
                 double max_panel = std::numeric_limits<double>::infinity()) {
    if (!(a <= b)) throw std::invalid_argument("integrate: requires a <= b");
    if (a == b) return 0.0;

    std::vector<double> edges;
    edges.push_back(a);
    for (double p : breakpoints)
        if (p > a && p < b) edges.push_back(p);
    edges.push_back(b);
    std::sort(edges.begin(), edges.end());
    edges.erase(std::unique(edges.begin(), edges.end()), edges.end());

    struct Seg {
        double a, b, val, err;
        bool operator<(const Seg& o) const { return err < o.err; }
    };
    std::vector<Seg> heap;
    auto push_seg = [&](double lo, double hi) {
        Seg s{lo, hi, 0.0, 0.0};
        detail::gk15(f, lo, hi, s.val, s.err);
        // segments at resolution limit no longer participate in refinement
        if (hi - lo <= 1e-14 * (1.0 + std::abs(lo))) s.err = 0.0;
        heap.push_back(s);
        std::push_heap(heap.begin(), heap.end());
        return s;
    };

    double total = 0.0, total_err = 0.0;
    for (std::size_t i = 0; i + 1 < edges.size(); ++i) {
        const double lo = edges[i], hi = edges[i + 1];
        const double w = hi - lo;
        int n = 1;
        if (std::isfinite(max_panel) && w > max_panel)
            n = static_cast<int>(std::ceil(w / max_panel));
        for (int k = 0; k < n; ++k) {
            const Seg s = push_seg(lo + w * k / n, lo + w * (k + 1) / n);
            total += s.val;
            total_err += s.err;
        }
    }

    constexpr long kMaxSplits = 200000;
    long splits = 0;
    while (total_err > abs_tol && !heap.empty() && splits < kMaxSplits) {
        std::pop_heap(heap.begin(), heap.end());
        const Seg s = heap.back();
        heap.pop_back();
        if (s.err == 0.0) break;  // nothing refinable is left
        total -= s.val;
        total_err -= s.err;
        const double m = 0.5 * (s.a + s.b);
        const Seg l = push_seg(s.a, m);
        total += l.val;
        total_err += l.err;
        const Seg r = push_seg(m, s.b);
        total += r.val;
        total_err += r.err;
        ++splits;
    }
    return total;
}

// Brent's method on a bracketing interval [a, b] with f(a) f(b) <= 0.
template <class F>
double find_root(const F& f, double a, double b, double xtol = 1e-14, int maxit = 200) {
    double fa = f(a), fb = f(b);
    if (fa == 0.0) return a;
    if (fb == 0.0) return b;
    if (fa * fb > 0.0) throw BracketError("find_root: root not bracketed");

    double c = a, fc = fa, d = b - a, e = d;
    for (int it = 0; it < maxit; ++it) {
        if (std::abs(fc) < std::abs(fb)) {
            a = b; b = c; c = a;
            fa = fb; fb = fc; fc = fa;
        }
        const double tol1 = 2.0 * std::numeric_limits<double>::epsilon() * std::abs(b) + 0.5 * xtol;
        const double xm = 0.5 * (c - b);
        if (std::abs(xm) <= tol1 || fb == 0.0) return b;
        if (std::abs(e) >= tol1 && std::abs(fa) > std::abs(fb)) {
            double p, q, r;
            const double s = fb / fa;
            if (a == c) {
                p = 2.0 * xm * s;
                q = 1.0 - s;
            } else {
                q = fa / fc;
                r = fb / fc;
                p = s * (2.0 * xm * q * (q - r) - (b - a) * (r - 1.0));
                q = (q - 1.0) * (r - 1.0) * (s - 1.0);
            }
            if (p > 0.0) q = -q;
            p = std::abs(p);
            if (2.0 * p < std::min(3.0 * xm * q - std::abs(tol1 * q), std::abs(e * q))) {
                e = d;
                d = p / q;
            } else {
                d = xm;
                e = d;
            }
        } else {
            d = xm;
            e = d;
        }
        a = b;
        fa = fb;
        b += (std::abs(d) > tol1) ? d : (xm > 0 ? tol1 : -tol1);
        fb = f(b);
        if ((fb > 0) == (fc > 0)) {
            c = a;
            fc = fa;
            d = b - a;
            e = d;
        }
    }
    return b;
}

// Expand [lo, hi] to the right until pred(hi) holds; pred must be monotone.
template <class P>
double expand_until(const P& pred, double hi0, double cap = 1e300) {
    double hi = hi0;
    while (!pred(hi)) {
        hi *= 2.0;
        if (hi > cap) throw BracketError("expand_until: predicate never satisfied");
    }
    return hi;
}

struct MinResult {
    double x;
    double value;
};

// Golden-section minimization on [a, b]; f is assumed unimodal on the
// bracket (callers provide a seed scan for global coverage).
template <class F>
MinResult golden_min(const F& f, double a, double b, double xtol = 1e-9) {
    constexpr double phi = 0.618033988749894848;
    double x1 = b - phi * (b - a);
    double x2 = a + phi * (b - a);
    double f1 = f(x1), f2 = f(x2);
    while (b - a > xtol) {
        if (f1 <= f2) {
            b = x2;
            x2 = x1; f2 = f1;
            x1 = b - phi * (b - a);
            f1 = f(x1);
        } else {
            a = x1;
            x1 = x2; f1 = f2;
            x2 = a + phi * (b - a);
            f2 = f(x2);
        }
    }
    return (f1 <= f2) ? MinResult{x1, f1} : MinResult{x2, f2};
}

}  // namespace hj1d::num
