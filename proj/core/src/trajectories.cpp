#include "hj1d/trajectories.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "hj1d/numerics.hpp"

namespace hj1d {

// ---------------------------------------------------------------------------
// InitialData

InitialData InitialData::constant(double c) {
    InitialData d;
    d.kind_ = InitialDataKind::constant;
    d.c_ = c;
    d.lip_ = 0.0;
    d.sup_ = std::abs(c);
    return d;
}

InitialData InitialData::clamp_ramp() {
    InitialData d;
    d.kind_ = InitialDataKind::clamp_ramp;
    d.lip_ = 1.0;
    d.sup_ = 1.0;
    return d;
}

InitialData InitialData::cone(double slope, double cap) {
    if (!(cap > 0.0)) throw std::invalid_argument("cone initial data requires cap > 0");
    InitialData d;
    d.kind_ = InitialDataKind::cone;
    d.slope_ = slope;
    d.cap_ = cap;
    d.lip_ = std::abs(slope);
    d.sup_ = std::abs(slope) * cap;
    return d;
}

InitialData InitialData::custom(std::function<double(double)> f, double lipschitz,
                                double sup_norm) {
    InitialData d;
    d.kind_ = InitialDataKind::custom;
    d.f_ = std::move(f);
    d.lip_ = lipschitz;
    d.sup_ = sup_norm;
    return d;
}

double InitialData::value(double x) const {
    switch (kind_) {
        case InitialDataKind::constant: return c_;
        case InitialDataKind::clamp_ramp: return -std::clamp(x, -1.0, 1.0);
        case InitialDataKind::cone: return slope_ * std::min(std::abs(x), cap_);
        case InitialDataKind::custom: return f_(x);
    }
    return 0.0;
}

// ---------------------------------------------------------------------------
// Euler-Lagrange integration (conserved first-order form)

namespace {

struct Rk4Run {
    double end = 0.0;
    std::vector<double> s, eta, eta_dot;
};

template <class F>
Rk4Run rk4(const F& f, double eta0, double s_end, double h, bool store) {
    Rk4Run run;
    const long n = std::max(1L, static_cast<long>(std::ceil(s_end / h)));
    const double dt = s_end / static_cast<double>(n);
    const long stride = std::max(1L, n / 8192);
    double eta = eta0;
    if (store) {
        run.s.push_back(0.0);
        run.eta.push_back(eta);
        run.eta_dot.push_back(f(eta));
    }
    for (long k = 0; k < n; ++k) {
        const double k1 = f(eta);
        const double k2 = f(eta + 0.5 * dt * k1);
        const double k3 = f(eta + 0.5 * dt * k2);
        const double k4 = f(eta + dt * k3);
        eta += dt / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
        if (store && ((k + 1) % stride == 0 || k + 1 == n)) {
            run.s.push_back(dt * static_cast<double>(k + 1));
            run.eta.push_back(eta);
            run.eta_dot.push_back(f(eta));
        }
    }
    run.end = eta;
    return run;
}

}  // namespace

EnergyPath integrate_el(const Problem& pb, const Query& q, double r, int branch) {
    if (!(r > 0.0))
        throw std::domain_error("integrate_el: requires r > 0 (use separatrix paths otherwise)");
    q.validate(pb.window);
    const double eps = q.eps;
    auto rhs = [&](double eta) {
        return pb.ham.velocity(branch, r - pb.pot.value(eps * eta, eta));
    };
    const double s_end = q.t0 / eps;

    EnergyPath path;
    path.branch = branch;
    path.energy = r;
    path.eps = eps;
    path.start = q.x0 / eps;

    if (q.t0 == 0.0) {
        path.end = path.start;
        path.s = {0.0};
        path.eta = {path.start};
        path.eta_dot = {rhs(path.start)};
        path.drift = 0.0;
        return path;
    }

    double h = std::min(eps, 1.0) / 64.0;
    double gap = std::numeric_limits<double>::infinity();
    for (int attempt = 0; attempt < 5; ++attempt) {
        const double e1 = rk4(rhs, path.start, s_end, h, false).end;
        const double e2 = rk4(rhs, path.start, s_end, 0.5 * h, false).end;
        gap = eps * std::abs(e1 - e2);
        if (gap <= 1e-8) break;
        h *= 0.5;
    }
    if (gap > 1e-6)
        throw TrajectoryError("integrate_el: endpoint did not stabilize under step halving");

    auto run = rk4(rhs, path.start, s_end, 0.5 * h, true);
    path.end = run.end;
    path.s = std::move(run.s);
    path.eta = std::move(run.eta);
    path.eta_dot = std::move(run.eta_dot);
    path.step = 0.5 * h;
    path.richardson_gap = gap;
    path.drift = energy_drift(pb, path);
    return path;
}

double energy_drift(const Problem& pb, const EnergyPath& path) {
    double worst = 0.0;
    for (std::size_t k = 0; k < path.eta.size(); ++k) {
        const double v = pb.pot.value(path.eps * path.eta[k], path.eta[k]);
        const double h = pb.ham.value(pb.ham.legendre_slope(path.eta_dot[k]));
        worst = std::max(worst, std::abs(h + v - path.energy));
    }
    return worst;
}

double el_residual(const Problem& pb, const EnergyPath& path) {
    double worst = 0.0;
    for (std::size_t k = 1; k + 1 < path.eta.size(); ++k) {
        const double ds = path.s[k + 1] - path.s[k - 1];
        if (ds <= 0.0) continue;
        const double acc = (path.eta_dot[k + 1] - path.eta_dot[k - 1]) / ds;
        const double x = path.eps * path.eta[k];
        const double y = path.eta[k];
        const double res = pb.ham.legendre_curvature(path.eta_dot[k]) * acc +
                           path.eps * pb.pot.dx(x, y) + pb.pot.dy(x, y);
        worst = std::max(worst, std::abs(res));
    }
    return worst;
}

// ---------------------------------------------------------------------------
// Endpoint marching (quadrature route)

namespace {

// Sorted offsets in [0,1) where the y-section of V may kink; marching
// segments never straddle them.
std::vector<double> cell_offsets(const Potential& pot) {
    std::vector<double> off{0.0};
    for (double b : pot.y_breakpoints())
        if (b > 0.0 && b < 1.0) off.push_back(b);
    std::sort(off.begin(), off.end());
    off.erase(std::unique(off.begin(), off.end()), off.end());
    return off;
}

double next_edge(const std::vector<double>& off, double z, double eps, int dir) {
    const double t = z / eps;
    const double base = std::floor(t);
    const double frac = t - base;
    const double tiny = 1e-12;
    if (dir > 0) {
        for (double o : off)
            if (o > frac + tiny) return eps * (base + o);
        return eps * (base + 1.0 + off.front());
    }
    for (auto it = off.rbegin(); it != off.rend(); ++it)
        if (*it < frac - tiny) return eps * (base + *it);
    return eps * (base - 1.0 + off.back());
}

struct MarchIntegrands {
    // time density and momentum magnitude as functions of the macro variable
    std::function<double(double)> inv_speed;
    std::function<double(double)> momentum;
};

MarchResult march(const MarchIntegrands& g, double x0, double t0, int dir, double seg_tol,
                  double travel_cap, const std::function<double(double)>& next,
                  double first_panel_hint) {
    MarchResult out;
    if (t0 == 0.0) {
        out.x_end = x0;
        return out;
    }
    double z = x0;
    double tau = 0.0;
    double act = 0.0;
    while (true) {
        if (std::abs(z - x0) > travel_cap)
            throw TrajectoryError("endpoint march overran its a-priori bracket");
        const double zn = next(z);
        const double lo = std::min(z, zn), hi = std::max(z, zn);
        const double dtau = num::integrate(g.inv_speed, lo, hi, seg_tol, {}, first_panel_hint);
        if (tau + dtau >= t0) {
            const double deficit = t0 - tau;
            auto resid = [&](double m) {
                const double a = dir > 0 ? z : m;
                const double b = dir > 0 ? m : z;
                return num::integrate(g.inv_speed, a, b, 0.1 * seg_tol, {}, first_panel_hint) -
                       deficit;
            };
            const double m = num::find_root(resid, lo, hi, 1e-14 * (1.0 + std::abs(hi)));
            out.x_end = m;
            out.time_residual = std::abs(resid(m));
            const double a = dir > 0 ? z : m;
            const double b = dir > 0 ? m : z;
            act += num::integrate(g.momentum, a, b, seg_tol, {}, first_panel_hint);
            out.action = act;
            return out;
        }
        tau += dtau;
        act += num::integrate(g.momentum, lo, hi, seg_tol, {}, first_panel_hint);
        z = zn;
    }
}

}  // namespace

MarchResult oscillatory_march(const Problem& pb, double x0, double t0, double eps, double r,
                              int branch) {
    if (!(r > 0.0)) throw std::domain_error("oscillatory_march: requires r > 0");
    const int dir = branch == 1 ? +1 : -1;
    MarchIntegrands g;
    g.inv_speed = [&, r, branch, eps](double z) {
        return 1.0 / std::abs(pb.ham.velocity(branch, r - pb.pot.value(z, z / eps)));
    };
    g.momentum = [&, r, branch, eps](double z) {
        return std::abs(pb.ham.branch_inverse(branch, r - pb.pot.value(z, z / eps)));
    };
    const auto off = cell_offsets(pb.pot);
    auto next = [&, eps, dir](double z) { return next_edge(off, z, eps, dir); };
    const double vmax = std::abs(pb.ham.velocity(branch, r + pb.pot.sup_norm()));
    const double travel_cap = t0 * vmax + eps + 1.0;
    const double seg_tol = 1e-12 * std::max(1.0, t0);
    return march(g, x0, t0, dir, seg_tol, travel_cap, next, eps / 8.0);
}

double oscillatory_endpoint(const Problem& pb, const Query& q, double r, int branch) {
    q.validate(pb.window);
    return oscillatory_march(pb, q.x0, q.t0, q.eps, r, branch).x_end;
}

MarchResult averaged_march(const Problem& pb, double x0, double t0, double r, int branch) {
    if (!(r > 0.0)) throw std::domain_error("averaged_march: requires r > 0");
    const int dir = branch == 1 ? +1 : -1;
    const auto& breaks = pb.pot.y_breakpoints();
    MarchIntegrands g;
    g.inv_speed = [&, r, branch](double x) {
        auto f = [&](double y) {
            return 1.0 / std::abs(pb.ham.velocity(branch, r - pb.pot.value(x, y)));
        };
        return num::integrate(f, 0.0, 1.0, 1e-12, breaks, 0.25);
    };
    g.momentum = [&, r, branch](double x) {
        auto f = [&](double y) {
            return std::abs(pb.ham.branch_inverse(branch, r - pb.pot.value(x, y)));
        };
        return num::integrate(f, 0.0, 1.0, 1e-12, breaks, 0.25);
    };
    const double step = 0.25;
    auto next = [step, dir](double x) { return x + dir * step; };
    const double vmax = std::abs(pb.ham.velocity(branch, r + pb.pot.sup_norm()));
    const double travel_cap = t0 * vmax + 2.0;
    const double seg_tol = 1e-12 * std::max(1.0, t0);
    return march(g, x0, t0, dir, seg_tol, travel_cap, next, step);
}

double effective_endpoint(const Problem& pb, const Query& q, double r, int branch) {
    q.validate(pb.window);
    return averaged_march(pb, q.x0, q.t0, r, branch).x_end;
}

double oscillatory_elapsed(const Problem& pb, double from, double to, double eps, double r,
                           int branch) {
    if (!(r > 0.0)) throw std::domain_error("oscillatory_elapsed: requires r > 0");
    auto f = [&](double z) {
        return 1.0 / std::abs(pb.ham.velocity(branch, r - pb.pot.value(z, z / eps)));
    };
    const double lo = std::min(from, to), hi = std::max(from, to);
    std::vector<double> breaks;
    for (double b : pb.pot.y_breakpoints()) {
        const long klo = static_cast<long>(std::floor(lo / eps)) - 1;
        const long khi = static_cast<long>(std::ceil(hi / eps)) + 1;
        for (long k = klo; k <= khi; ++k) breaks.push_back(eps * (static_cast<double>(k) + b));
    }
    std::sort(breaks.begin(), breaks.end());
    return num::integrate(f, lo, hi, 1e-12 * std::max(1.0, hi - lo), breaks, eps / 8.0);
}

// ---------------------------------------------------------------------------
// Separatrices

Separatrix separatrix_paths(const Problem& pb, const Query& q) {
    q.validate(pb.window);
    const double eps = q.eps;
    const double y_start = q.x0 / eps;
    const double scale = 1.0 + pb.pot.sup_norm();

    Separatrix sep;
    if (pb.pot.value(q.x0, y_start) >= -1e-12 * scale) {
        sep.stationary = true;
        sep.limit_hi = sep.limit_lo = y_start;
        sep.s = {0.0};
        sep.plus = {y_start};
        sep.minus = {y_start};
        sep.plus_end = sep.minus_end = y_start;
        return sep;
    }

    const auto& zeros = pb.pot.y_zeros();
    if (zeros.empty())
        throw TrajectoryError("separatrix_paths: potential has no zero in the cell (A1 violated)");
    double hi = std::numeric_limits<double>::infinity();
    double lo = -std::numeric_limits<double>::infinity();
    for (double z : zeros) {
        const double above = z + std::ceil(y_start - z);
        const double below = z + std::floor(y_start - z);
        hi = std::min(hi, above >= y_start ? above : above + 1.0);
        lo = std::max(lo, below <= y_start ? below : below - 1.0);
    }
    sep.limit_hi = hi;
    sep.limit_lo = lo;

    auto rhs_plus = [&](double y) {
        return pb.ham.velocity(1, std::max(0.0, -pb.pot.value(eps * y, y)));
    };
    auto rhs_minus = [&](double y) {
        return pb.ham.velocity(2, std::max(0.0, -pb.pot.value(eps * y, y)));
    };

    const double s_end = q.t0 / eps;
    const double h = std::min(eps, 1.0) / 64.0;
    const long n = std::max(1L, static_cast<long>(std::ceil(s_end / h)));
    const double dt = s_end / static_cast<double>(n);
    const long stride = std::max(1L, n / 8192);

    double yp = y_start, ym = y_start;
    bool done_p = false, done_m = false;
    sep.s.push_back(0.0);
    sep.plus.push_back(yp);
    sep.minus.push_back(ym);
    for (long k = 0; k < n; ++k) {
        if (!done_p) {
            const double k1 = rhs_plus(yp);
            const double k2 = rhs_plus(std::min(hi, yp + 0.5 * dt * k1));
            const double k3 = rhs_plus(std::min(hi, yp + 0.5 * dt * k2));
            const double k4 = rhs_plus(std::min(hi, yp + dt * k3));
            yp = std::min(hi, yp + dt / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4));
            if (hi - yp < 1e-9) done_p = true;
        }
        if (!done_m) {
            const double k1 = rhs_minus(ym);
            const double k2 = rhs_minus(std::max(lo, ym + 0.5 * dt * k1));
            const double k3 = rhs_minus(std::max(lo, ym + 0.5 * dt * k2));
            const double k4 = rhs_minus(std::max(lo, ym + dt * k3));
            ym = std::max(lo, ym + dt / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4));
            if (ym - lo < 1e-9) done_m = true;
        }
        if ((k + 1) % stride == 0 || k + 1 == n) {
            sep.s.push_back(dt * static_cast<double>(k + 1));
            sep.plus.push_back(yp);
            sep.minus.push_back(ym);
        }
        if (done_p && done_m) break;
    }
    sep.plus_end = yp;
    sep.minus_end = ym;
    return sep;
}

double separatrix_time_to(const Problem& pb, const Query& q, double delta) {
    const auto sep = separatrix_paths(pb, q);
    if (sep.stationary)
        throw TrajectoryError("separatrix_time_to: start lies on the zero line");
    const double eps = q.eps;
    const double y_start = q.x0 / eps;
    const double target = sep.limit_hi - delta;
    if (target <= y_start) return 0.0;
    auto f = [&](double y) {
        return 1.0 / pb.ham.velocity(1, std::max(0.0, -pb.pot.value(eps * y, y)));
    };
    std::vector<double> breaks;
    for (double b : pb.pot.y_breakpoints())
        for (long k = -2; k <= 2; ++k)
            breaks.push_back(b + static_cast<double>(k) + std::floor(y_start));
    std::sort(breaks.begin(), breaks.end());
    return num::integrate(f, y_start, target, 1e-10, breaks, 0.05);
}

}  // namespace hj1d
