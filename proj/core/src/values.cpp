#include "hj1d/values.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "hj1d/ergodic.hpp"
#include "hj1d/trajectories.hpp"

namespace hj1d {

namespace {

double max_h_at(const Hamiltonian& h, double p) {
    return std::max(h.value(p), h.value(-p));
}

// Breakpoints of z -> V(z, z/eps) on [lo, hi] induced by the y-kinks.
std::vector<double> macro_breaks(const Potential& pot, double lo, double hi, double eps) {
    std::vector<double> out;
    const long klo = static_cast<long>(std::floor(lo / eps)) - 1;
    const long khi = static_cast<long>(std::ceil(hi / eps)) + 1;
    for (double b : pot.y_breakpoints())
        for (long k = klo; k <= khi; ++k) {
            const double z = eps * (static_cast<double>(k) + b);
            if (z > lo && z < hi) out.push_back(z);
        }
    std::sort(out.begin(), out.end());
    return out;
}

}  // namespace

double r0_threshold(const Problem& pb) {
    const double lip = pb.u0.lipschitz();
    const double sup_v = pb.pot.sup_norm();
    const double cbar = max_h_at(pb.ham, lip) + sup_v;
    if (pb.ham.kind() == HamiltonianKind::quadratic) {
        // r = cbar + 1 + lip sqrt(2(r + ||V||)) solved in s = sqrt(2(r + ||V||))
        const double s = lip + std::sqrt(lip * lip + 2.0 * (sup_v + cbar + 1.0));
        return 0.5 * s * s - sup_v;
    }
    const double k0 = pb.ham.growth_constant();
    auto ok = [&](double r) {
        const double g = std::min(pb.ham.velocity(1, r), -pb.ham.velocity(2, r));
        return g >= 2.0 * (k0 + lip) && g * (0.5 * g - k0 - lip) >= cbar + 1.0;
    };
    double hi = num::expand_until(ok, 1.0);
    double lo = 0.0;
    for (int i = 0; i < 200 && hi - lo > 1e-12 * hi; ++i) {
        const double mid = 0.5 * (lo + hi);
        (ok(mid) ? hi : lo) = mid;
    }
    return hi;
}

Setup make_setup(const Problem& pb) {
    Setup s;
    s.lip_u0 = pb.u0.lipschitz();
    s.sup_v = pb.pot.sup_norm();
    s.cbar = max_h_at(pb.ham, s.lip_u0) + s.sup_v;
    s.r_cut = r0_threshold(pb);
    s.c0 = pb.window.T * pb.ham.velocity(1, s.r_cut + s.sup_v);
    s.c0_left = pb.window.T * std::abs(pb.ham.velocity(2, s.r_cut + s.sup_v));
    s.window = {-pb.window.R, s.c0 + pb.window.R};
    s.window_left = {-pb.window.R - s.c0_left, pb.window.R};
    return s;
}

double action_positive(const Problem& pb, const Query& q, double r, int branch) {
    if (!(r > 0.0)) throw std::domain_error("action_positive: requires r > 0");
    q.validate(pb.window);
    const auto m = oscillatory_march(pb, q.x0, q.t0, q.eps, r, branch);
    return -r * q.t0 + m.action + pb.u0.value(m.x_end);
}

double action_positive_classical(const Problem& pb, const Query& q, double r, int branch) {
    if (pb.ham.kind() != HamiltonianKind::quadratic)
        throw std::logic_error("classical action form requires the quadratic Hamiltonian");
    if (!(r > 0.0)) throw std::domain_error("action_positive_classical: requires r > 0");
    const auto m = oscillatory_march(pb, q.x0, q.t0, q.eps, r, branch);
    const double lo = std::min(q.x0, m.x_end), hi = std::max(q.x0, m.x_end);
    auto f = [&](double z) {
        const double v = pb.pot.value(z, z / q.eps);
        return -v / std::sqrt(2.0 * (r - v));
    };
    const auto breaks = macro_breaks(pb.pot, lo, hi, q.eps);
    const double integral =
        num::integrate(f, lo, hi, 1e-12 * std::max(1.0, hi - lo), breaks, q.eps / 8.0);
    return r * q.t0 + 2.0 * integral + pb.u0.value(m.x_end);
}

NonpositiveValue action_nonpositive(const Problem& pb, const Query& q) {
    q.validate(pb.window);
    const auto sep = separatrix_paths(pb, q);
    const double v00 = pb.pot.value(q.x0, q.x0 / q.eps);

    NonpositiveValue best;
    best.value = -q.t0 * v00 + pb.u0.value(q.x0);  // constant path, L(0) = 0
    best.endpoint = q.x0;
    if (sep.stationary) return best;

    const double eps = q.eps;
    auto momentum = [&](int branch) {
        return [&, branch](double z) {
            return std::abs(
                pb.ham.branch_inverse(branch, std::max(0.0, -pb.pot.value(z, z / eps))));
        };
    };

    const double xp = eps * sep.plus_end;
    {
        const auto breaks = macro_breaks(pb.pot, q.x0, xp, eps);
        const double act =
            num::integrate(momentum(1), q.x0, xp, 1e-12, breaks, eps / 8.0);
        const double a = act + pb.u0.value(xp);
        if (a < best.value) best = {a, xp};
    }
    const double xm = eps * sep.minus_end;
    {
        const auto breaks = macro_breaks(pb.pot, xm, q.x0, eps);
        const double act =
            num::integrate(momentum(2), xm, q.x0, 1e-12, breaks, eps / 8.0);
        const double a = act + pb.u0.value(xm);
        if (a < best.value) best = {a, xm};
    }
    return best;
}

ValueReport u_eps(const Problem& pb, const Query& q) {
    q.validate(pb.window);
    const auto setup = make_setup(pb);
    ValueReport rep;
    rep.r_cut = setup.r_cut;
    rep.supersolution_bound = pb.u0.value(q.x0) + setup.cbar * q.t0;

    if (q.t0 == 0.0) {
        rep.value_normalized = pb.u0.value(q.x0);
        rep.value = rep.value_normalized;
        rep.branch = WinningBranch::nonpositive;
        rep.r_star = std::numeric_limits<double>::quiet_NaN();
        rep.endpoint = q.x0;
        return rep;
    }

    const auto neg = action_nonpositive(pb, q);

    const auto right =
        minimize_over_energy([&](double r) { return action_positive(pb, q, r, 1); }, setup.r_cut);
    const auto left =
        minimize_over_energy([&](double r) { return action_positive(pb, q, r, 2); }, setup.r_cut);

    // ties go to the branch with the smaller |r*| (the nonpositive branch
    // counts as r* = 0) so reports are reproducible
    const double tie = 1e-12 * (1.0 + std::abs(neg.value));
    rep.branch = WinningBranch::nonpositive;
    rep.value_normalized = neg.value;
    rep.r_star = std::numeric_limits<double>::quiet_NaN();
    rep.endpoint = neg.endpoint;
    auto consider = [&](WinningBranch b, const RScanResult& cand, int branch_idx) {
        const bool better = cand.value < rep.value_normalized - tie;
        const bool tied = std::abs(cand.value - rep.value_normalized) <= tie;
        const double cur_r = std::isnan(rep.r_star) ? 0.0 : std::abs(rep.r_star);
        if (better || (tied && cand.r < cur_r)) {
            rep.branch = b;
            rep.value_normalized = cand.value;
            rep.r_star = cand.r;
            rep.endpoint = oscillatory_march(pb, q.x0, q.t0, q.eps, cand.r, branch_idx).x_end;
        }
    };
    consider(WinningBranch::positive_right, right, 1);
    consider(WinningBranch::positive_left, left, 2);

    rep.value = rep.value_normalized - pb.pot.c0_shift() * q.t0;
    return rep;
}

double effective_I(const Problem& pb, const Query& q, double r, int branch) {
    if (!(r > 0.0)) throw std::domain_error("effective_I: requires r > 0");
    const auto m = averaged_march(pb, q.x0, q.t0, r, branch);
    return -r * q.t0 + m.action + pb.u0.value(m.x_end);
}

double effective_I_classical(const Problem& pb, const Query& q, double r, int branch) {
    if (pb.ham.kind() != HamiltonianKind::quadratic)
        throw std::logic_error("classical averaged form requires the quadratic Hamiltonian");
    const auto m = averaged_march(pb, q.x0, q.t0, r, branch);
    const double lo = std::min(q.x0, m.x_end), hi = std::max(q.x0, m.x_end);
    Oscilland f;
    f.f = [&pb, r](double x, double y) {
        const double v = pb.pot.value(x, y);
        return -v / std::sqrt(2.0 * (r - v));
    };
    f.y_breakpoints = pb.pot.y_breakpoints();
    const double integral = (hi > lo) ? cell_average_integral(f, lo, hi) : 0.0;
    return r * q.t0 + 2.0 * integral + pb.u0.value(m.x_end);
}

ValueReport u_effective(const Problem& pb, const Query& q) {
    q.validate(pb.window);
    const auto setup = make_setup(pb);
    ValueReport rep;
    rep.r_cut = setup.r_cut;
    rep.supersolution_bound = pb.u0.value(q.x0) + setup.cbar * q.t0;

    // the nonpositive branch of the effective value is exactly u0(x0)
    rep.branch = WinningBranch::nonpositive;
    rep.value_normalized = pb.u0.value(q.x0);
    rep.r_star = std::numeric_limits<double>::quiet_NaN();
    rep.endpoint = q.x0;

    if (q.t0 > 0.0) {
        const auto right = minimize_over_energy(
            [&](double r) { return effective_I(pb, q, r, 1); }, setup.r_cut);
        const auto left = minimize_over_energy(
            [&](double r) { return effective_I(pb, q, r, 2); }, setup.r_cut);
        const double tie = 1e-12 * (1.0 + std::abs(rep.value_normalized));
        auto consider = [&](WinningBranch b, const RScanResult& cand, int branch_idx) {
            const bool better = cand.value < rep.value_normalized - tie;
            const bool tied = std::abs(cand.value - rep.value_normalized) <= tie;
            const double cur_r = std::isnan(rep.r_star) ? 0.0 : std::abs(rep.r_star);
            if (better || (tied && cand.r < cur_r)) {
                rep.branch = b;
                rep.value_normalized = cand.value;
                rep.r_star = cand.r;
                rep.endpoint = averaged_march(pb, q.x0, q.t0, cand.r, branch_idx).x_end;
            }
        };
        consider(WinningBranch::positive_right, right, 1);
        consider(WinningBranch::positive_left, left, 2);
    }

    rep.value = rep.value_normalized - pb.pot.c0_shift() * q.t0;
    return rep;
}

namespace {

struct WindowStats {
    double a_min, a_max, slope_ratio;  // range of a and max |a'/a| on the window
};

WindowStats separable_window_stats(const Potential& pot, Interval I) {
    WindowStats w{std::numeric_limits<double>::infinity(), 0.0, 0.0};
    const int n = 4096;
    for (int i = 0; i <= n; ++i) {
        const double x = I.lo + I.length() * i / n;
        const double a = pot.a(x);
        w.a_min = std::min(w.a_min, a);
        w.a_max = std::max(w.a_max, a);
        w.slope_ratio = std::max(w.slope_ratio, std::abs(pot.da(x) / a));
    }
    return w;
}

struct SampledSuprema {
    double a2 = 0.0;     // |Vx| |G'/G|(r - V)
    double a3 = 0.0;     // |Vx| / |G(|V|)|
    double ratio = 1.0;  // sojourn max/min over the window
    bool converged = true;
};

SampledSuprema sample_suprema(const Problem& pb, Interval I, double r0) {
    SampledSuprema out;
    const int nx = 64, ny = 192;
    std::vector<double> r_grid;
    for (int k = 0; k < 24; ++k) r_grid.push_back(r0 * std::pow(0.5, k + 1));

    std::vector<double> a2_samples, ratio_samples;
    for (double r : r_grid) {
        double worst = 0.0;
        double ratio = 1.0;
        for (int branch : {1, 2}) {
            double qlo = std::numeric_limits<double>::infinity(), qhi = 0.0;
            for (int i = 0; i <= nx; ++i) {
                const double x = I.lo + I.length() * i / nx;
                for (int j = 0; j < ny; ++j) {
                    const double y = static_cast<double>(j) / ny;
                    const double vx = pb.pot.dx(x, y);
                    if (vx != 0.0) {
                        const double p = pb.ham.branch_inverse(branch, r - pb.pot.value(x, y));
                        const double hp = pb.ham.slope(p);
                        if (hp != 0.0)
                            worst = std::max(worst,
                                             std::abs(vx) * pb.ham.curvature(p) / (hp * hp));
                    }
                }
                auto f = [&](double y) {
                    return 1.0 / std::abs(pb.ham.velocity(branch, r - pb.pot.value(x, y)));
                };
                const double soj = num::integrate(f, 0.0, 1.0, 1e-9, pb.pot.y_breakpoints(), 0.25);
                qlo = std::min(qlo, soj);
                qhi = std::max(qhi, soj);
            }
            ratio = std::max(ratio, qhi / qlo);
        }
        a2_samples.push_back(worst);
        ratio_samples.push_back(ratio);
    }
    const auto p2 = probe_ladder(a2_samples);
    const auto p4 = probe_ladder(ratio_samples);
    out.a2 = p2.sup;
    out.ratio = p4.sup;
    out.converged = p2.converged && p4.converged;

    for (int i = 0; i <= nx; ++i) {
        const double x = I.lo + I.length() * i / nx;
        for (int j = 0; j < ny; ++j) {
            const double y = static_cast<double>(j) / ny;
            const double av = std::abs(pb.pot.value(x, y));
            const double vx = pb.pot.dx(x, y);
            if (av <= 1e-13) {
                if (std::abs(vx) > 1e-9) out.converged = false;
                continue;
            }
            for (int branch : {1, 2})
                out.a3 = std::max(out.a3, std::abs(vx / pb.ham.velocity(branch, av)));
        }
    }
    return out;
}

}  // namespace

CertifiedConstants certified_constants(const Problem& pb) {
    const auto setup = make_setup(pb);
    CertifiedConstants c;
    c.r0 = setup.r_cut;
    c.cbar = setup.cbar;
    c.c0 = setup.c0;
    c.I0 = setup.window;
    const double lip = setup.lip_u0;
    const double sup_v = setup.sup_v;

    c.closed_form = pb.ham.kind() == HamiltonianKind::quadratic && pb.pot.separable_form();
    if (c.closed_form) {
        const auto wr = separable_window_stats(pb.pot, setup.window);
        const auto wl = separable_window_stats(pb.pot, setup.window_left);
        c.alpha_T = wr.a_min;
        c.beta_T = wr.a_max;
        const double root_v = std::sqrt(sup_v);

        auto endpoint_const = [&](const WindowStats& w, double c0) {
            return std::sqrt(w.a_max / w.a_min) * (2.0 + 0.5 * c0 * w.slope_ratio);
        };
        auto averaging_const = [&](const WindowStats& w, double ck, double c0) {
            const double f1 = root_v;
            const double f2 = 1.5 / std::sqrt(2.0) * root_v * w.slope_ratio;
            return 2.0 * f1 + c0 * f2 + ck * f1;
        };
        c.endpoint_constant = endpoint_const(wr, setup.c0);
        c.averaging_constant = averaging_const(wr, c.endpoint_constant, setup.c0);
        c.endpoint_constant_left = endpoint_const(wl, setup.c0_left);
        c.averaging_constant_left = averaging_const(wl, c.endpoint_constant_left, setup.c0_left);

        c.rate_constant = std::max({std::sqrt(2.0 * sup_v) + lip,
                                    2.0 * c.averaging_constant + c.endpoint_constant * lip,
                                    2.0 * c.averaging_constant_left +
                                        c.endpoint_constant_left * lip});
    } else {
        const auto sr = sample_suprema(pb, setup.window, setup.r_cut);
        const auto sl = sample_suprema(pb, setup.window_left, setup.r_cut);
        c.certified = sr.converged && sl.converged;
        c.alpha_T = c.beta_T = std::numeric_limits<double>::quiet_NaN();

        auto endpoint_const = [&](const SampledSuprema& s, double c0) {
            return 2.0 * (1.0 + 2.0 * c0 * s.a2) * s.ratio;
        };
        auto averaging_const = [&](const SampledSuprema& s, double ck, double c0) {
            const double f1 = std::abs(pb.ham.branch_inverse(1, setup.r_cut + sup_v));
            return 2.0 * f1 + c0 * s.a3 + ck * f1;
        };
        c.endpoint_constant = endpoint_const(sr, setup.c0);
        c.averaging_constant = averaging_const(sr, c.endpoint_constant, setup.c0);
        c.endpoint_constant_left = endpoint_const(sl, setup.c0_left);
        c.averaging_constant_left = averaging_const(sl, c.endpoint_constant_left, setup.c0_left);

        const double neg_branch =
            std::abs(pb.ham.branch_inverse(1, sup_v)) + lip;
        c.rate_constant = std::max({neg_branch,
                                    c.averaging_constant + c.endpoint_constant * lip,
                                    c.averaging_constant_left +
                                        c.endpoint_constant_left * lip});
    }

    c.uniform_constant = pb.pot.x_independent()
                             ? 2.0 * (lip + 4.0 * std::sqrt(sup_v))
                             : std::numeric_limits<double>::quiet_NaN();
    return c;
}

}  // namespace hj1d
