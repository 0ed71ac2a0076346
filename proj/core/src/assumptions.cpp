#include "hj1d/assumptions.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "hj1d/numerics.hpp"

namespace hj1d {

namespace {

constexpr double kZeroTol = 1e-9;

struct GridMax {
    double value = -std::numeric_limits<double>::infinity();
    double x = 0.0, y = 0.0;
    void consider(double v, double px, double py) {
        if (v > value) {
            value = v;
            x = px;
            y = py;
        }
    }
};

std::vector<double> y_samples(const Potential& V, int n) {
    std::vector<double> ys;
    ys.reserve(n + V.y_breakpoints().size() + 60 * V.y_zeros().size());
    for (int j = 0; j < n; ++j) ys.push_back(static_cast<double>(j) / n);
    for (double b : V.y_breakpoints()) ys.push_back(b);
    // cluster geometrically toward the potential zeros; limsup statistics live there
    for (double z : V.y_zeros())
        for (int j = 2; j <= 30; ++j) {
            const double d = std::pow(2.0, -j);
            ys.push_back(z + d - std::floor(z + d));
            ys.push_back(z - d - std::floor(z - d));
        }
    std::sort(ys.begin(), ys.end());
    ys.erase(std::unique(ys.begin(), ys.end()), ys.end());
    return ys;
}

std::vector<double> x_samples(Interval I, int n) {
    std::vector<double> xs;
    xs.reserve(n + 1);
    for (int i = 0; i <= n; ++i) xs.push_back(I.lo + I.length() * i / n);
    return xs;
}

}  // namespace

const AuditCheck* AssumptionReport::find(const std::string& id) const {
    for (const auto& c : checks)
        if (c.id == id) return &c;
    return nullptr;
}

LadderProbe probe_ladder(std::span<const double> samples) {
    LadderProbe out;
    if (samples.empty()) return out;
    out.sup = samples[0];
    for (std::size_t i = 0; i < samples.size(); ++i) {
        if (!std::isfinite(samples[i])) {
            out.sup = std::numeric_limits<double>::infinity();
            out.argmax = static_cast<int>(i);
            out.converged = false;
            return out;
        }
        if (samples[i] > out.sup) {
            out.sup = samples[i];
            out.argmax = static_cast<int>(i);
        }
    }
    const std::size_t tail = std::min<std::size_t>(10, samples.size());
    const double scale = 1.0 + std::abs(out.sup);
    const double slack = 1e-9 * scale;

    bool nonincreasing = true;
    std::vector<double> deltas;
    for (std::size_t i = samples.size() - tail + 1; i < samples.size(); ++i) {
        const double d = samples[i] - samples[i - 1];
        if (d > slack) nonincreasing = false;
        deltas.push_back(std::abs(d));
    }
    if (nonincreasing) {
        out.converged = true;
        return out;
    }
    // increasing toward a finite limit is fine as long as the increments
    // decay geometrically along the ladder
    std::vector<double> ratios;
    for (std::size_t i = 1; i < deltas.size(); ++i) {
        if (deltas[i - 1] <= slack && deltas[i] <= slack) continue;
        ratios.push_back(deltas[i] / std::max(deltas[i - 1], 1e-300));
    }
    if (ratios.empty()) {
        out.converged = true;
        return out;
    }
    std::nth_element(ratios.begin(), ratios.begin() + ratios.size() / 2, ratios.end());
    out.converged = ratios[ratios.size() / 2] <= 0.9;
    return out;
}

AssumptionReport audit_assumptions(const Hamiltonian& H, const Potential& V, Interval I,
                                   std::span<const double> r_grid_in) {
    AssumptionReport rep;
    const double nan = std::numeric_limits<double>::quiet_NaN();
    const double m = H.grad_bound();
    // custom Hamiltonians pay a root-find per branch evaluation; sample coarser
    const bool coarse = H.kind() == HamiltonianKind::custom;
    const auto xs = x_samples(I, coarse ? 16 : 64);
    const auto ys = y_samples(V, coarse ? 96 : 256);

    std::vector<double> r_grid(r_grid_in.begin(), r_grid_in.end());
    if (r_grid.empty())
        for (int k = 0; k <= (coarse ? 20 : 30); ++k) r_grid.push_back(std::pow(2.0, -k));

    auto add = [&](AuditCheck c) {
        rep.all_pass = rep.all_pass && c.pass;
        rep.checks.push_back(std::move(c));
    };

    // H1: periodicity of y -> V(x,y)
    {
        GridMax worst;
        for (double x : xs)
            for (double y : ys)
                worst.consider(std::abs(V.value(x, y + 1.0) - V.value(x, y)), x, y);
        AuditCheck c{"H1", "V is 1-periodic in the fast variable", false, worst.value,
                     worst.x, worst.y, nan, ""};
        c.pass = worst.value <= kZeroTol * (1.0 + V.sup_norm());
        add(c);
    }

    // H2: coercivity in p, sampled as growth between |p| = M and |p| = 2M
    {
        const double lo = std::min(H.value(m), H.value(-m)) - V.sup_norm();
        const double hi = std::min(H.value(2.0 * m), H.value(-2.0 * m)) - V.sup_norm();
        AuditCheck c{"H2", "H(p) + V coercive in p (sampled growth)", hi > lo + kZeroTol,
                     hi - lo, nan, nan, 2.0 * m, ""};
        add(c);
    }

    // H3: boundedness on bounded momentum sets
    {
        const double s = std::max(H.value(m), H.value(-m)) + V.sup_norm();
        AuditCheck c{"H3", "sup |H(p) + V| finite for |p| <= M", std::isfinite(s), s, nan, nan,
                     m, ""};
        add(c);
    }

    // H4: modulus of continuity in p; diagnostic only
    {
        const double lip = H.max_slope(m + 1.0);
        AuditCheck c{"H4", "modulus of continuity in p (sampled Lipschitz constant)",
                     std::isfinite(lip), lip, nan, nan, m + 1.0, "diagnostic"};
        add(c);
    }

    // A0: |H''/H' sqrt(H)| bounded near p = 0
    {
        std::vector<double> ladder, samples;
        for (int k = 0; k <= 40; ++k) ladder.push_back(std::pow(2.0, -k));
        for (double p : ladder) {
            double worst = 0.0;
            for (double q : {p, -p}) {
                const double hp = H.slope(q);
                if (hp == 0.0) continue;
                worst = std::max(worst,
                                 std::abs(H.curvature(q) / hp) * std::sqrt(std::max(0.0, H.value(q))));
            }
            samples.push_back(worst);
        }
        const auto probe = probe_ladder(samples);
        AuditCheck c{"A0", "|H''/H'| sqrt(H) bounded as p -> 0", probe.converged, probe.sup,
                     nan, nan, ladder[probe.argmax], probe.converged ? "" : "statistic grows along the ladder"};
        add(c);
    }

    // A1: max V = 0 and an x-independent zero line y0
    {
        GridMax vmax;
        for (double x : xs)
            for (double y : ys) vmax.consider(V.value(x, y), x, y);
        AuditCheck c{"A1", "max V = 0 with an x-independent zero line", false, vmax.value,
                     vmax.x, vmax.y, nan, ""};
        const bool max_zero = std::abs(vmax.value) <= kZeroTol * (1.0 + V.sup_norm());
        bool line_ok = false;
        if (max_zero && !V.y_zeros().empty()) {
            for (double y0 : V.y_zeros()) {
                bool ok = true;
                for (double x : xs)
                    if (std::abs(V.value(x, y0)) > kZeroTol * (1.0 + V.sup_norm())) {
                        ok = false;
                        c.witness_x = x;
                        c.witness_y = y0;
                        break;
                    }
                if (ok) {
                    line_ok = true;
                    c.witness_y = y0;
                    break;
                }
            }
        }
        c.pass = max_zero && line_ok;
        if (!max_zero)
            c.note = "max V != 0 at the witness sample";
        else if (!line_ok)
            c.note = "no x-independent zero line found";
        add(c);
    }

    // A2: |Vx| |G'_i / G_i| (r - V) bounded as r -> 0+
    {
        std::vector<double> samples;
        GridMax global;
        for (double r : r_grid) {
            GridMax worst;
            for (double x : xs)
                for (double y : ys) {
                    const double vx = V.dx(x, y);
                    if (vx == 0.0) continue;
                    const double q = r - V.value(x, y);
                    for (int branch : {1, 2}) {
                        const double p = H.branch_inverse(branch, q);
                        const double hp = H.slope(p);
                        if (hp == 0.0) continue;
                        worst.consider(std::abs(vx) * H.curvature(p) / (hp * hp), x, y);
                    }
                }
            samples.push_back(std::max(worst.value, 0.0));
            if (worst.value > global.value) global = worst;
        }
        const auto probe = probe_ladder(samples);
        AuditCheck c{"A2", "|Vx| |G'/G|(r - V) bounded as r -> 0+", probe.converged,
                     std::max(probe.sup, 0.0), global.x, global.y, r_grid[probe.argmax], ""};
        if (V.x_independent()) c.note = "Vx = 0";
        add(c);
    }

    // A3: |Vx / G_i(|V|)| bounded
    {
        GridMax worst;
        bool infinite = false;
        for (double x : xs)
            for (double y : ys) {
                const double vx = V.dx(x, y);
                const double av = std::abs(V.value(x, y));
                if (av <= 1e-13) {
                    if (std::abs(vx) > kZeroTol) {
                        infinite = true;
                        worst.consider(std::numeric_limits<double>::infinity(), x, y);
                    }
                    continue;
                }
                for (int branch : {1, 2})
                    worst.consider(std::abs(vx / H.velocity(branch, av)), x, y);
            }
        const double stat = std::max(worst.value, 0.0);
        AuditCheck c{"A3", "|Vx / G(|V|)| bounded on the window", !infinite && std::isfinite(stat),
                     stat, worst.x, worst.y, nan, V.x_independent() ? "Vx = 0" : ""};
        add(c);
    }

    // A4: max/min over x of the cell sojourn integral, bounded as r -> 0+.
    // A fixed midpoint sum is enough for a sampled ratio statistic.
    {
        const int nq = coarse ? 128 : 512;
        std::vector<double> samples;
        for (double r : r_grid) {
            double ratio = 1.0;
            for (int branch : {1, 2}) {
                double lo = std::numeric_limits<double>::infinity(), hi = 0.0;
                for (double x : xs) {
                    double q = 0.0;
                    for (int j = 0; j < nq; ++j) {
                        const double y = (j + 0.5) / nq;
                        q += 1.0 / std::abs(H.velocity(branch, r - V.value(x, y)));
                    }
                    q /= nq;
                    lo = std::min(lo, q);
                    hi = std::max(hi, q);
                }
                ratio = std::max(ratio, hi / lo);
            }
            samples.push_back(ratio);
        }
        const auto probe = probe_ladder(samples);
        AuditCheck c{"A4", "sojourn integral max/min ratio bounded as r -> 0+", probe.converged,
                     probe.sup, nan, nan, r_grid[probe.argmax], ""};
        add(c);
    }

    // Ratio |Vx / V|, the sufficient condition for A2/A3 on separable problems
    {
        GridMax worst;
        for (double x : xs)
            for (double y : ys) {
                const double v = V.value(x, y);
                if (std::abs(v) <= 1e-11) continue;
                worst.consider(std::abs(V.dx(x, y) / v), x, y);
            }
        const double stat = std::max(worst.value, 0.0);
        AuditCheck c{"VX_OVER_V", "sup |Vx/V| on the window", std::isfinite(stat), stat,
                     worst.x, worst.y, nan, "sufficient condition for A2/A3"};
        add(c);
    }

    // sqrt-potential Lipschitz constant: sup |dV/dy| / sqrt(-V) over {-V > delta},
    // probed along a decreasing delta ladder
    {
        std::vector<double> samples;
        GridMax global;
        std::vector<double> deltas;
        for (int k = 2; k <= 26; k += 2) deltas.push_back(std::pow(2.0, -k));
        for (double d : deltas) {
            GridMax worst;
            for (double x : xs)
                for (double y : ys) {
                    const double w = -V.value(x, y);
                    if (w <= d) continue;
                    worst.consider(std::abs(V.dy(x, y)) / std::sqrt(w), x, y);
                }
            samples.push_back(std::max(worst.value, 0.0));
            if (worst.value >= global.value) global = worst;
        }
        const auto probe = probe_ladder(samples);
        AuditCheck c{"SQRT_LIP", "sqrt(-V) Lipschitz in y: sup |Vy|/sqrt(-V) converges",
                     probe.converged, probe.sup, global.x, global.y, deltas[probe.argmax], ""};
        add(c);
    }

    return rep;
}

}  // namespace hj1d
