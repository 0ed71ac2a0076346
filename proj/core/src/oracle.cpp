#include "hj1d/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "hj1d/numerics.hpp"
#include "hj1d/values.hpp"

namespace hj1d {

namespace {

double momentum_integral(const Problem& pb, double x, double r, int branch) {
    auto f = [&](double y) {
        return pb.ham.branch_inverse(branch, std::max(0.0, r - pb.pot.value(x, y)));
    };
    return num::integrate(f, 0.0, 1.0, 1e-12, pb.pot.y_breakpoints(), 0.25);
}

}  // namespace

double flat_edge(const Problem& pb, double x, int branch) {
    return momentum_integral(pb, x, 0.0, branch);
}

double effective_hamiltonian(const Problem& pb, double x, double p) {
    const double e_plus = flat_edge(pb, x, 1);
    const double e_minus = flat_edge(pb, x, 2);
    if (p >= e_minus && p <= e_plus) return 0.0;
    const int branch = p > e_plus ? 1 : 2;
    const double sup_v = pb.pot.sup_norm();
    const double r_hi = pb.ham.value(p);
    const double r_lo = std::max(0.0, r_hi - sup_v);
    auto f = [&](double r) { return momentum_integral(pb, x, r, branch) - p; };
    // momentum integral is monotone in r on either branch (increasing on the
    // right, decreasing on the left)
    if (branch == 1) return num::find_root(f, r_lo, r_hi, 1e-13 * (1.0 + r_hi));
    return num::find_root(f, r_lo, r_hi, 1e-13 * (1.0 + r_hi));
}

// ---------------------------------------------------------------------------
// Tabulated effective Hamiltonian

EffectiveHamiltonianTable EffectiveHamiltonianTable::build(const Problem& pb, double x_lo,
                                                           double x_hi, double p_max) {
    EffectiveHamiltonianTable t;
    t.pot_ = &pb.pot;
    t.p_max_ = p_max;

    int n_buckets;
    if (pb.pot.x_independent()) {
        t.by_amplitude_ = false;
        t.key_lo_ = x_lo;
        t.key_hi_ = x_hi;
        n_buckets = 1;
    } else if (pb.pot.separable_form()) {
        t.by_amplitude_ = true;
        double alo = std::numeric_limits<double>::infinity(), ahi = 0.0;
        const int n = 4096;
        for (int i = 0; i <= n; ++i) {
            const double a = pb.pot.a(x_lo + (x_hi - x_lo) * i / n);
            alo = std::min(alo, a);
            ahi = std::max(ahi, a);
        }
        t.key_lo_ = alo;
        t.key_hi_ = ahi * (1.0 + 1e-12) + 1e-300;
        n_buckets = 257;
    } else {
        t.by_amplitude_ = false;
        t.key_lo_ = x_lo;
        t.key_hi_ = x_hi;
        n_buckets = 513;
    }

    // r-grid: momentum-uniform main part plus a geometric tail resolving the
    // flat-piece edge
    const double sup_v = pb.pot.sup_norm();
    const double r_top = std::max(pb.ham.value(p_max), pb.ham.value(-p_max)) + sup_v + 1.0;
    const int m_main = pb.pot.x_independent() ? 4096 : 768;
    std::vector<double> r_grid;
    for (int m = 1; m <= m_main; ++m)
        r_grid.push_back(r_top * std::pow(static_cast<double>(m) / m_main, 2.0));
    for (int k = 1; k <= 40; ++k) r_grid.push_back(r_top * std::pow(2.0, -k));
    std::sort(r_grid.begin(), r_grid.end());
    r_grid.erase(std::unique(r_grid.begin(), r_grid.end()), r_grid.end());

    const int n_p = pb.pot.x_independent() ? 8192 : 2048;

    t.buckets_.resize(n_buckets);
    for (int bi = 0; bi < n_buckets; ++bi) {
        const double key =
            n_buckets == 1 ? t.key_lo_
                           : t.key_lo_ + (t.key_hi_ - t.key_lo_) * bi / (n_buckets - 1);
        // freeze the potential section for this bucket
        auto section_value = [&pb, &t, key](double y) {
            return t.by_amplitude_ ? key * pb.pot.b(y) : pb.pot.value(key, y);
        };
        auto pbar = [&](double r, int branch) {
            auto f = [&](double y) {
                return pb.ham.branch_inverse(branch, std::max(0.0, r - section_value(y)));
            };
            return num::integrate(f, 0.0, 1.0, 1e-12, pb.pot.y_breakpoints(), 0.25);
        };

        Bucket& b = t.buckets_[bi];
        b.edge_plus = pbar(0.0, 1);
        b.edge_minus = pbar(0.0, 2);

        std::vector<double> pb_right(r_grid.size()), pb_left(r_grid.size());
        for (std::size_t m = 0; m < r_grid.size(); ++m) {
            pb_right[m] = pbar(r_grid[m], 1);
            pb_left[m] = pbar(r_grid[m], 2);
        }

        // invert pbar(r) = p on uniform momentum grids by a monotone walk
        b.h_right.resize(n_p + 1);
        const double dp_r = (p_max - b.edge_plus) / n_p;
        std::size_t m = 0;
        for (int k = 0; k <= n_p; ++k) {
            const double p = b.edge_plus + dp_r * k;
            while (m + 1 < r_grid.size() && pb_right[m + 1] < p) ++m;
            if (m + 1 >= r_grid.size()) {
                b.h_right[k] = r_grid.back();
                continue;
            }
            const double p0 = (m == 0 && p <= pb_right[0]) ? b.edge_plus : pb_right[m];
            const double r0 = (m == 0 && p <= pb_right[0]) ? 0.0 : r_grid[m];
            const double p1 = pb_right[m == 0 && p <= pb_right[0] ? 0 : m + 1];
            const double r1 = r_grid[m == 0 && p <= pb_right[0] ? 0 : m + 1];
            const double w = (p1 > p0) ? (p - p0) / (p1 - p0) : 0.0;
            b.h_right[k] = std::max(0.0, r0 + w * (r1 - r0));
        }
        b.h_left.resize(n_p + 1);
        const double dp_l = (b.edge_minus - (-p_max)) / n_p;
        m = 0;
        for (int k = 0; k <= n_p; ++k) {
            const double p = b.edge_minus - dp_l * k;  // walk leftward
            while (m + 1 < r_grid.size() && pb_left[m + 1] > p) ++m;
            if (m + 1 >= r_grid.size()) {
                b.h_left[k] = r_grid.back();
                continue;
            }
            const double p0 = (m == 0 && p >= pb_left[0]) ? b.edge_minus : pb_left[m];
            const double r0 = (m == 0 && p >= pb_left[0]) ? 0.0 : r_grid[m];
            const double p1 = pb_left[m == 0 && p >= pb_left[0] ? 0 : m + 1];
            const double r1 = r_grid[m == 0 && p >= pb_left[0] ? 0 : m + 1];
            const double w = (p1 < p0) ? (p - p0) / (p1 - p0) : 0.0;
            b.h_left[k] = std::max(0.0, r0 + w * (r1 - r0));
        }

        double slope = 0.0;
        for (int k = 0; k + 1 <= n_p; ++k) {
            if (dp_r > 0.0)
                slope = std::max(slope, std::abs(b.h_right[k + 1] - b.h_right[k]) / dp_r);
            if (dp_l > 0.0)
                slope = std::max(slope, std::abs(b.h_left[k + 1] - b.h_left[k]) / dp_l);
        }
        t.max_slope_ = std::max(t.max_slope_, slope);
    }
    return t;
}

double EffectiveHamiltonianTable::bucket_coord(double x) const {
    return by_amplitude_ ? pot_->a(x) : x;
}

double EffectiveHamiltonianTable::eval_bucket(const Bucket& b, double p) const {
    if (p >= b.edge_minus && p <= b.edge_plus) return 0.0;
    if (p > b.edge_plus) {
        const int n = static_cast<int>(b.h_right.size()) - 1;
        const double dp = (p_max_ - b.edge_plus) / n;
        if (dp <= 0.0) return b.h_right.back();
        const double t = std::min(std::max((p - b.edge_plus) / dp, 0.0), static_cast<double>(n));
        const int k = std::min(static_cast<int>(t), n - 1);
        const double w = t - k;
        return b.h_right[k] + w * (b.h_right[k + 1] - b.h_right[k]);
    }
    const int n = static_cast<int>(b.h_left.size()) - 1;
    const double dp = (b.edge_minus + p_max_) / n;
    if (dp <= 0.0) return b.h_left.back();
    const double t = std::min(std::max((b.edge_minus - p) / dp, 0.0), static_cast<double>(n));
    const int k = std::min(static_cast<int>(t), n - 1);
    const double w = t - k;
    return b.h_left[k] + w * (b.h_left[k + 1] - b.h_left[k]);
}

double EffectiveHamiltonianTable::value(double x, double p) const {
    p = std::clamp(p, -p_max_, p_max_);
    if (buckets_.size() == 1) return eval_bucket(buckets_[0], p);
    const double key = std::clamp(bucket_coord(x), key_lo_, key_hi_);
    const double t = (key - key_lo_) / (key_hi_ - key_lo_) * (buckets_.size() - 1);
    const int b0 = std::min(static_cast<int>(t), static_cast<int>(buckets_.size()) - 2);
    const double w = t - b0;
    return (1.0 - w) * eval_bucket(buckets_[b0], p) + w * eval_bucket(buckets_[b0 + 1], p);
}

double EffectiveHamiltonianTable::flat_plus(double x) const {
    if (buckets_.size() == 1) return buckets_[0].edge_plus;
    const double key = std::clamp(bucket_coord(x), key_lo_, key_hi_);
    const double t = (key - key_lo_) / (key_hi_ - key_lo_) * (buckets_.size() - 1);
    const int b0 = std::min(static_cast<int>(t), static_cast<int>(buckets_.size()) - 2);
    const double w = t - b0;
    return (1.0 - w) * buckets_[b0].edge_plus + w * buckets_[b0 + 1].edge_plus;
}

double EffectiveHamiltonianTable::flat_minus(double x) const {
    if (buckets_.size() == 1) return buckets_[0].edge_minus;
    const double key = std::clamp(bucket_coord(x), key_lo_, key_hi_);
    const double t = (key - key_lo_) / (key_hi_ - key_lo_) * (buckets_.size() - 1);
    const int b0 = std::min(static_cast<int>(t), static_cast<int>(buckets_.size()) - 2);
    const double w = t - b0;
    return (1.0 - w) * buckets_[b0].edge_minus + w * buckets_[b0 + 1].edge_minus;
}

// ---------------------------------------------------------------------------
// Monotone local Lax-Friedrichs stepping

double GridSolution::value_at(double x, double t) const {
    std::size_t best = 0;
    for (std::size_t i = 1; i < times.size(); ++i)
        if (std::abs(times[i] - t) < std::abs(times[best] - t)) best = i;
    if (std::abs(times[best] - t) > 1e-9 * (1.0 + std::abs(t)))
        throw OracleError("value_at: no slice recorded near the requested time");
    const auto& u = slices[best];
    const double s = (x - x_lo) / dx;
    const int j = std::clamp(static_cast<int>(std::floor(s)), 0, n - 2);
    const double w = s - j;
    return u[j] + w * (u[j + 1] - u[j]);
}

namespace {

template <class NumHam>
GridSolution run_scheme(const Problem& pb, const FdOptions& opt, double theta,
                        const NumHam& num_ham) {
    const double rw = opt.report_halfwidth >= 0.0 ? opt.report_halfwidth : pb.window.R;
    const double t_end = *std::max_element(opt.snapshot_times.begin(), opt.snapshot_times.end());
    const double dt_raw = opt.cfl * opt.dx / theta;
    const long steps = std::max(1L, static_cast<long>(std::ceil(t_end / dt_raw)));
    const double dt = t_end / static_cast<double>(steps);

    double pad = opt.pad;
    if (pad < 0.0) pad = (t_end / dt) * opt.dx + 1.0;  // numerical dependence cone + margin
    const double x_lo = std::floor((-rw - pad) / opt.dx) * opt.dx;
    const double x_hi = std::ceil((rw + pad) / opt.dx) * opt.dx;
    const int n = static_cast<int>(std::round((x_hi - x_lo) / opt.dx)) + 1;

    GridSolution sol;
    sol.x_lo = x_lo;
    sol.dx = opt.dx;
    sol.n = n;
    sol.t_end = t_end;
    sol.dt = dt;
    sol.theta = theta;
    sol.steps = static_cast<int>(steps);

    std::vector<double> u(n), un(n);
    for (int j = 0; j < n; ++j) u[j] = pb.u0.value(x_lo + opt.dx * j);

    std::vector<double> want(opt.snapshot_times.begin(), opt.snapshot_times.end());
    std::sort(want.begin(), want.end());
    std::size_t wi = 0;
    auto record = [&](double t_snap, const std::vector<double>& lo_slice,
                      const std::vector<double>& hi_slice, double t_lo, double t_hi) {
        std::vector<double> s(n);
        const double w = (t_hi > t_lo) ? (t_snap - t_lo) / (t_hi - t_lo) : 0.0;
        for (int j = 0; j < n; ++j) s[j] = lo_slice[j] + w * (hi_slice[j] - lo_slice[j]);
        sol.times.push_back(t_snap);
        sol.slices.push_back(std::move(s));
    };
    while (wi < want.size() && want[wi] <= 0.0) {
        record(0.0, u, u, 0.0, 0.0);
        ++wi;
    }

    const double inv2dx = 1.0 / (2.0 * opt.dx);
    for (long k = 0; k < steps; ++k) {
        const double t0 = dt * static_cast<double>(k);
        const double t1 = dt * static_cast<double>(k + 1);
        for (int j = 0; j < n; ++j) {
            const double um = j > 0 ? u[j - 1] : 2.0 * u[0] - u[1];
            const double up = j < n - 1 ? u[j + 1] : 2.0 * u[n - 1] - u[n - 2];
            const double p = (up - um) * inv2dx;
            const double diss = theta * (up - 2.0 * u[j] + um) * inv2dx;
            un[j] = u[j] - dt * (num_ham(j, p) - diss);
        }
        while (wi < want.size() && want[wi] <= t1 + 1e-12) {
            record(std::min(want[wi], t1), u, un, t0, t1);
            ++wi;
        }
        std::swap(u, un);
    }

    // ghost influence spreads one cell per step from each boundary
    const long clean_lo = steps;
    const long clean_hi = n - 1 - steps;
    const long jl = static_cast<long>(std::floor((-rw - x_lo) / opt.dx));
    const long jr = static_cast<long>(std::ceil((rw - x_lo) / opt.dx));
    if (jl < clean_lo || jr > clean_hi)
        throw OracleError("fd solve: boundary influence reached the report window");
    sol.clean_lo = static_cast<int>(clean_lo);
    sol.clean_hi = static_cast<int>(clean_hi);

    for (const auto& s : sol.slices)
        for (long j = std::max(1L, clean_lo + 1); j <= clean_hi; ++j)
            sol.max_grad = std::max(sol.max_grad, std::abs(s[j] - s[j - 1]) / opt.dx);
    return sol;
}

}  // namespace

namespace {

struct SchemeLayout {
    double x_lo = 0.0, x_hi = 0.0;
    int n = 0;
    long steps = 0;
    double pad = 0.0;
};

SchemeLayout layout_for(const Problem& pb, const FdOptions& opt, double theta) {
    SchemeLayout lay;
    const double rw = opt.report_halfwidth >= 0.0 ? opt.report_halfwidth : pb.window.R;
    const double t_end = *std::max_element(opt.snapshot_times.begin(), opt.snapshot_times.end());
    const double dt_raw = opt.cfl * opt.dx / theta;
    lay.steps = std::max(1L, static_cast<long>(std::ceil(t_end / dt_raw)));
    lay.pad = opt.pad >= 0.0 ? opt.pad : static_cast<double>(lay.steps) * opt.dx + 1.0;
    lay.x_lo = std::floor((-rw - lay.pad) / opt.dx) * opt.dx;
    lay.x_hi = std::ceil((rw + lay.pad) / opt.dx) * opt.dx;
    lay.n = static_cast<int>(std::round((lay.x_hi - lay.x_lo) / opt.dx)) + 1;
    return lay;
}

}  // namespace

GridSolution fd_solve_oscillatory(const Problem& pb, double eps, const FdOptions& opt) {
    if (!(opt.dx <= eps / 20.0))
        throw OracleError("fd_solve_oscillatory: dx must resolve the oscillation (dx <= eps/20)");
    const double theta = pb.ham.max_slope(pb.ham.grad_bound() + 1.0);
    const auto lay = layout_for(pb, opt, theta);

    std::vector<double> v_of_x(lay.n);
    for (int j = 0; j < lay.n; ++j) {
        const double x = lay.x_lo + opt.dx * j;
        v_of_x[j] = pb.pot.value(x, x / eps);
    }
    const Hamiltonian& h = pb.ham;
    auto num_ham = [&](int j, double p) { return h.value(p) + v_of_x[j]; };
    FdOptions o2 = opt;
    o2.pad = lay.pad;
    return run_scheme(pb, o2, theta, num_ham);
}

GridSolution fd_solve_effective(const Problem& pb, const FdOptions& opt) {
    const double p_max = pb.ham.grad_bound() + 2.0;
    // a-priori dissipation bound: slopes of Hbar never exceed the branch
    // velocity at the top tabulated energy
    const double sup_v = pb.pot.sup_norm();
    const double r_top = std::max(pb.ham.value(p_max), pb.ham.value(-p_max)) + sup_v + 1.0;
    const double theta = std::max({pb.ham.max_slope(pb.ham.grad_bound() + 1.0),
                                   std::abs(pb.ham.velocity(1, r_top + sup_v)),
                                   std::abs(pb.ham.velocity(2, r_top + sup_v))});
    const auto lay = layout_for(pb, opt, theta);

    const auto table = EffectiveHamiltonianTable::build(pb, lay.x_lo, lay.x_hi, p_max);
    if (table.max_slope() > theta)
        throw OracleError("fd_solve_effective: tabulated slope exceeded the dissipation bound");

    std::vector<double> xs(lay.n);
    for (int j = 0; j < lay.n; ++j) xs[j] = lay.x_lo + opt.dx * j;
    auto num_ham = [&](int j, double p) { return table.value(xs[j], p); };

    FdOptions o2 = opt;
    o2.pad = lay.pad;
    return run_scheme(pb, o2, theta, num_ham);
}

}  // namespace hj1d
