#include "hj1d/experiment.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <future>
#include <limits>
#include <sstream>

#include "hj1d/ergodic.hpp"
#include "hj1d/trajectories.hpp"

namespace hj1d {

namespace {

constexpr double kNan = std::numeric_limits<double>::quiet_NaN();

std::string fmt_g(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

Hamiltonian hamiltonian_from(const Config& cfg) {
    const std::string kind = cfg.get_string("problem.hamiltonian.kind", "quadratic");
    const double m = cfg.get_number("problem.hamiltonian.grad_bound",
                                    Hamiltonian::kDefaultGradBound);
    if (kind == "quadratic") return Hamiltonian::quadratic(m);
    if (kind == "power") {
        const double gamma = cfg.get_number("problem.hamiltonian.gamma");
        try {
            return Hamiltonian::power(gamma, m);
        } catch (const ModelError& e) {
            throw ConfigError(std::string("config: ") + e.what());
        }
    }
    throw ConfigError("config: unknown hamiltonian kind '" + kind + "'");
}

Potential potential_from(const Config& cfg) {
    const std::string a_kind = cfg.get_string("problem.potential.a", "one");
    const std::string b_kind = cfg.get_string("problem.potential.b", "zero");
    const double a_value = cfg.get_number("problem.potential.a_value", 1.0);
    const double scale = cfg.get_number("problem.potential.b_scale", 1.0);
    const double offset = cfg.get_number("problem.potential.b_offset", 0.0);

    PotentialAKind ak;
    if (a_kind == "one") ak = PotentialAKind::one;
    else if (a_kind == "constant") ak = PotentialAKind::constant;
    else if (a_kind == "two_plus_sin") ak = PotentialAKind::two_plus_sin;
    else throw ConfigError("config: unknown potential.a '" + a_kind + "'");

    PotentialBKind bk;
    std::vector<double> table;
    if (b_kind == "cos2pi_minus1") bk = PotentialBKind::cos2pi_minus1;
    else if (b_kind == "tent_prop43") bk = PotentialBKind::tent_prop43;
    else if (b_kind == "zero") bk = PotentialBKind::zero;
    else if (b_kind == "table") {
        bk = PotentialBKind::table;
        table = cfg.get_number_list("problem.potential.b_table");
    } else {
        throw ConfigError("config: unknown potential.b '" + b_kind + "'");
    }

    try {
        Potential p = Potential::separable(ak, bk, a_value, scale, offset, std::move(table));
        p.set_c0_shift(cfg.get_number("problem.c0", 0.0));
        return p;
    } catch (const std::invalid_argument& e) {
        throw ConfigError(std::string("config: ") + e.what());
    }
}

InitialData u0_from(const Config& cfg) {
    const std::string kind = cfg.get_string("problem.u0.kind", "constant");
    if (kind == "constant") return InitialData::constant(cfg.get_number("problem.u0.value", 0.0));
    if (kind == "clamp") return InitialData::clamp_ramp();
    if (kind == "cone")
        return InitialData::cone(cfg.get_number("problem.u0.slope", 1.0),
                                 cfg.get_number("problem.u0.cap", 1.0));
    throw ConfigError("config: unknown u0 kind '" + kind + "'");
}

}  // namespace

ExperimentConfig ExperimentConfig::from_config(const Config& cfg) {
    ExperimentConfig out;
    out.problem.ham = hamiltonian_from(cfg);
    out.problem.pot = potential_from(cfg);
    out.problem.u0 = u0_from(cfg);
    out.problem.window.R = cfg.get_number("window.R", 1.0);
    out.problem.window.T = cfg.get_number("window.T", 1.0);
    out.probes_x = cfg.get_number_list("probes.x", {0.0});
    out.probes_t = cfg.get_number_list("probes.t", {1.0});
    out.eps_ladder = cfg.get_number_list(
        "epsilon", {1.0 / 8, 1.0 / 16, 1.0 / 32, 1.0 / 64, 1.0 / 128});
    out.dx_over_eps = cfg.get_number("grid.dx_over_eps", 1.0 / 40.0);
    out.fd_pad = cfg.get_number("grid.pad", -1.0);
    const std::string ev = cfg.get_string("evaluator", "action");
    if (ev == "action") out.evaluator = Evaluator::action;
    else if (ev == "fd") out.evaluator = Evaluator::fd;
    else if (ev == "both") out.evaluator = Evaluator::both;
    else throw ConfigError("config: evaluator must be action, fd or both");
    out.out_dir = cfg.get_string("out", ".");
    out.force = cfg.get_bool("force", false);
    out.config_hash = cfg.hash();
    cfg.require_all_consumed();

    if (out.eps_ladder.empty()) throw ConfigError("config: epsilon ladder is empty");
    for (std::size_t i = 0; i < out.eps_ladder.size(); ++i) {
        const double e = out.eps_ladder[i];
        if (!(e > 0.0 && e < 1.0))
            throw ConfigError("config: epsilon values must lie in (0,1)");
        if (i > 0 && !(e < out.eps_ladder[i - 1]))
            throw ConfigError("config: epsilon ladder must be strictly decreasing");
    }
    for (double x : out.probes_x)
        if (std::abs(x) > out.problem.window.R)
            throw ConfigError("config: probe x outside [-R, R]");
    for (double t : out.probes_t)
        if (!(t >= 0.0 && t <= out.problem.window.T))
            throw ConfigError("config: probe t outside [0, T]");
    if (!(out.dx_over_eps > 0.0 && out.dx_over_eps <= 1.0 / 20.0))
        throw ConfigError("config: grid.dx_over_eps must lie in (0, 1/20]");
    return out;
}

std::vector<Query> ExperimentConfig::probes(double eps) const {
    std::vector<Query> out;
    for (double x : probes_x)
        for (double t : probes_t) out.push_back({x, t, eps});
    return out;
}

SlopeFit fit_slope(std::span<const double> eps, std::span<const double> err) {
    SlopeFit fit;
    std::vector<double> lx, ly;
    for (std::size_t i = 0; i < eps.size() && i < err.size(); ++i) {
        if (!(err[i] > 0.0) || !std::isfinite(err[i])) continue;
        lx.push_back(std::log(eps[i]));
        ly.push_back(std::log(err[i]));
    }
    fit.used = static_cast<int>(lx.size());
    if (lx.size() < 2) {
        fit.slope = fit.intercept = fit.residual = kNan;
        return fit;
    }
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    const double n = static_cast<double>(lx.size());
    for (std::size_t i = 0; i < lx.size(); ++i) {
        sx += lx[i];
        sy += ly[i];
        sxx += lx[i] * lx[i];
        sxy += lx[i] * ly[i];
    }
    const double denom = n * sxx - sx * sx;
    fit.slope = (n * sxy - sx * sy) / denom;
    fit.intercept = (sy - fit.slope * sx) / n;
    for (std::size_t i = 0; i < lx.size(); ++i)
        fit.residual = std::max(fit.residual,
                                std::abs(ly[i] - (fit.slope * lx[i] + fit.intercept)));
    fit.complete = lx.size() >= 4;
    return fit;
}

namespace {

// The blocking subset of the audit: the general-case conditions only bind
// when the problem actually needs the general theory.
bool audit_gate(const AssumptionReport& audit, const Problem& pb) {
    std::vector<std::string> required{"H1", "H2", "H3", "A1"};
    const bool classical =
        pb.ham.kind() == HamiltonianKind::quadratic && pb.pot.separable_form();
    if (!classical) {
        required.insert(required.end(), {"A0", "A2", "A3", "A4"});
    }
    for (const auto& id : required) {
        const auto* c = audit.find(id);
        if (!c || !c->pass) return false;
    }
    return true;
}

struct RowInputs {
    const ExperimentConfig* cfg;
    const CertifiedConstants* constants;
    const std::vector<double>* u_eff;  // per probe, user-facing values
};

RateRow compute_rate_row(const RowInputs& in, double eps) {
    const auto& cfg = *in.cfg;
    RateRow row;
    row.eps = eps;
    row.slope_running = kNan;
    row.certificate_bound =
        in.constants->certified ? in.constants->rate_constant * eps : kNan;
    row.cross_oracle_gap = kNan;
    try {
        const auto queries = cfg.probes(eps);
        std::vector<double> action_vals, fd_vals;
        if (cfg.evaluator != Evaluator::fd)
            for (const auto& q : queries) action_vals.push_back(u_eps(cfg.problem, q).value);
        if (cfg.evaluator != Evaluator::action) {
            FdOptions opt;
            opt.dx = eps * cfg.dx_over_eps;
            opt.pad = cfg.fd_pad;
            std::vector<double> times(cfg.probes_t);
            std::sort(times.begin(), times.end());
            times.erase(std::unique(times.begin(), times.end()), times.end());
            opt.snapshot_times = times;
            const auto sol = fd_solve_oscillatory(cfg.problem, eps, opt);
            for (const auto& q : queries)
                fd_vals.push_back(sol.value_at(q.x0, q.t0) -
                                  cfg.problem.pot.c0_shift() * q.t0);
        }
        const auto& primary = cfg.evaluator == Evaluator::fd ? fd_vals : action_vals;
        double sup = 0.0;
        for (std::size_t i = 0; i < queries.size(); ++i)
            sup = std::max(sup, std::abs(primary[i] - (*in.u_eff)[i]));
        row.sup_error = sup;
        if (cfg.evaluator == Evaluator::both) {
            double gap = 0.0;
            for (std::size_t i = 0; i < queries.size(); ++i)
                gap = std::max(gap, std::abs(action_vals[i] - fd_vals[i]));
            row.cross_oracle_gap = gap;
            const double dx = eps * cfg.dx_over_eps;
            if (!(gap <= 10.0 * dx + 1e-12)) {
                row.ok = false;
                row.note = "cross-oracle gap above 10 dx";
            }
        }
        if (in.constants->certified && !(sup <= row.certificate_bound + 1e-9)) {
            row.ok = false;
            row.note = row.note.empty() ? "error above certificate" : row.note + "; above certificate";
        }
    } catch (const std::exception& e) {
        row.ok = false;
        row.sup_error = kNan;
        row.note = e.what();
    }
    return row;
}

}  // namespace

ConvergenceReport run_rate_study(const ExperimentConfig& cfg) {
    const auto setup = make_setup(cfg.problem);
    const auto audit = audit_assumptions(cfg.problem.ham, cfg.problem.pot, setup.window);
    if (!audit_gate(audit, cfg.problem) && !cfg.force)
        throw ExperimentError("assumption audit failed; rerun with force to override");

    ConvergenceReport rep;
    rep.config_hash = cfg.config_hash;
    rep.constants = certified_constants(cfg.problem);

    // effective values are eps-independent; evaluate once per probe
    std::vector<double> u_eff;
    {
        const auto queries = cfg.probes(cfg.eps_ladder.front());
        for (const auto& q : queries) u_eff.push_back(u_effective(cfg.problem, q).value);
    }

    RowInputs in{&cfg, &rep.constants, &u_eff};
    std::vector<std::future<RateRow>> futures;
    for (double eps : cfg.eps_ladder)
        futures.push_back(std::async(std::launch::async,
                                     [&in, eps] { return compute_rate_row(in, eps); }));
    for (auto& f : futures) rep.rows.push_back(f.get());

    std::vector<double> eps_ok, err_ok;
    for (auto& row : rep.rows) {
        rep.all_pass = rep.all_pass && row.ok;
        if (row.ok && std::isfinite(row.sup_error)) {
            eps_ok.push_back(row.eps);
            err_ok.push_back(row.sup_error);
            if (eps_ok.size() >= 2)
                row.slope_running = fit_slope(eps_ok, err_ok).slope;
        }
    }
    rep.fit = fit_slope(eps_ok, err_ok);
    rep.complete = rep.fit.complete;
    return rep;
}

std::string ConvergenceReport::csv() const {
    std::ostringstream out;
    out << "epsilon,sup_error,slope_running,certificate_bound,cross_oracle_gap,config_hash\n";
    char hash_hex[20];
    std::snprintf(hash_hex, sizeof hash_hex, "%016llx",
                  static_cast<unsigned long long>(config_hash));
    for (const auto& r : rows) {
        out << fmt_g(r.eps) << ',' << fmt_g(r.sup_error) << ',' << fmt_g(r.slope_running) << ','
            << fmt_g(r.certificate_bound) << ',' << fmt_g(r.cross_oracle_gap) << ','
            << hash_hex << '\n';
    }
    return out.str();
}

// ---------------------------------------------------------------------------
// Checks

namespace {

void add_row(CheckReport& rep, std::string id, bool pass, double stat, std::string detail) {
    rep.all_pass = rep.all_pass && pass;
    rep.rows.push_back({std::move(id), pass, stat, std::move(detail)});
}

}  // namespace

CheckReport run_checks(const ExperimentConfig& cfg) {
    const Problem& pb = cfg.problem;
    const auto setup = make_setup(pb);

    CheckReport rep;
    rep.config_hash = cfg.config_hash;
    rep.audit = audit_assumptions(pb.ham, pb.pot, setup.window);
    for (const auto& c : rep.audit.checks)
        add_row(rep, "audit." + c.id, c.pass, c.statistic,
                c.note.empty() ? c.description : c.description + " (" + c.note + ")");

    rep.constants = certified_constants(pb);
    add_row(rep, "const.certified", rep.constants.certified, rep.constants.rate_constant,
            rep.constants.closed_form ? "closed-form constants" : "sampled constants");
    add_row(rep, "const.r0", rep.constants.r0 > 0.0, rep.constants.r0, "energy cutoff");
    if (pb.pot.x_independent())
        add_row(rep, "const.uniform", std::isfinite(rep.constants.uniform_constant),
                rep.constants.uniform_constant, "x-independent potential: uniform-in-x constant");

    // averaging battery on the problem's own integrands
    const double a = -pb.window.R, b = -pb.window.R + 1.0;
    std::vector<double> eps_list;
    for (int k = 3; k <= 8; ++k) eps_list.push_back(std::pow(2.0, -k));
    for (double r : {setup.r_cut / 10.0, setup.r_cut / 100.0}) {
        Oscilland kr;
        kr.f = [&pb, r](double x, double y) {
            return 1.0 / std::abs(pb.ham.velocity(1, r - pb.pot.value(x, y)));
        };
        kr.fx = [&pb, r](double x, double y) {
            const double p = pb.ham.branch_inverse(1, r - pb.pot.value(x, y));
            const double hp = pb.ham.slope(p);
            return pb.pot.dx(x, y) * pb.ham.curvature(p) / (hp * hp * hp);
        };
        kr.y_breakpoints = pb.pot.y_breakpoints();
        const auto chk = verify_ergodic_bound(kr, a, b, eps_list);
        double worst = 0.0;
        for (const auto& row : chk.rows) worst = std::max(worst, row.error / row.bound);
        add_row(rep, "avg.sojourn@r=" + fmt_g(r), chk.all_pass, worst,
                "oscillatory vs averaged sojourn integrand, worst error/bound");

        Oscilland fr;
        fr.f = [&pb, r](double x, double y) {
            return std::abs(pb.ham.branch_inverse(1, r - pb.pot.value(x, y)));
        };
        fr.fx = [&pb, r](double x, double y) {
            const double q = r - pb.pot.value(x, y);
            return -pb.pot.dx(x, y) / pb.ham.velocity(1, q);
        };
        fr.y_breakpoints = pb.pot.y_breakpoints();
        const auto chk2 = verify_ergodic_bound(fr, a, b, eps_list);
        worst = 0.0;
        for (const auto& row : chk2.rows) worst = std::max(worst, row.error / row.bound);
        add_row(rep, "avg.momentum@r=" + fmt_g(r), chk2.all_pass, worst,
                "oscillatory vs averaged momentum integrand, worst error/bound");
    }

    // trajectory spot checks at the first probe
    const double eps = cfg.eps_ladder[std::min<std::size_t>(1, cfg.eps_ladder.size() - 1)];
    Query q{cfg.probes_x.front(), cfg.probes_t.back(), eps};
    if (q.t0 > 0.0) {
        for (double r : {setup.r_cut / 4.0, setup.r_cut / 16.0})
            for (int branch : {1, 2}) {
                const std::string tag = "@r=" + fmt_g(r) + ",i=" + std::to_string(branch);
                try {
                    const auto path = integrate_el(pb, q, r, branch);
                    add_row(rep, "traj.drift" + tag, path.drift < 1e-6, path.drift,
                            "energy drift along the integrated path");
                    const double xq = oscillatory_endpoint(pb, q, r, branch);
                    const double gap = std::abs(eps * path.end - xq);
                    add_row(rep, "traj.endpoint" + tag, gap <= 1e-6, gap,
                            "ODE endpoint vs quadrature endpoint");
                    const double elapsed =
                        oscillatory_elapsed(pb, q.x0, eps * path.end, eps, r, branch);
                    add_row(rep, "traj.reparam" + tag, std::abs(elapsed - q.t0) <= 1e-8,
                            std::abs(elapsed - q.t0), "time reparametrization identity");
                } catch (const std::exception& e) {
                    add_row(rep, "traj" + tag, false, kNan, e.what());
                }
            }

        // truncation safety and the supersolution ceiling
        try {
            const auto uq = u_eps(pb, q);
            for (double r : {setup.r_cut, 2.0 * setup.r_cut}) {
                const double a1 = action_positive(pb, q, r, 1);
                const double a2 = action_positive(pb, q, r, 2);
                const double margin = std::min(a1, a2) - (uq.value_normalized + q.t0);
                add_row(rep, "trunc.margin@r=" + fmt_g(r), margin >= -1e-8, margin,
                        "actions at and beyond the cutoff exceed the value by t0");
            }
            const double ceil_gap = uq.supersolution_bound - uq.value_normalized;
            add_row(rep, "value.supersolution", ceil_gap >= -1e-8, ceil_gap,
                    "value below u0(x0) + cbar t0");
        } catch (const std::exception& e) {
            add_row(rep, "trunc", false, kNan, e.what());
        }

        // endpoint certificates against the certified constant
        if (rep.constants.certified) {
            double worst1 = 0.0, worst2 = 0.0;
            for (int k = 0; k < 16; ++k) {
                const double r = setup.r_cut * std::pow(10.0, -6.0 * (k + 1) / 16.0);
                const auto m1 = oscillatory_march(pb, q.x0, q.t0, eps, r, 1);
                const double c1 = effective_endpoint(pb, q, r, 1);
                worst1 = std::max(worst1, std::abs(m1.x_end - c1) / eps);
                const auto m2 = oscillatory_march(pb, q.x0, q.t0, eps, r, 2);
                const double c2 = effective_endpoint(pb, q, r, 2);
                worst2 = std::max(worst2, std::abs(m2.x_end - c2) / eps);
            }
            add_row(rep, "cert.endpoint.right", worst1 <= rep.constants.endpoint_constant + 1e-9,
                    worst1, "max |endpoint - c_{1,r}|/eps vs C_K");
            add_row(rep, "cert.endpoint.left",
                    worst2 <= rep.constants.endpoint_constant_left + 1e-9, worst2,
                    "max |endpoint - c_{2,r}|/eps vs left C_K");
        }
    }
    return rep;
}

std::string CheckReport::table() const {
    std::ostringstream out;
    char hash_hex[20];
    std::snprintf(hash_hex, sizeof hash_hex, "%016llx",
                  static_cast<unsigned long long>(config_hash));
    out << "# check table (config " << hash_hex << ")\n";
    for (const auto& r : rows) {
        char line[256];
        std::snprintf(line, sizeof line, "%-4s %-28s %14.6g  %s\n", r.pass ? "PASS" : "FAIL",
                      r.id.c_str(), r.statistic, r.detail.c_str());
        out << line;
    }
    out << (all_pass ? "# all checks passed\n" : "# some checks FAILED\n");
    return out.str();
}

}  // namespace hj1d
