// hj1d: command line front end for the 1D Hamilton-Jacobi homogenization
// toolkit. Subcommands:
//
//   solve        one probe, prints the value report as JSON
//   rate         convergence study against the eps ladder, CSV output
//   check        assumption audit and certificate table
//   dump-paths   trajectory and separatrix CSV dumps
//   effective-h  tabulated effective Hamiltonian as CSV
//
// Exit codes: 0 all assertions passed, 1 a numerical assertion failed,
// 2 configuration error.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>

#include <CLI11.hpp>
#include <json.hpp>

#include "hj1d/experiment.hpp"
#include "hj1d/trajectories.hpp"

using nlohmann::json;

namespace {

struct CommonArgs {
    std::string config_path;
    std::string out_dir;
    std::string evaluator;
    bool force = false;
};

hj1d::ExperimentConfig load(const CommonArgs& args) {
    auto cfg = hj1d::Config::parse_file(args.config_path);
    auto exp = hj1d::ExperimentConfig::from_config(cfg);
    if (!args.out_dir.empty()) exp.out_dir = args.out_dir;
    if (!args.evaluator.empty()) {
        if (args.evaluator == "action") exp.evaluator = hj1d::Evaluator::action;
        else if (args.evaluator == "fd") exp.evaluator = hj1d::Evaluator::fd;
        else if (args.evaluator == "both") exp.evaluator = hj1d::Evaluator::both;
        else throw hj1d::ConfigError("evaluator must be action, fd or both");
    }
    if (args.force) exp.force = true;
    return exp;
}

void write_file(const std::string& dir, const std::string& name, const std::string& body) {
    std::filesystem::create_directories(dir);
    std::ofstream out(dir + "/" + name);
    out << body;
}

const char* branch_name(hj1d::WinningBranch b) {
    switch (b) {
        case hj1d::WinningBranch::nonpositive: return "nonpositive";
        case hj1d::WinningBranch::positive_right: return "positive_right";
        case hj1d::WinningBranch::positive_left: return "positive_left";
    }
    return "?";
}

int cmd_solve(const CommonArgs& args, double x0, double t0, double eps, bool have_probe) {
    auto exp = load(args);
    hj1d::Query q{exp.probes_x.front(), exp.probes_t.front(), exp.eps_ladder.front()};
    if (have_probe) q = {x0, t0, eps};

    json out;
    bool pass = true;
    const auto eff = hj1d::u_effective(exp.problem, q);
    out["u_effective"] = eff.value;
    out["u_effective_branch"] = branch_name(eff.branch);
    if (!std::isnan(eff.r_star)) out["u_effective_r_star"] = eff.r_star;

    if (exp.evaluator != hj1d::Evaluator::fd) {
        const auto rep = hj1d::u_eps(exp.problem, q);
        out["u_eps"] = rep.value;
        out["branch"] = branch_name(rep.branch);
        if (!std::isnan(rep.r_star)) out["r_star"] = rep.r_star;
        out["endpoint"] = rep.endpoint;
        out["r_cut"] = rep.r_cut;
        pass = pass && rep.value_normalized <= rep.supersolution_bound + 1e-8;
    }
    if (exp.evaluator != hj1d::Evaluator::action) {
        hj1d::FdOptions opt;
        opt.dx = q.eps * exp.dx_over_eps;
        opt.pad = exp.fd_pad;
        opt.snapshot_times = {q.t0};
        const auto sol = fd_solve_oscillatory(exp.problem, q.eps, opt);
        const double v = sol.value_at(q.x0, q.t0) - exp.problem.pot.c0_shift() * q.t0;
        out["u_eps_fd"] = v;
        out["fd_dx"] = opt.dx;
        out["fd_theta"] = sol.theta;
        if (exp.evaluator == hj1d::Evaluator::both) {
            const double gap = std::abs(v - out["u_eps"].get<double>());
            out["cross_oracle_gap"] = gap;
            pass = pass && gap <= 10.0 * opt.dx + 1e-12;
        }
    }

    const auto consts = hj1d::certified_constants(exp.problem);
    out["constants"] = {{"r0", consts.r0},
                        {"endpoint", consts.endpoint_constant},
                        {"averaging", consts.averaging_constant},
                        {"rate", consts.rate_constant},
                        {"certified", consts.certified}};
    if (std::isfinite(consts.uniform_constant))
        out["constants"]["uniform"] = consts.uniform_constant;
    out["pass"] = pass;
    std::cout << out.dump(2) << "\n";
    return pass ? 0 : 1;
}

int cmd_rate(const CommonArgs& args) {
    auto exp = load(args);
    const auto rep = hj1d::run_rate_study(exp);
    const std::string csv = rep.csv();
    std::cout << csv;
    if (rep.fit.complete)
        std::cout << "# slope " << rep.fit.slope << " intercept " << rep.fit.intercept
                  << " residual " << rep.fit.residual << "\n";
    else
        std::cout << "# incomplete: fewer than 4 rows with positive error\n";
    write_file(exp.out_dir, "rate.csv", csv);
    return rep.all_pass ? 0 : 1;
}

int cmd_check(const CommonArgs& args) {
    auto exp = load(args);
    const auto rep = hj1d::run_checks(exp);
    const std::string table = rep.table();
    std::cout << table;
    write_file(exp.out_dir, "check.txt", table);
    return rep.all_pass ? 0 : 1;
}

int cmd_dump_paths(const CommonArgs& args, std::vector<double> r_list, int branch) {
    auto exp = load(args);
    const auto setup = hj1d::make_setup(exp.problem);
    if (r_list.empty()) r_list = {setup.r_cut / 4.0, setup.r_cut / 16.0};
    hj1d::Query q{exp.probes_x.front(), exp.probes_t.back(), exp.eps_ladder.front()};

    std::filesystem::create_directories(exp.out_dir);
    for (double r : r_list)
        for (int i : {1, 2}) {
            if (branch != 0 && i != branch) continue;
            const auto path = hj1d::integrate_el(exp.problem, q, r, i);
            char name[64];
            std::snprintf(name, sizeof name, "path_r%g_i%d.csv", r, i);
            std::ofstream out(exp.out_dir + "/" + std::string(name));
            out << "s,eta,eta_dot,drift\n";
            for (std::size_t k = 0; k < path.s.size(); ++k) {
                const double v =
                    exp.problem.pot.value(q.eps * path.eta[k], path.eta[k]);
                const double h =
                    exp.problem.ham.value(exp.problem.ham.legendre_slope(path.eta_dot[k]));
                char line[160];
                std::snprintf(line, sizeof line, "%.12g,%.12g,%.12g,%.12g\n", path.s[k],
                              path.eta[k], path.eta_dot[k], std::abs(h + v - r));
                out << line;
            }
        }

    const auto sep = hj1d::separatrix_paths(exp.problem, q);
    std::ofstream out(exp.out_dir + "/separatrix.csv");
    out << "s,gamma_plus,gamma_minus\n";
    for (std::size_t k = 0; k < sep.s.size(); ++k) {
        char line[128];
        std::snprintf(line, sizeof line, "%.12g,%.12g,%.12g\n", sep.s[k], sep.plus[k],
                      sep.minus[k]);
        out << line;
    }
    std::cout << "wrote path dumps to " << exp.out_dir << "\n";
    return 0;
}

int cmd_effective_h(const CommonArgs& args) {
    auto exp = load(args);
    const auto setup = hj1d::make_setup(exp.problem);
    const double p_max = exp.problem.ham.grad_bound() + 1.0;

    std::filesystem::create_directories(exp.out_dir);
    std::ofstream out(exp.out_dir + "/effective_h.csv");
    out << "x,p,hbar\n";
    const int nx = exp.problem.pot.x_independent() ? 1 : 33;
    const int np = 129;
    for (int i = 0; i < nx; ++i) {
        const double x =
            setup.window.lo + setup.window.length() * (nx == 1 ? 0.0 : i / double(nx - 1));
        for (int k = 0; k < np; ++k) {
            const double p = -p_max + 2.0 * p_max * k / (np - 1);
            char line[128];
            std::snprintf(line, sizeof line, "%.12g,%.12g,%.12g\n", x, p,
                          hj1d::effective_hamiltonian(exp.problem, x, p));
            out << line;
        }
    }
    std::ofstream edges(exp.out_dir + "/flat_edges.csv");
    edges << "x,edge_minus,edge_plus\n";
    for (int i = 0; i < nx; ++i) {
        const double x =
            setup.window.lo + setup.window.length() * (nx == 1 ? 0.0 : i / double(nx - 1));
        char line[128];
        std::snprintf(line, sizeof line, "%.12g,%.12g,%.12g\n", x,
                      hj1d::flat_edge(exp.problem, x, 2), hj1d::flat_edge(exp.problem, x, 1));
        edges << line;
    }
    std::cout << "wrote effective Hamiltonian tables to " << exp.out_dir << "\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"1D Hamilton-Jacobi periodic homogenization toolkit"};
    app.require_subcommand(1);

    CommonArgs common;
    double x0 = 0.0, t0 = 1.0, eps = 0.125;
    std::vector<double> r_list;
    int branch = 0;

    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--config", common.config_path, "experiment config file")->required();
        sub->add_option("--out", common.out_dir, "output directory");
        sub->add_option("--evaluator", common.evaluator, "action | fd | both");
        sub->add_flag("--force", common.force, "run even if the assumption audit fails");
    };

    auto* solve = app.add_subcommand("solve", "evaluate one probe");
    add_common(solve);
    auto* ox = solve->add_option("--x0", x0, "probe position");
    solve->add_option("--t0", t0, "probe time");
    solve->add_option("--eps", eps, "oscillation period");

    auto* rate = app.add_subcommand("rate", "convergence-rate study");
    add_common(rate);

    auto* check = app.add_subcommand("check", "assumption audit and certificates");
    add_common(check);

    auto* dump = app.add_subcommand("dump-paths", "trajectory CSV dumps");
    add_common(dump);
    dump->add_option("--r", r_list, "energy levels to dump");
    dump->add_option("--branch", branch, "restrict to branch 1 or 2");

    auto* eff = app.add_subcommand("effective-h", "effective Hamiltonian table");
    add_common(eff);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : 2;
    }

    try {
        if (solve->parsed()) return cmd_solve(common, x0, t0, eps, ox->count() > 0);
        if (rate->parsed()) return cmd_rate(common);
        if (check->parsed()) return cmd_check(common);
        if (dump->parsed()) return cmd_dump_paths(common, r_list, branch);
        if (eff->parsed()) return cmd_effective_h(common);
    } catch (const hj1d::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 2;
}
