#include <doctest.h>

#include <cmath>

#include "hj1d/trajectories.hpp"
#include "hj1d/values.hpp"

using namespace hj1d;

namespace {

Problem make_problem(Potential pot, InitialData u0, double R = 1.0, double T = 1.0) {
    Problem pb;
    pb.ham = Hamiltonian::quadratic();
    pb.pot = std::move(pot);
    pb.u0 = std::move(u0);
    pb.window = {R, T};
    return pb;
}

// value oracle for the free problem: min over y of u0(y) + (y-x0)^2 / (2 t0)
double hopf_lax_oracle(const InitialData& u0, double x0, double t0, int n = 100000) {
    const double span = 10.0;
    double best = 1e300;
    for (int i = 0; i <= n; ++i) {
        const double y = x0 - span + 2.0 * span * i / n;
        best = std::min(best, u0.value(y) + (y - x0) * (y - x0) / (2.0 * t0));
    }
    return best;
}

}  // namespace

TEST_SUITE_BEGIN("values");

TEST_CASE("energy cutoff: closed form, flat data, monotone in the Lipschitz bound") {
    // Lip = 1, ||V|| = 1: residual r - 5/2 - sqrt(2(r+1)) changes sign in (6.3, 6.4)
    auto pb = make_problem(
        Potential::separable(PotentialAKind::one, PotentialBKind::cos2pi_minus1, 1.0, 0.5),
        InitialData::clamp_ramp());
    CHECK(pb.pot.sup_norm() == doctest::Approx(1.0));
    const double r0 = r0_threshold(pb);
    CHECK(r0 > 6.3);
    CHECK(r0 < 6.4);
    const double cbar = 0.5 + 1.0;
    CHECK(r0 - (cbar + 1.0) - std::sqrt(2.0 * (r0 + 1.0)) ==
          doctest::Approx(0.0).epsilon(1e-9));

    auto flat = make_problem(
        Potential::separable(PotentialAKind::one, PotentialBKind::cos2pi_minus1, 1.0, 0.5),
        InitialData::constant(3.0));
    CHECK(r0_threshold(flat) == doctest::Approx(2.0).epsilon(1e-12));

    auto steep = make_problem(
        Potential::separable(PotentialAKind::one, PotentialBKind::cos2pi_minus1, 1.0, 0.5),
        InitialData::cone(2.0, 1.0));
    CHECK(r0_threshold(steep) > r0);
}

TEST_CASE("energy cutoff for a non-quadratic kind solves the velocity conditions") {
    Problem pb;
    pb.ham = Hamiltonian::power(4.0, 2.0);
    pb.pot = Potential::separable(PotentialAKind::one, PotentialBKind::cos2pi_minus1);
    pb.u0 = InitialData::constant(0.0);
    pb.window = {1.0, 1.0};
    const double r0 = r0_threshold(pb);
    const double k0 = pb.ham.growth_constant();
    const double g = std::min(pb.ham.velocity(1, r0), -pb.ham.velocity(2, r0));
    const double cbar = pb.pot.sup_norm();
    CHECK(g >= 2.0 * k0 - 1e-9);
    CHECK(g * (0.5 * g - k0) >= cbar + 1.0 - 1e-6);
    // slightly below the cutoff at least one condition must fail
    const double g2 = std::min(pb.ham.velocity(1, 0.99 * r0), -pb.ham.velocity(2, 0.99 * r0));
    CHECK((g2 < 2.0 * k0 || g2 * (0.5 * g2 - k0) < cbar + 1.0));
}

TEST_CASE("free problem: the action at r = 1/2 reproduces the Hopf-Lax minimum") {
    auto pb = make_problem(Potential::zero(), InitialData::clamp_ramp());
    const Query q{0.0, 1.0, 0.125};
    // A(r) = r t0 + u0(x0 + t0 sqrt(2r)) for the right branch
    CHECK(action_positive(pb, q, 0.5, 1) == doctest::Approx(-0.5).epsilon(1e-9));
    CHECK(action_positive(pb, q, 0.5, 2) == doctest::Approx(1.5).epsilon(1e-9));

    const auto rep = u_eps(pb, q);
    CHECK(rep.value == doctest::Approx(-0.5).epsilon(1e-8));
    CHECK(rep.branch == WinningBranch::positive_right);
    CHECK(rep.r_star == doctest::Approx(0.5).epsilon(1e-4));
    CHECK(rep.value == doctest::Approx(hopf_lax_oracle(pb.u0, 0.0, 1.0)).epsilon(1e-6));
}

TEST_CASE("classical and general action forms agree for quadratic kinds") {
    auto pb = make_problem(
        Potential::separable(PotentialAKind::two_plus_sin, PotentialBKind::cos2pi_minus1),
        InitialData::clamp_ramp());
    const Query q{0.25, 0.75, 0.125};
    for (double r : {0.3, 1.0, 3.0})
        for (int branch : {1, 2}) {
            const double general = action_positive(pb, q, r, branch);
            const double classical = action_positive_classical(pb, q, r, branch);
            CHECK(general == doctest::Approx(classical).epsilon(1e-8));
        }
}

TEST_CASE("nonpositive branch: stationary start returns u0 exactly") {
    auto pb = make_problem(
        Potential::separable(PotentialAKind::one, PotentialBKind::cos2pi_minus1),
        InitialData::clamp_ramp());
    const Query q{0.0, 1.0, 0.125};  // x0/eps = 0 sits on the zero line
    const auto neg = action_nonpositive(pb, q);
    CHECK(neg.value == doctest::Approx(pb.u0.value(0.0)).epsilon(1e-14));
    CHECK(neg.endpoint == doctest::Approx(0.0));
}

TEST_CASE("nonpositive branch stays within the certified window of u0(x0)") {
    auto tent = make_problem(
        Potential::separable(PotentialAKind::one, PotentialBKind::tent_prop43),
        InitialData::constant(0.0));
    const Query q{0.0, 1.0, 0.125};
    const auto neg = action_nonpositive(tent, q);
    // |value - u0(x0)| <= (sqrt(2 ||V||) + Lip) eps with Lip = 0, ||V|| = 1
    CHECK(std::abs(neg.value - 0.0) <= std::sqrt(2.0) * q.eps);
    CHECK(neg.value >= 0.0);

    auto shifted = make_problem(
        Potential::separable(PotentialAKind::one, PotentialBKind::tent_prop43),
        InitialData::constant(4.0));
    const auto neg2 = action_nonpositive(shifted, q);
    CHECK(neg2.value >= 4.0 - 1e-12);
    CHECK(neg2.value <= 4.0 + std::sqrt(2.0) * q.eps);
}

TEST_CASE("optimality example: u_eps lands between eps/6 and the certified constant") {
    auto pb = make_problem(
        Potential::separable(PotentialAKind::one, PotentialBKind::tent_prop43),
        InitialData::constant(0.0));
    const Query q{0.0, 1.0, 1.0 / 16.0};
    const auto rep = u_eps(pb, q);
    CHECK(rep.value >= q.eps / 6.0);
    CHECK(rep.value <= std::sqrt(2.0) * q.eps);
    CHECK(rep.branch == WinningBranch::nonpositive);
}

TEST_CASE("zero horizon returns the initial datum") {
    auto pb = make_problem(
        Potential::separable(PotentialAKind::one, PotentialBKind::cos2pi_minus1),
        InitialData::clamp_ramp());
    const Query q{0.5, 0.0, 0.125};
    CHECK(u_eps(pb, q).value == doctest::Approx(-0.5));
    CHECK(u_effective(pb, q).value == doctest::Approx(-0.5));
}

TEST_CASE("averaged action of the free problem has the closed form r - sqrt(2r)") {
    auto pb = make_problem(Potential::zero(), InitialData::clamp_ramp());
    const Query q{0.0, 1.0, 0.125};
    for (double r : {0.125, 0.5, 0.45})
        CHECK(effective_I(pb, q, r, 1) ==
              doctest::Approx(r - std::sqrt(2.0 * r)).epsilon(1e-9));
    // grid minimization oracle over r
    double best = 1e300;
    for (int i = 1; i <= 20000; ++i) {
        const double r = 2.0 * i / 20000.0;
        best = std::min(best, r - std::sqrt(2.0 * r));
    }
    CHECK(best == doctest::Approx(-0.5).epsilon(1e-8));
    const auto rep = u_effective(pb, q);
    CHECK(rep.value == doctest::Approx(-0.5).epsilon(1e-8));
    CHECK(rep.r_star == doctest::Approx(0.5).epsilon(1e-4));
}

TEST_CASE("flat data keeps every averaged action above the datum") {
    auto pb = make_problem(
        Potential::separable(PotentialAKind::two_plus_sin, PotentialBKind::cos2pi_minus1),
        InitialData::constant(1.5));
    const Query q{0.0, 1.0, 0.125};
    const double r0 = r0_threshold(pb);
    for (int k = 0; k < 24; ++k) {
        const double r = r0 * std::pow(0.6, k);
        CHECK(effective_I(pb, q, r, 1) >= 1.5 - 1e-10);
        CHECK(effective_I(pb, q, r, 2) >= 1.5 - 1e-10);
    }
    CHECK(u_effective(pb, q).value == doctest::Approx(1.5).epsilon(1e-10));
}

TEST_CASE("classical and general averaged forms agree for quadratic kinds") {
    auto pb = make_problem(
        Potential::separable(PotentialAKind::one, PotentialBKind::cos2pi_minus1),
        InitialData::clamp_ramp());
    const Query q{0.0, 1.0, 0.125};
    for (double r : {0.5, 1.0})
        for (int branch : {1, 2})
            CHECK(effective_I(pb, q, r, branch) ==
                  doctest::Approx(effective_I_classical(pb, q, r, branch)).epsilon(1e-8));
}

TEST_CASE("effective value of the optimality example is exactly zero") {
    auto pb = make_problem(
        Potential::separable(PotentialAKind::one, PotentialBKind::tent_prop43),
        InitialData::constant(0.0));
    const Query q{0.0, 1.0, 0.125};
    const auto rep = u_effective(pb, q);
    CHECK(std::abs(rep.value) <= 1e-8);
    CHECK(rep.branch == WinningBranch::nonpositive);
}

TEST_CASE("constant shift is re-applied to reported values") {
    auto pb = make_problem(Potential::zero(), InitialData::constant(2.0));
    pb.pot.set_c0_shift(0.7);
    const Query q{0.0, 0.5, 0.125};
    CHECK(u_eps(pb, q).value == doctest::Approx(2.0 - 0.7 * 0.5).epsilon(1e-10));
    CHECK(u_effective(pb, q).value == doctest::Approx(2.0 - 0.7 * 0.5).epsilon(1e-10));
}

TEST_CASE("certified constants: x-independent uniform constant") {
    // V(y) = 2(cos 2 pi y - 1), Lip(u0) = 1: C = 2 (1 + 4 sqrt(2)) for ||V|| = 2... 
    auto pb = make_problem(
        Potential::separable(PotentialAKind::one, PotentialBKind::cos2pi_minus1),
        InitialData::clamp_ramp());
    const auto c = certified_constants(pb);
    CHECK(pb.pot.sup_norm() == doctest::Approx(2.0));
    CHECK(c.uniform_constant == doctest::Approx(2.0 * (1.0 + 4.0 * std::sqrt(2.0))));
    CHECK(c.closed_form);
    CHECK(c.certified);
}

TEST_CASE("certified constants: constant amplitude gives the bare endpoint constant") {
    auto pb = make_problem(
        Potential::separable(PotentialAKind::one, PotentialBKind::cos2pi_minus1),
        InitialData::constant(0.0));
    const auto c = certified_constants(pb);
    // a'/a = 0 and alpha = beta: C_K = 2
    CHECK(c.endpoint_constant == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(c.alpha_T == doctest::Approx(1.0));
    CHECK(c.beta_T == doctest::Approx(1.0));
}

TEST_CASE("certified constants: varying amplitude matches the hand formula") {
    auto pb = make_problem(
        Potential::separable(PotentialAKind::two_plus_sin, PotentialBKind::cos2pi_minus1),
        InitialData::clamp_ramp());
    const auto setup = make_setup(pb);
    const auto c = certified_constants(pb);
    // recompute C_K from the window statistics
    double amin = 1e300, amax = 0.0, slope = 0.0;
    for (int i = 0; i <= 20000; ++i) {
        const double x = setup.window.lo + setup.window.length() * i / 20000.0;
        const double a = 2.0 + std::sin(x);
        amin = std::min(amin, a);
        amax = std::max(amax, a);
        slope = std::max(slope, std::abs(std::cos(x) / a));
    }
    const double ck = std::sqrt(amax / amin) * (2.0 + 0.5 * setup.c0 * slope);
    CHECK(c.endpoint_constant == doctest::Approx(ck).epsilon(1e-6));
    const double f1 = std::sqrt(pb.pot.sup_norm());
    const double f2 = 1.5 / std::sqrt(2.0) * f1 * slope;
    CHECK(c.averaging_constant ==
          doctest::Approx(2.0 * f1 + setup.c0 * f2 + ck * f1).epsilon(1e-6));
    CHECK(c.rate_constant >=
          2.0 * c.averaging_constant + c.endpoint_constant * 1.0 - 1e-9);
    CHECK(std::isnan(c.uniform_constant));
}

TEST_CASE("supersolution ceiling and truncation margin") {
    auto pb = make_problem(
        Potential::separable(PotentialAKind::two_plus_sin, PotentialBKind::cos2pi_minus1),
        InitialData::clamp_ramp());
    const Query q{0.5, 1.0, 0.125};
    const auto rep = u_eps(pb, q);
    CHECK(rep.value_normalized <= rep.supersolution_bound + 1e-8);
    const double r0 = rep.r_cut;
    for (double r : {r0, 2.0 * r0}) {
        CHECK(action_positive(pb, q, r, 1) >= rep.value_normalized + q.t0 - 1e-8);
        CHECK(action_positive(pb, q, r, 2) >= rep.value_normalized + q.t0 - 1e-8);
    }
}

TEST_CASE("endpoint certificate holds along the energy grid") {
    auto pb = make_problem(
        Potential::separable(PotentialAKind::two_plus_sin, PotentialBKind::cos2pi_minus1),
        InitialData::clamp_ramp());
    const auto c = certified_constants(pb);
    const Query q{0.0, 1.0, 1.0 / 32.0};
    for (int k = 0; k < 12; ++k) {
        const double r = c.r0 * std::pow(10.0, -5.0 * (k + 1) / 12.0);
        const auto m = oscillatory_march(pb, q.x0, q.t0, q.eps, r, 1);
        const double c1 = effective_endpoint(pb, q, r, 1);
        CHECK(std::abs(m.x_end - c1) <= c.endpoint_constant * q.eps + 1e-9);
        const auto m2 = oscillatory_march(pb, q.x0, q.t0, q.eps, r, 2);
        const double c2 = effective_endpoint(pb, q, r, 2);
        CHECK(std::abs(m2.x_end - c2) <= c.endpoint_constant_left * q.eps + 1e-9);
    }
}

TEST_CASE("rate certificate at a probe batch") {
    auto pb = make_problem(
        Potential::separable(PotentialAKind::two_plus_sin, PotentialBKind::cos2pi_minus1),
        InitialData::clamp_ramp());
    const auto c = certified_constants(pb);
    for (double eps : {0.125, 0.0625}) {
        for (double x0 : {-1.0, 0.0, 1.0}) {
            const Query q{x0, 1.0, eps};
            const double ue = u_eps(pb, q).value;
            const double u = u_effective(pb, q).value;
            CHECK(std::abs(ue - u) <= c.rate_constant * eps + 1e-8);
        }
    }
}

TEST_SUITE_END();
