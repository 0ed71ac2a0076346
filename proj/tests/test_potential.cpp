#include <doctest.h>

#include <cmath>

#include "hj1d/assumptions.hpp"
#include "hj1d/hamiltonian.hpp"
#include "hj1d/potential.hpp"

using namespace hj1d;

TEST_SUITE_BEGIN("potential");

TEST_CASE("cosine profile: periodicity, range, zeros") {
    const auto V = Potential::separable(PotentialAKind::two_plus_sin,
                                        PotentialBKind::cos2pi_minus1);
    for (double x : {-1.0, 0.3, 2.0})
        for (double y : {0.1, 0.5, 0.9})
            CHECK(V.value(x, y + 1.0) == doctest::Approx(V.value(x, y)).epsilon(1e-13));
    CHECK(V.max_value() == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(V.sup_norm() == doctest::Approx(6.0));  // max a = 3, max |b| = 2
    REQUIRE(V.y_zeros().size() == 1);
    CHECK(V.y_zeros()[0] == doctest::Approx(0.0));
    CHECK(V.value(5.0, V.y0()) == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("tent profile matches its defining shape") {
    const auto V = Potential::separable(PotentialAKind::one, PotentialBKind::tent_prop43);
    CHECK(V.b(0.5) == doctest::Approx(0.0));
    CHECK(V.b(0.0) == doctest::Approx(-1.0));
    for (double y = -1.0 / 3.0; y <= 1.0 / 3.0; y += 1.0 / 64.0)
        CHECK(V.b(y) == doctest::Approx(-1.0));   // flat floor away from the peak
    CHECK(V.b(0.5 - 1.0 / 12.0) == doctest::Approx(-0.5));
    CHECK(V.max_value() == doctest::Approx(0.0));
    CHECK(V.sup_norm() == doctest::Approx(1.0));
    REQUIRE(V.y_zeros().size() == 1);
    CHECK(V.y_zeros()[0] == doctest::Approx(0.5));
}

TEST_CASE("table profile interpolates periodically") {
    const auto V = Potential::separable(PotentialAKind::one, PotentialBKind::table, 1.0, 1.0,
                                        0.0, {0.0, -1.0, -1.0, -0.5});
    CHECK(V.b(0.0) == doctest::Approx(0.0));
    CHECK(V.b(0.125) == doctest::Approx(-0.5));   // halfway to the first knot
    CHECK(V.b(0.875) == doctest::Approx(-0.25));  // wraps to the first sample
    CHECK(V.max_value() == doctest::Approx(0.0));
}

TEST_CASE("offset potential loses the zero line and fails A1 with a witness") {
    const auto H = Hamiltonian::quadratic();
    const auto V = Potential::separable(PotentialAKind::one, PotentialBKind::cos2pi_minus1, 1.0,
                                        1.0, -0.5);
    const auto rep = audit_assumptions(H, V, {-1.0, 1.0});
    const auto* a1 = rep.find("A1");
    REQUIRE(a1 != nullptr);
    CHECK_FALSE(a1->pass);
    CHECK(a1->statistic == doctest::Approx(-0.5).epsilon(1e-9));
    CHECK_FALSE(rep.all_pass);
}

TEST_CASE("compliant separable problem passes the full audit") {
    const auto H = Hamiltonian::quadratic();
    const auto V = Potential::separable(PotentialAKind::two_plus_sin,
                                        PotentialBKind::cos2pi_minus1);
    const auto rep = audit_assumptions(H, V, {-1.0, 1.0});
    for (const char* id : {"H1", "H2", "H3", "H4", "A0", "A1", "A2", "A3", "A4"}) {
        const auto* c = rep.find(id);
        REQUIRE(c != nullptr);
        CHECK_MESSAGE(c->pass, id);
    }
    // quadratic kinetic energy: the A0 statistic is identically 1/sqrt(2)
    CHECK(rep.find("A0")->statistic == doctest::Approx(1.0 / std::sqrt(2.0)).epsilon(1e-12));
    // |Vx/V| = |a'/a| <= 1/sqrt(3), attained where sin x = -1/2
    CHECK(rep.find("VX_OVER_V")->statistic ==
          doctest::Approx(1.0 / std::sqrt(3.0)).epsilon(1e-4));
    CHECK(rep.find("SQRT_LIP")->pass);
}

TEST_CASE("x-independent potential: A2/A3 vanish and the sojourn ratio is 1") {
    const auto H = Hamiltonian::quadratic();
    const auto V = Potential::separable(PotentialAKind::one, PotentialBKind::cos2pi_minus1);
    const auto rep = audit_assumptions(H, V, {-1.0, 1.0});
    CHECK(rep.find("A2")->statistic == doctest::Approx(0.0));
    CHECK(rep.find("A3")->statistic == doctest::Approx(0.0));
    CHECK(rep.find("A4")->statistic == doctest::Approx(1.0).epsilon(1e-6));
    CHECK(rep.all_pass);
}

TEST_CASE("cubic power Hamiltonian: A0 statistic decays like sqrt(p)") {
    const auto H = Hamiltonian::power(3.0, 2.0);
    const auto V = Potential::separable(PotentialAKind::two_plus_sin,
                                        PotentialBKind::cos2pi_minus1);
    const auto rep = audit_assumptions(H, V, {-1.0, 1.0});
    const auto* a0 = rep.find("A0");
    REQUIRE(a0 != nullptr);
    CHECK(a0->pass);
    // statistic = (gamma-1) p^{gamma/2 - 1} at the largest ladder point p = 1
    CHECK(a0->statistic == doctest::Approx(2.0).epsilon(1e-9));
}

TEST_CASE("gamma = 1.5 custom Hamiltonian is caught by A0") {
    CustomHamiltonian fns;
    const double g = 1.5;
    fns.h = [g](double p) { return std::pow(std::abs(p), g); };
    fns.dh = [g](double p) {
        return p == 0.0 ? 0.0 : g * std::pow(std::abs(p), g - 1.0) * (p < 0 ? -1.0 : 1.0);
    };
    fns.d2h = [g](double p) {
        return p == 0.0 ? 0.0 : g * (g - 1.0) * std::pow(std::abs(p), g - 2.0);
    };
    const auto H = Hamiltonian::custom(fns, 2.0);
    const auto V = Potential::separable(PotentialAKind::one, PotentialBKind::cos2pi_minus1);
    const auto rep = audit_assumptions(H, V, {-1.0, 1.0});
    const auto* a0 = rep.find("A0");
    REQUIRE(a0 != nullptr);
    CHECK_FALSE(a0->pass);
    CHECK(a0->witness_r > 0.0);  // ladder point where the blow-up was seen
}

TEST_CASE("sqrt-Lipschitz statistic converges for the cosine and diverges for the tent") {
    const auto H = Hamiltonian::quadratic();
    const auto cosv = Potential::separable(PotentialAKind::one, PotentialBKind::cos2pi_minus1);
    const auto cos_rep = audit_assumptions(H, cosv, {-1.0, 1.0});
    CHECK(cos_rep.find("SQRT_LIP")->pass);
    // |b'| / sqrt(-b) = 2 pi |sin 2 pi y| / sqrt(2) |sin pi y| <= 2 sqrt(2) pi
    CHECK(cos_rep.find("SQRT_LIP")->statistic <= 2.0 * std::sqrt(2.0) * M_PI + 1e-6);

    const auto tent = Potential::separable(PotentialAKind::one, PotentialBKind::tent_prop43);
    const auto tent_rep = audit_assumptions(H, tent, {-1.0, 1.0});
    CHECK_FALSE(tent_rep.find("SQRT_LIP")->pass);
}

TEST_SUITE_END();
