#include <doctest.h>

#include <cmath>

#include "hj1d/hamiltonian.hpp"

using namespace hj1d;

namespace {

// independent oracles kept deliberately dumb

double legendre_by_grid(const std::function<double(double)>& h, double v, double p_lo,
                        double p_hi, int n = 2000001) {
    double best = -1e300;
    for (int i = 0; i <= n; ++i) {
        const double p = p_lo + (p_hi - p_lo) * i / n;
        best = std::max(best, p * v - h(p));
    }
    return best;
}

double invert_by_bisection(const std::function<double(double)>& h, double r, double hi) {
    double lo = 0.0;
    for (int i = 0; i < 200; ++i) {
        const double mid = 0.5 * (lo + hi);
        (h(mid) < r ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

}  // namespace

TEST_SUITE_BEGIN("hamiltonian");

TEST_CASE("quadratic closed forms") {
    const auto H = Hamiltonian::quadratic();
    CHECK(H.velocity(1, 2.0) == doctest::Approx(2.0));          // G1(2) = 2
    CHECK(H.branch_inverse(1, 2.0) == doctest::Approx(2.0));    // sqrt(2*2)
    CHECK(H.branch_inverse(1, 8.0) == doctest::Approx(4.0));
    CHECK(H.branch_inverse(2, 0.0) == 0.0);
    CHECK(H.legendre(3.0) == doctest::Approx(4.5));
    CHECK(H.legendre(0.0) == 0.0);
    CHECK(H.growth_constant() == doctest::Approx(0.0).epsilon(1e-14));
    CHECK_THROWS_AS(H.branch_inverse(1, -1.0), std::domain_error);
}

TEST_CASE("power Hamiltonian branch maps") {
    const auto H = Hamiltonian::power(4.0, 2.0);
    // |G_i(r)| = gamma r^{1 - 1/gamma}
    CHECK(H.velocity(1, 16.0) == doctest::Approx(32.0));
    CHECK(H.velocity(2, 16.0) == doctest::Approx(-32.0));
    const double p81 = invert_by_bisection([&](double p) { return H.value(p); }, 81.0, 10.0);
    CHECK(H.branch_inverse(1, 81.0) == doctest::Approx(3.0).epsilon(1e-12));
    CHECK(H.branch_inverse(1, 81.0) == doctest::Approx(p81).epsilon(1e-10));
    CHECK_THROWS_AS(Hamiltonian::power(1.5), ModelError);
}

TEST_CASE("power gamma=2 Legendre matches grid maximization") {
    const auto H = Hamiltonian::power(2.0, 4.0);  // H(p) = p^2
    const double oracle = legendre_by_grid([](double p) { return p * p; }, 2.0, -4.0, 4.0);
    CHECK(oracle == doctest::Approx(1.0).epsilon(1e-10));
    CHECK(H.legendre(2.0) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("custom cosh Hamiltonian against the closed-form conjugate") {
    CustomHamiltonian fns;
    fns.h = [](double p) { return std::cosh(p) - 1.0; };
    fns.dh = [](double p) { return std::sinh(p); };
    fns.d2h = [](double p) { return std::cosh(p); };
    const auto H = Hamiltonian::custom(fns, 4.0);
    CHECK(H.legendre(0.0) == doctest::Approx(0.0).epsilon(1e-12));
    for (double v : {0.25, 1.0, 3.0, -2.0}) {
        const double closed = v * std::asinh(v) - std::sqrt(1.0 + v * v) + 1.0;
        CHECK(H.legendre(v) == doctest::Approx(closed).epsilon(1e-11));
    }
    // branch residual tolerance
    for (double r : {0.1, 1.0, 5.0})
        CHECK(H.value(H.branch_inverse(1, r)) == doctest::Approx(r).epsilon(1e-12));
}

TEST_CASE("non-convex custom Hamiltonian is rejected with a witness") {
    CustomHamiltonian fns;
    fns.h = [](double p) { return p * p * p * p - p * p; };
    fns.dh = [](double p) { return 4.0 * p * p * p - 2.0 * p; };
    fns.d2h = [](double p) { return 12.0 * p * p - 2.0; };
    CHECK_THROWS_AS(Hamiltonian::custom(fns, 2.0), ModelError);
    try {
        Hamiltonian::custom(fns, 2.0);
    } catch (const ModelError& e) {
        CHECK(std::string(e.what()).find("p = ") != std::string::npos);
    }
}

TEST_CASE("Fenchel-Young equality on a momentum sweep") {
    const auto kinds = {Hamiltonian::quadratic(), Hamiltonian::power(3.0, 2.0)};
    for (const auto& H : kinds) {
        const double m = H.grad_bound();
        for (int i = 0; i <= 200; ++i) {
            const double p = -m + 2.0 * m * i / 200;
            const double v = H.slope(p);
            CHECK(std::abs(p * v - H.value(p) - H.legendre(v)) < 1e-8);
        }
    }
}

TEST_CASE("branch consistency and monotonicity") {
    for (const auto& H : {Hamiltonian::quadratic(), Hamiltonian::power(4.0, 2.0)}) {
        double prev1 = 0.0, prev2 = 0.0;
        for (double r : {0.1, 0.5, 1.0, 2.0, 5.0}) {
            CHECK(H.value(H.branch_inverse(1, r)) == doctest::Approx(r).epsilon(1e-10));
            CHECK(H.value(H.branch_inverse(2, r)) == doctest::Approx(r).epsilon(1e-10));
            CHECK(H.velocity(1, r) == doctest::Approx(H.slope(H.branch_inverse(1, r))));
            CHECK(H.velocity(1, r) > prev1);
            CHECK(-H.velocity(2, r) > prev2);
            prev1 = H.velocity(1, r);
            prev2 = -H.velocity(2, r);
        }
    }
}

TEST_CASE("growth sandwich holds once K0 is fitted") {
    for (const auto& H :
         {Hamiltonian::quadratic(), Hamiltonian::power(4.0, 2.0), Hamiltonian::power(3.0, 2.0)}) {
        const double k0 = H.growth_constant();
        const double m = 2.0 * H.grad_bound();
        for (int i = 0; i <= 400; ++i) {
            const double p = -m + 2.0 * m * i / 400;
            const double gap = std::abs(H.value(p) - 0.5 * p * p);
            CHECK(gap <= k0 * std::min(1.0, std::abs(p)) + 1e-9 * (1.0 + k0));
        }
    }
}

TEST_CASE("velocity growth bounds on the certified energy range") {
    for (const auto& H : {Hamiltonian::quadratic(), Hamiltonian::power(4.0, 2.0)}) {
        const double k0 = H.growth_constant();
        const double top = std::max(H.value(2.0 * H.grad_bound()), H.value(-2.0 * H.grad_bound()));
        for (int i = 0; i <= 64; ++i) {
            const double x = k0 + (top - k0) * i / 64;
            if (x < k0 || x > top) continue;
            const double g1 = H.velocity(1, x);
            CHECK(g1 >= std::sqrt(std::max(0.0, x - k0)) / std::sqrt(2.0) - 1e-9);
            CHECK(g1 <= 2.0 * k0 + 2.0 * std::sqrt(2.0 * (x + k0)) + 1e-9);
            const double g2 = H.velocity(2, x);
            CHECK(-g2 >= std::sqrt(std::max(0.0, x - k0)) / std::sqrt(2.0) - 1e-9);
            CHECK(-g2 <= 2.0 * k0 + 2.0 * std::sqrt(2.0 * (x + k0)) + 1e-9);
        }
    }
}

TEST_CASE("branch inverse derivative matches 1/velocity") {
    const auto H = Hamiltonian::power(3.0, 2.0);
    for (double r : {0.5, 1.0, 4.0}) {
        const double h = 1e-6 * r;
        const double fd = (H.branch_inverse(1, r + h) - H.branch_inverse(1, r - h)) / (2.0 * h);
        CHECK(fd == doctest::Approx(1.0 / H.velocity(1, r)).epsilon(1e-6));
    }
}

TEST_SUITE_END();
