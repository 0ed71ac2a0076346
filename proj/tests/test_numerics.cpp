#include <doctest.h>

#include <cmath>

#include "hj1d/numerics.hpp"

using namespace hj1d;

TEST_SUITE_BEGIN("numerics");

TEST_CASE("quadrature reproduces closed forms") {
    auto f = [](double x) { return std::sin(x); };
    CHECK(num::integrate(f, 0.0, M_PI, 1e-12) == doctest::Approx(2.0).epsilon(1e-12));

    auto g = [](double x) { return x * x; };
    CHECK(num::integrate(g, -1.0, 2.0, 1e-12) == doctest::Approx(3.0).epsilon(1e-12));
}

TEST_CASE("quadrature handles integrable kinks at breakpoints") {
    auto f = [](double x) { return std::sqrt(std::abs(x - 0.3)); };
    const double exact = (std::pow(0.3, 1.5) + std::pow(0.7, 1.5)) * 2.0 / 3.0;
    const double got = num::integrate(f, 0.0, 1.0, 1e-11, std::vector<double>{0.3});
    CHECK(got == doctest::Approx(exact).epsilon(1e-9));
}

TEST_CASE("quadrature is additive across a split point") {
    auto f = [](double x) { return std::exp(-x) * std::cos(7.0 * x); };
    const double whole = num::integrate(f, 0.0, 3.0, 1e-12);
    const double split = num::integrate(f, 0.0, 1.3, 1e-12) + num::integrate(f, 1.3, 3.0, 1e-12);
    CHECK(whole == doctest::Approx(split).epsilon(1e-10));
}

TEST_CASE("quadrature reports non-finite samples") {
    auto f = [](double x) { return 1.0 / (x - 0.5); };
    CHECK_THROWS_AS(num::integrate(f, 0.4999999999999, 0.5000000000001, 1e-10),
                    num::IntegrandError);
}

TEST_CASE("find_root solves a bracketed equation and rejects bad brackets") {
    auto f = [](double x) { return x * x * x - 2.0; };
    const double r = num::find_root(f, 0.0, 2.0);
    CHECK(r == doctest::Approx(std::cbrt(2.0)).epsilon(1e-12));
    CHECK_THROWS_AS(num::find_root(f, 2.0, 3.0), num::BracketError);
}

TEST_CASE("golden_min locates the minimum of a unimodal function") {
    auto f = [](double x) { return (x - 0.7) * (x - 0.7) + 1.5; };
    const auto m = num::golden_min(f, 0.0, 2.0, 1e-10);
    CHECK(m.x == doctest::Approx(0.7).epsilon(1e-8));
    CHECK(m.value == doctest::Approx(1.5).epsilon(1e-12));
}

TEST_SUITE_END();
