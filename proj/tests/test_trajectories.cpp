#include <doctest.h>

#include <cmath>

#include "hj1d/trajectories.hpp"

using namespace hj1d;

namespace {

Problem free_particle() {
    Problem pb;
    pb.ham = Hamiltonian::quadratic();
    pb.pot = Potential::zero();
    pb.u0 = InitialData::constant(0.0);
    pb.window = {2.0, 2.0};
    return pb;
}

Problem cosine_problem(PotentialAKind a = PotentialAKind::one) {
    Problem pb;
    pb.ham = Hamiltonian::quadratic();
    pb.pot = Potential::separable(a, PotentialBKind::cos2pi_minus1);
    pb.u0 = InitialData::constant(0.0);
    pb.window = {2.0, 2.0};
    return pb;
}

Problem tent_problem() {
    Problem pb;
    pb.ham = Hamiltonian::quadratic();
    pb.pot = Potential::separable(PotentialAKind::one, PotentialBKind::tent_prop43);
    pb.u0 = InitialData::constant(0.0);
    pb.window = {2.0, 2.0};
    return pb;
}

// test-side oracle: solve the endpoint equation by plain bisection with a
// composite Simpson time integral
double endpoint_oracle(const Problem& pb, const Query& q, double r) {
    auto elapsed = [&](double x_end) {
        const long n = 200000;
        const double h = (x_end - q.x0) / n;
        auto f = [&](double z) {
            return 1.0 / std::sqrt(2.0 * (r - pb.pot.value(z, z / q.eps)));
        };
        double s = f(q.x0) + f(x_end);
        for (long i = 1; i < n; ++i) s += f(q.x0 + h * i) * (i % 2 ? 4.0 : 2.0);
        return s * h / 3.0;
    };
    double lo = q.x0 + q.t0 * std::sqrt(2.0 * r);
    double hi = q.x0 + q.t0 * std::sqrt(2.0 * (r + pb.pot.sup_norm()));
    for (int i = 0; i < 60; ++i) {
        const double mid = 0.5 * (lo + hi);
        (elapsed(mid) < q.t0 ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

}  // namespace

TEST_SUITE_BEGIN("trajectories");

TEST_CASE("free particle: straight characteristics on both branches") {
    const auto pb = free_particle();
    const Query q{0.0, 1.0, 0.1};
    const auto path = integrate_el(pb, q, 0.5, 1);
    CHECK(path.end == doctest::Approx(10.0).epsilon(1e-10));  // eta(10) = 10
    CHECK(q.eps * path.end == doctest::Approx(1.0).epsilon(1e-10));
    CHECK(path.drift == doctest::Approx(0.0).epsilon(1e-12));

    const auto mirror = integrate_el(pb, q, 0.5, 2);
    CHECK(q.eps * mirror.end == doctest::Approx(-1.0).epsilon(1e-10));

    CHECK(oscillatory_endpoint(pb, q, 0.5, 1) == doctest::Approx(1.0).epsilon(1e-10));
    CHECK(effective_endpoint(pb, q, 0.5, 1) == doctest::Approx(1.0).epsilon(1e-10));
    CHECK(effective_endpoint(pb, q, 0.5, 2) == doctest::Approx(-1.0).epsilon(1e-10));
}

TEST_CASE("tent potential path: monotone, small half-step gap, tiny drift") {
    const auto pb = tent_problem();
    const Query q{0.0, 1.0, 0.125};
    const auto path = integrate_el(pb, q, 0.1, 1);
    CHECK(path.richardson_gap < 1e-8);
    CHECK(path.drift < 1e-8);
    for (std::size_t k = 1; k < path.eta.size(); ++k) CHECK(path.eta[k] >= path.eta[k - 1]);
}

TEST_CASE("oscillatory endpoint obeys the travel sandwich and matches the oracle") {
    const auto pb = cosine_problem();
    const Query q{0.0, 1.0, 1.0 / 16.0};
    const double r = 1.0;
    const double x_end = oscillatory_endpoint(pb, q, r, 1);
    CHECK(x_end >= q.t0 * std::sqrt(2.0 * r) - 1e-9);
    CHECK(x_end <= q.t0 * std::sqrt(2.0 * (r + pb.pot.sup_norm())) + 1e-9);
    CHECK(x_end == doctest::Approx(endpoint_oracle(pb, q, r)).epsilon(1e-7));
}

TEST_CASE("ODE and quadrature endpoints agree; time identity holds") {
    const auto pb = cosine_problem(PotentialAKind::two_plus_sin);
    const Query q{0.25, 0.75, 0.125};
    for (double r : {0.2, 1.0})
        for (int branch : {1, 2}) {
            const auto path = integrate_el(pb, q, r, branch);
            const double xq = oscillatory_endpoint(pb, q, r, branch);
            CHECK(std::abs(q.eps * path.end - xq) < 1e-6);
            const double elapsed =
                oscillatory_elapsed(pb, q.x0, q.eps * path.end, q.eps, r, branch);
            CHECK(std::abs(elapsed - q.t0) < 1e-8);
        }
}

TEST_CASE("effective endpoint: x-independent closed form and monotonicity in r") {
    const auto pb = cosine_problem();
    const Query q{0.0, 1.0, 0.125};
    const double r = 1.0;
    // x-independent: c_{1,r} = t0 / int_0^1 dy / sqrt(2 (r - b(y)))
    long n = 100001;
    double soj = 0.0;
    for (long j = 0; j < n; ++j) {
        const double y = (j + 0.5) / n;
        soj += 1.0 / std::sqrt(2.0 * (r - (std::cos(2.0 * M_PI * y) - 1.0)));
    }
    soj /= n;
    const double c1 = effective_endpoint(pb, q, r, 1);
    CHECK(c1 == doctest::Approx(q.t0 / soj).epsilon(1e-7));
    CHECK(effective_endpoint(pb, q, 0.5, 1) < c1);
    CHECK(effective_endpoint(pb, q, 1.0, 2) == doctest::Approx(-c1).epsilon(1e-9));
}

TEST_CASE("the average endpoint stays within O(eps) of the oscillatory one") {
    const auto pb = cosine_problem(PotentialAKind::two_plus_sin);
    const Query base{0.0, 1.0, 0.125};
    for (double r : {0.3, 1.0}) {
        const double c1 = effective_endpoint(pb, base, r, 1);
        double prev_ratio = 0.0;
        for (double eps : {0.125, 0.0625, 0.03125}) {
            const Query q{0.0, 1.0, eps};
            const double gap = std::abs(oscillatory_endpoint(pb, q, r, 1) - c1);
            const double ratio = gap / eps;
            prev_ratio = std::max(prev_ratio, ratio);
        }
        CHECK(prev_ratio < 25.0);  // bounded gap/eps; the certified constant is checked elsewhere
    }
}

TEST_CASE("separatrices of the cosine cell bracket the start point") {
    const auto pb = cosine_problem();
    const Query q{0.25 * 0.125, 1.0, 0.125};  // x0/eps = 0.25
    const auto sep = separatrix_paths(pb, q);
    CHECK_FALSE(sep.stationary);
    CHECK(sep.limit_lo == doctest::Approx(0.0));
    CHECK(sep.limit_hi == doctest::Approx(1.0));
    CHECK(sep.plus_end <= sep.limit_hi + 1e-12);
    CHECK(sep.minus_end >= sep.limit_lo - 1e-12);
    for (std::size_t k = 1; k < sep.plus.size(); ++k) {
        CHECK(sep.plus[k] >= sep.plus[k - 1] - 1e-12);
        CHECK(sep.minus[k] <= sep.minus[k - 1] + 1e-12);
    }
}

TEST_CASE("start on the zero line collapses both separatrices") {
    const auto pb = cosine_problem();
    const Query q{0.0, 1.0, 0.125};  // x0/eps = 0 where b = 0
    const auto sep = separatrix_paths(pb, q);
    CHECK(sep.stationary);
    CHECK(sep.plus_end == doctest::Approx(0.0));
    CHECK(sep.minus_end == doctest::Approx(0.0));
}

TEST_CASE("tent separatrix climbs monotonically to the peak and stays confined") {
    const auto pb = tent_problem();
    const Query q{0.0, 1.0, 0.125};
    const auto sep = separatrix_paths(pb, q);
    CHECK(sep.limit_hi == doctest::Approx(0.5));
    CHECK(sep.limit_lo == doctest::Approx(-0.5));
    for (std::size_t k = 1; k < sep.plus.size(); ++k)
        CHECK(sep.plus[k] >= sep.plus[k - 1] - 1e-12);
    CHECK(sep.plus_end <= 0.5 + 1e-12);
}

TEST_CASE("time to approach the limit diverges for a smooth potential") {
    // 1/sqrt(-2V) ~ 1/(2 pi (1 - y)) near the zero: the approach time grows
    // by log(10)/(2 pi) per decade of proximity, without bound
    const auto pb = cosine_problem();
    const Query q{0.25 * 0.125, 1.0, 0.125};
    const double t4 = separatrix_time_to(pb, q, 1e-4);
    const double t6 = separatrix_time_to(pb, q, 1e-6);
    const double t8 = separatrix_time_to(pb, q, 1e-8);
    CHECK(t6 > t4);
    CHECK(t8 > t6);
    const double per_decade = std::log(10.0) / (2.0 * M_PI);
    CHECK((t6 - t4) == doctest::Approx(2.0 * per_decade).epsilon(1e-3));
    CHECK((t8 - t6) == doctest::Approx(2.0 * per_decade).epsilon(1e-3));
}

TEST_CASE("energy drift detects a corrupted path") {
    const auto pb = cosine_problem();
    const Query q{0.25, 0.5, 0.125};
    auto path = integrate_el(pb, q, 0.5, 1);
    CHECK(energy_drift(pb, path) < 1e-10);
    for (auto& v : path.eta_dot) v *= 1.1;  // corrupt the stored speeds
    CHECK(energy_drift(pb, path) >= 0.1 * 0.5);
}

TEST_CASE("second-order form residual shrinks with the stored sampling") {
    const auto pb = cosine_problem();
    const Query q{0.25, 0.25, 0.25};
    const auto path = integrate_el(pb, q, 1.0, 1);
    // centered differences on a 4th-order path: residual is small but nonzero
    CHECK(el_residual(pb, path) < 1e-3);
}

TEST_CASE("nonpositive input energy is rejected") {
    const auto pb = cosine_problem();
    const Query q{0.0, 1.0, 0.125};
    CHECK_THROWS_AS(integrate_el(pb, q, -0.5, 1), std::domain_error);
    CHECK_THROWS_AS(oscillatory_endpoint(pb, q, 0.0, 1), std::domain_error);
    CHECK_THROWS_AS(effective_endpoint(pb, q, -1.0, 2), std::domain_error);
}

TEST_SUITE_END();
