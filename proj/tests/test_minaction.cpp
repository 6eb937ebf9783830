#include "doctest.h"

#include <cmath>
#include <stdexcept>

#include "hv/minaction.hpp"
#include "support/oracles.hpp"

using namespace hv;

namespace {

ModelParams half_half() {
    ModelParams p;
    p.q = 0.5;
    p.rho = 0.5;
    return p;
}

QuasiPotentialOptions fast_opts(int segments = 100) {
    QuasiPotentialOptions o;
    o.segments = segments;
    o.max_iterations = 15000;
    return o;
}

}  // namespace

TEST_CASE("target at z costs nothing") {
    const ModelParams p = half_half();
    const Point2 z = interior_equilibrium(p);
    const QuasiPotentialResult r = quasi_potential(z, p, fast_opts());
    CHECK(r.value <= 1e-8);
    CHECK(r.converged);
    for (const Point2& pt : r.path.points) {
        CHECK(pt.m_plus == doctest::Approx(z.m_plus).epsilon(1e-9));
        CHECK(pt.m_minus == doctest::Approx(z.m_minus).epsilon(1e-9));
    }
}

TEST_CASE("moving against the flow costs positive action") {
    const ModelParams p = half_half();
    const QuasiPotentialResult r = quasi_potential({0.2, 0.1}, p, fast_opts());
    CHECK(r.value > 1e-3);
}

TEST_CASE("minimized action matches the closed-form quasi-potential") {
    const ModelParams p = half_half();
    const Point2 z = interior_equilibrium(p);
    for (double ang : {0.0, M_PI / 4.0, M_PI / 2.0, M_PI, 1.5 * M_PI}) {
        const Point2 target{z.m_plus + 0.1 * std::cos(ang), z.m_minus + 0.1 * std::sin(ang)};
        const QuasiPotentialResult r = quasi_potential(target, p, fast_opts(200));
        const double exact = oracle::closed_form_qpot(p, target.m_plus, target.m_minus);
        INFO("angle ", ang, " value ", r.value, " exact ", exact);
        CHECK(std::abs(r.value - exact) <= 0.02 * exact);
    }
}

TEST_CASE("a farther target on the same ray costs more") {
    const ModelParams p = half_half();
    const Point2 z = interior_equilibrium(p);
    const QuasiPotentialResult near =
        quasi_potential({z.m_plus + 0.05, z.m_minus + 0.05}, p, fast_opts());
    const QuasiPotentialResult far =
        quasi_potential({z.m_plus + 0.1, z.m_minus + 0.1}, p, fast_opts());
    CHECK(far.value > near.value);
}

TEST_CASE("doubling the segment count does not raise the minimum") {
    const ModelParams p = half_half();
    const Point2 z = interior_equilibrium(p);
    const Point2 target{z.m_plus + 0.08, z.m_minus - 0.06};
    const QuasiPotentialResult coarse = quasi_potential(target, p, fast_opts(100));
    const QuasiPotentialResult fine = quasi_potential(target, p, fast_opts(200));
    REQUIRE(coarse.converged);
    REQUIRE(fine.converged);
    CHECK(fine.value <= coarse.value + 1e-6);
}

TEST_CASE("durations respect their bounds and the result reports restarts") {
    const ModelParams p = half_half();
    const QuasiPotentialOptions o = fast_opts();
    const QuasiPotentialResult r = quasi_potential({0.38, 0.21}, p, o);
    CHECK(r.restarts_used >= 2);
    for (double d : r.path.durations) {
        CHECK(d >= o.tau_min);
        CHECK(d <= o.tau_max);
    }
    CHECK(r.path.total_time() == doctest::Approx(r.path.total_time()));
    CHECK(r.path.points.front().m_plus == doctest::Approx(1.0 / 3.0).epsilon(1e-6));
    CHECK(r.path.points.back().m_plus == doctest::Approx(0.38).epsilon(1e-9));
}

TEST_CASE("target outside the box is rejected") {
    const ModelParams p = half_half();
    CHECK_THROWS_AS(quasi_potential({0.7, 0.1}, p, fast_opts()), std::invalid_argument);
    ModelParams degenerate = p;
    degenerate.rho = 1.0;
    CHECK_THROWS_AS(quasi_potential({0.2, 0.2}, degenerate, fast_opts()),
                    std::invalid_argument);
}

TEST_CASE("boundary profile: minimum matches the closed form over the same angles") {
    const ModelParams p = half_half();
    const Point2 z = interior_equilibrium(p);
    BoundaryMinOptions bopts;
    bopts.n_points = 16;
    const BoundaryProfile profile = boundary_min(z, 0.1, p, fast_opts(120), bopts);
    double exact_min = 1e300;
    for (int k = 0; k < 16; ++k) {
        const double ang = 2.0 * M_PI * k / 16;
        const double v = oracle::closed_form_qpot(p, z.m_plus + 0.1 * std::cos(ang),
                                                  z.m_minus + 0.1 * std::sin(ang));
        exact_min = std::min(exact_min, v);
        INFO("angle index ", k);
        CHECK(std::abs(profile.values[static_cast<std::size_t>(k)] - v) <= 0.02 * v);
    }
    CHECK(std::abs(profile.min_value - exact_min) <= 0.02 * exact_min);
    CHECK(profile.min_value < profile.values[0]);  // the minimum is off the m+ axis
}

TEST_CASE("small disks approach the quadratic estimate and V vanishes with the radius") {
    const ModelParams p = half_half();
    const Point2 z = interior_equilibrium(p);
    BoundaryMinOptions bopts;
    bopts.n_points = 8;
    const double r1 = 0.02, r2 = 0.01;
    const BoundaryProfile small = boundary_min(z, r1, p, fast_opts(60), bopts);
    const BoundaryProfile tiny = boundary_min(z, r2, p, fast_opts(60), bopts);
    const double est1 = small_radius_boundary_estimate(p, r1);
    CHECK(std::abs(small.min_value - est1) <= 0.12 * est1);
    CHECK(tiny.min_value < small.min_value);
    CHECK(tiny.min_value <= 2.0 * small_radius_boundary_estimate(p, r2));
}

TEST_CASE("weaker confinement: V_boundary decreases as rho approaches 1") {
    ModelParams p;
    p.q = 0.5;
    BoundaryMinOptions bopts;
    bopts.n_points = 8;
    double previous = 1e300;
    for (double rho : {0.3, 0.5, 0.7, 0.9}) {
        p.rho = rho;
        const Point2 z = interior_equilibrium(p);
        const BoundaryProfile profile = boundary_min(z, 0.1, p, fast_opts(80), bopts);
        INFO("rho ", rho);
        CHECK(profile.min_value < previous);
        const double exact = [&] {
            double best = 1e300;
            for (int k = 0; k < 8; ++k) {
                const double ang = 2.0 * M_PI * k / 8;
                best = std::min(best, oracle::closed_form_qpot(p, z.m_plus + 0.1 * std::cos(ang),
                                                               z.m_minus + 0.1 * std::sin(ang)));
            }
            return best;
        }();
        CHECK(std::abs(profile.min_value - exact) <= 0.03 * exact);
        previous = profile.min_value;
    }
}

TEST_CASE("disk preconditions are validated") {
    const ModelParams p = half_half();
    const Point2 z = interior_equilibrium(p);
    // radius 0.2 pokes through the lower box face at m- = 1/6 - 0.2 < 0
    CHECK_THROWS_AS(boundary_min(z, 0.2, p, fast_opts(), {}), std::invalid_argument);
    // a disk away from z has the relaxation flow crossing it outward somewhere
    CHECK_THROWS_WITH_AS(boundary_min({0.4, 0.3}, 0.05, p, fast_opts(), {}),
                         doctest::Contains("drift not inward"), std::invalid_argument);
}

TEST_CASE("general q is accepted when the interior equilibrium is admissible") {
    ModelParams p;
    p.q = 0.52;
    p.rho = 0.5;  // 0.5 < (1-0.52)/0.52
    const Point2 z = interior_equilibrium(p);
    const Point2 target{z.m_plus + 0.06, z.m_minus + 0.06};
    const QuasiPotentialResult r = quasi_potential(target, p, fast_opts(120));
    const double exact = oracle::closed_form_qpot(p, target.m_plus, target.m_minus);
    CHECK(std::abs(r.value - exact) <= 0.03 * exact);
}

TEST_CASE("quadratic small-radius estimate has the closed form in rho") {
    ModelParams p;
    p.q = 0.5;
    p.rho = 0.5;
    CHECK(small_radius_boundary_estimate(p, 0.1) == doctest::Approx(0.005).epsilon(1e-12));
    p.rho = 0.25;
    CHECK(small_radius_boundary_estimate(p, 0.1) ==
          doctest::Approx(0.01 * 0.75 * 0.75 / 0.25).epsilon(1e-12));
    p.q = 0.6;
    CHECK_THROWS_AS(small_radius_boundary_estimate(p, 0.1), std::invalid_argument);
}
