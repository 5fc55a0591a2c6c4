#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <vector>

#include "systolic/common.hpp"
#include "systolic/revolution_zoll.hpp"

using namespace systolic;
using namespace systolic::zoll;

namespace {

RevolutionMetric round_sphere() { return RevolutionMetric::zoll({}); }

RevolutionMetric odd(std::vector<double> c) { return RevolutionMetric::zoll(c); }

RevolutionMetric even_control()
{
    const double mono[] = {0.3, 0.0, -0.3};
    return RevolutionMetric::profile(mono);
}

double max_energy_drift(const RevolutionMetric& m, const Trajectory& t)
{
    double d = 0;
    for (const auto& x : t.states)
        d = std::max(d, std::abs(unit_speed_energy(m, x) - 1.0));
    return d;
}

} // namespace

TEST_CASE("profile construction and validation")
{
    const auto m = odd({0.3});
    CHECK(m.h(0.5) == doctest::Approx(0.3 * 0.5 * (1 - 0.25)));
    CHECK(m.dh(0.5) == doctest::Approx(0.3 * (1 - 3 * 0.25)));
    CHECK(m.h(1.0) == 0.0);
    CHECK(m.h(-1.0) == 0.0);
    CHECK(m.is_odd());
    CHECK_FALSE(even_control().is_odd());
    const double eps = 0.2;
    const double mono[] = {0.0, -eps, 0.0, eps};
    CHECK(RevolutionMetric::profile(mono).is_odd());

    CHECK_THROWS_AS(odd({3.0}), InputError);               // |h| > 1 somewhere
    const double bad_end[] = {0.3};
    CHECK_THROWS_AS(RevolutionMetric::profile(bad_end), InputError); // h(1) != 0
    CHECK_THROWS_AS(integrate_geodesic(m, equator_start(m, 0.5), 1.0, 1e-3), InputError);
    CHECK_THROWS_AS(integrate_geodesic(m, {kPi / 2, 0, 1, 0}, 1.0), InputError);
    CHECK_THROWS_AS(integrate_geodesic(m, {0.01, 0, 1, 0.005}, 1.0), InputError);
}

TEST_CASE("round sphere: equator and great circles")
{
    const auto m = round_sphere();
    const double st[] = {kTwoPi};
    const auto eq = integrate_geodesic(m, equator_start(m, 1.0), kTwoPi + 0.1, 1e-10, st);
    for (const auto& x : eq.states)
        CHECK(x.theta == doctest::Approx(kPi / 2).epsilon(1e-12));
    CHECK(closure_test(eq, kTwoPi).defect < 1e-9);

    // Closed-form great circle through (1,0,0) with velocity (0, c, -sqrt(1-c^2)).
    const double c = 0.5;
    const auto tr = integrate_geodesic(m, equator_start(m, c), kTwoPi + 0.1, 1e-10, st, 0.05);
    const double vz = -std::sqrt(1 - c * c);
    for (std::size_t i = 0; i < tr.s.size(); ++i) {
        const double s = tr.s[i];
        const double px = std::cos(s), py = std::sin(s) * c, pz = std::sin(s) * vz;
        CHECK(tr.states[i].theta == doctest::Approx(std::acos(pz)).epsilon(1e-8));
        const double dphi = std::remainder(tr.states[i].phi - std::atan2(py, px), kTwoPi);
        CHECK(std::abs(dphi) < 1e-8);
    }
    CHECK(closure_test(tr, kTwoPi).defect < 1e-8);
}

TEST_CASE("conservation along a Zoll profile")
{
    const auto m = odd({0.3});
    const double length = 20 * kPi;
    const double tol = 1e-10;
    const auto tr = integrate_geodesic(m, equator_start(m, 0.7), length, tol);
    for (const auto& x : tr.states)
        CHECK(std::abs(x.p_phi - 0.7) <= 1e-9);
    CHECK(max_energy_drift(m, tr) <= 10 * tol * length);

    for (double tol2 : {1e-8, 1e-10, 1e-12}) {
        const auto t2 = integrate_geodesic(m, equator_start(m, 0.2), 4 * kPi, tol2);
        CHECK(max_energy_drift(m, t2) <= 10 * tol2 * 4 * kPi);
    }
}

TEST_CASE("time reversal")
{
    const auto m = odd({0.2, 0.1});
    const double length = 6 * kPi;
    const double tol = 1e-10;
    const auto start = equator_start(m, 0.4);
    auto end = integrate_geodesic(m, start, length, tol).states.back();
    end.p_theta = -end.p_theta;
    end.p_phi = -end.p_phi;
    const auto back = integrate_geodesic(m, end, length, tol).states.back();
    const double err = std::sqrt(std::pow(back.theta - start.theta, 2) + std::pow(back.phi - start.phi, 2) +
                                 std::pow(back.p_theta + start.p_theta, 2) + std::pow(back.p_phi + start.p_phi, 2));
    CHECK(err <= 20 * tol * length);
}

TEST_CASE("closure battery")
{
    const double st[] = {kTwoPi};
    const auto round = round_sphere();
    for (double c : {0.1, 0.5, 0.9})
        CHECK(closure_test(integrate_geodesic(round, equator_start(round, c), 7.0, 1e-10, st), kTwoPi).defect < 1e-9);

    const auto cert = certify_zoll(odd({0.3}));
    CHECK(cert.entries.size() == 21);
    CHECK(cert.zoll);
    for (const auto& e : cert.entries)
        CHECK(e.defect < 1e-6);
    const auto grid = clairaut_grid();
    CHECK(grid.front() == doctest::Approx(0.05));
    CHECK(grid.back() == doctest::Approx(0.95));

    const auto bad = certify_zoll(even_control());
    CHECK_FALSE(bad.zoll);
    CHECK(bad.max_defect > 1e-2);

    CHECK_THROWS_AS(closure_test(integrate_geodesic(round, equator_start(round, 0.5), 7.0), kTwoPi), InputError);
}

TEST_CASE("meridian length and surface area")
{
    CHECK(meridian_length(round_sphere()) == doctest::Approx(kTwoPi).epsilon(1e-15));
    CHECK(std::abs(meridian_length(odd({0.3})) - kTwoPi) < 1e-12);
    // 2 int_0^pi (1 + 0.3 sin^2) = 2 pi + 0.3 pi.
    CHECK(meridian_length(even_control()) == doctest::Approx(2.3 * kPi).epsilon(1e-13));
    CHECK(meridian_length(even_control()) > kTwoPi);

    CHECK(surface_area(round_sphere()) == doctest::Approx(4 * kPi).epsilon(1e-15));
    CHECK(std::abs(surface_area(odd({0.3})) - 4 * kPi) < 1e-12);
    for (double eps : {0.1, -0.4, 0.9}) {
        const double mono[] = {0.0, -eps, 0.0, eps};
        CHECK(std::abs(surface_area(RevolutionMetric::profile(mono)) - 4 * kPi) < 1e-12);
        CHECK(std::abs(meridian_length(RevolutionMetric::profile(mono)) - kTwoPi) < 1e-12);
    }
    // 2 pi int (1 + 0.3 (1 - u^2)) du = 2 pi (2 + 0.4).
    CHECK(surface_area(even_control()) == doctest::Approx(4.8 * kPi).epsilon(1e-14));
}

TEST_CASE("first return length on Zoll profiles is 2 pi")
{
    for (double c : {0.05, 0.5, 0.95}) {
        const auto fr = first_return(odd({0.3}), c);
        CHECK(fr.length == doctest::Approx(kTwoPi).epsilon(1e-9));
        CHECK(fr.phi_defect < 1e-8);
    }
}

TEST_CASE("weak systolic ratio reproduces pi on Zoll profiles")
{
    const auto r0 = weak_systolic_ratio_estimate(round_sphere());
    CHECK(r0.zoll);
    CHECK(std::abs(r0.ratio - kPi) < 1e-5);
    for (const auto& c : std::vector<std::vector<double>>{{0.3}, {0.15}, {0.2, 0.1}}) {
        const auto r = weak_systolic_ratio_estimate(odd(c));
        CHECK(r.zoll);
        CHECK(std::abs(r.ratio - kPi) < 1e-5);
    }
    const auto bad = weak_systolic_ratio_estimate(even_control());
    CHECK_FALSE(bad.zoll);
    CHECK(bad.ratio == doctest::Approx(4 * kPi * kPi / (4.8 * kPi)));
}
