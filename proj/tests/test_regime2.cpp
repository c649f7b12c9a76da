// Weak-coupling (RF-dominated) closed forms, the dressed tilted-frame engine
// and the weak-coupling limit.

#include <catch2/catch_amalgamated.hpp>

#include "tq/oracle.hpp"
#include "tq/regime2.hpp"

using namespace tq;

TEST_CASE("closed coefficient relations") {
    const auto p = ExperimentParams::single_crystal(5e4, 1e5);
    const auto c = regime2_coeffs(p);
    CHECK(c.xi == Catch::Approx(std::sqrt(3.0) * p.omega_q_eff / (4.0 * p.omega1)));
    CHECK(c.g1r == Catch::Approx(2.0 * c.g3r));
    CHECK(c.g2r == Catch::Approx((p.omega_q_eff / 2.0) * std::cos(c.xi)));
    // leading orders of the series forms
    CHECK(c.g1r == Catch::Approx(std::sqrt(3.0) * p.omega_q_eff * c.xi / 2.0).epsilon(0.01));
    CHECK(c.gtr == Catch::Approx(-(p.omega_q_eff / (2.0 * std::sqrt(2.0))) * std::sin(c.xi)));
    CHECK(c.gdr ==
          Catch::Approx(std::sqrt(3.0) * p.omega_q_eff / (2.0 * std::sqrt(2.0)) * c.xi * c.xi / 3.0)
              .epsilon(0.01));
}

TEST_CASE("vanishing coupling pins the central-transition coefficient") {
    // at C_Q = 1 kHz: xi ~ 1e-5, so G_2R ~ Omega_Q / 2 = pi * 500
    const auto c = regime2_coeffs(ExperimentParams::single_crystal(1e3, 1e5));
    CHECK(c.g2r == Catch::Approx(1570.79).epsilon(1e-4));
}

TEST_CASE("dressed engine matches the exact engine inside its regime") {
    const auto p = ExperimentParams::single_crystal(5e4, 1e5);
    TimeGrid g{0.0, 200e-6, 1e-6};
    const auto t = g.points();
    CHECK(rms_difference(tq_signal_regime2_dressed(p, t), tq_signal_exact(p, t)) < 0.02);
}

TEST_CASE("four-term signal vanishes identically at zero coupling") {
    const auto p = ExperimentParams::single_crystal(0.0, 1e5);
    TimeGrid g{0.0, 100e-6, 1e-6};
    const auto prof = tq_signal_regime2(p, g.points());
    for (double a : prof.amplitudes) CHECK(std::abs(a) < 1e-12);
}

TEST_CASE("four-term signal reduces to the weak-coupling limit for small xi") {
    const auto p = ExperimentParams::single_crystal(5e3, 1e5);
    TimeGrid g{0.0, 100e-6, 1e-6};
    const auto t = g.points();
    CHECK(max_abs_difference(tq_signal_regime2(p, t), weak_coupling_limit(p, t)) < 1e-2);
}

TEST_CASE("weak-coupling limit: pinned value and oracle agreement") {
    const auto p = ExperimentParams::single_crystal(1e3, 1e5);
    // w1 t = pi/2 at t = 2.5 us; 1.5 sin^2(Omega t/4) = 5.783e-6
    CHECK(weak_coupling_limit_point(p, 2.5e-6).real() ==
          Catch::Approx(5.783e-6).epsilon(1e-3));
    TimeGrid g{0.0, 50e-6, 0.5e-6};
    const auto t = g.points();
    CHECK(max_abs_difference(weak_coupling_limit(p, t), tq_signal_exact(p, t)) < 1e-3);
}

TEST_CASE("zero RF amplitude is rejected") {
    ExperimentParams p = ExperimentParams::single_crystal(5e4, 0.0);
    CHECK_THROWS_AS(regime2_coeffs(p), std::invalid_argument);
}
