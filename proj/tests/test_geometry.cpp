#include <stdexcept>
#include <cmath>
#include <random>

#include "doctest.h"
#include "ntnsim/constants.hpp"
#include "ntnsim/geometry.hpp"
#include "oracles.hpp"

using namespace ntnsim;
namespace k = ntnsim::constants;

TEST_CASE("propagate: circular-orbit invariants at 600 km") {
    const Orbit orbit{600.0, 53.0, 30.0, 10.0};
    const double r = k::earth_radius_km + 600.0;
    const double v_expected = std::sqrt(k::earth_mu_km3_s2 / r);

    for (double t : {0.0, 17.3, 1000.0, 5432.1}) {
        const auto s = propagate(orbit, t);
        CHECK(s.position_ecef_km.norm() == doctest::Approx(r).epsilon(1e-9));
        CHECK(s.velocity_ecef_km_s.norm() == doctest::Approx(v_expected).epsilon(1e-9));
    }
    // LEO orbital speed in the 7-8 km/s range.
    CHECK(v_expected > 7.0);
    CHECK(v_expected < 8.0);
    CHECK(v_expected == doctest::Approx(7.56).epsilon(0.01));
}

TEST_CASE("propagate: periodicity up to Earth rotation") {
    const Orbit orbit{600.0, 97.0, 45.0, 0.0};
    const double period = orbital_period_s(600.0);
    const auto s0 = propagate(orbit, 0.0);
    const auto s1 = propagate(orbit, period);

    // Inertial position repeats; rotating the ECEF result back by the
    // Earth angle must recover the t = 0 position.
    const Vec3 back = rotate_z(s1.position_ecef_km, k::earth_rotation_rad_s * period);
    CHECK((back - s0.position_ecef_km).norm() / s0.position_ecef_km.norm() < 1e-9);
}

TEST_CASE("propagate: geosynchronous condition pins the ECEF position") {
    // Altitude derived from the sidereal day, not from the paper's 35786.
    const double r_geo =
        std::cbrt(k::earth_mu_km3_s2 *
                  std::pow(k::sidereal_day_s / (2.0 * k::pi), 2.0));
    const double h_geo = r_geo - k::earth_radius_km;
    const Orbit orbit{h_geo, 0.0, 0.0, 0.0};

    const auto s0 = propagate(orbit, 0.0);
    for (double t : {10000.0, k::sidereal_day_s, 10.0 * k::sidereal_day_s}) {
        const auto s = propagate(orbit, t);
        CHECK((s.position_ecef_km - s0.position_ecef_km).norm() / r_geo < 1e-6);
    }
}

TEST_CASE("orbital_period: anchors and monotonicity") {
    CHECK(orbital_period_s(600.0) / 60.0 == doctest::Approx(96.7).epsilon(0.01));
    // Geostationary altitude must complete in one sidereal day.
    CHECK(orbital_period_s(35786.0) == doctest::Approx(k::sidereal_day_s).epsilon(0.001));
    // h -> 0 limit against the closed form evaluated directly.
    const double schuler =
        2.0 * k::pi * std::sqrt(std::pow(k::earth_radius_km, 3) / k::earth_mu_km3_s2);
    CHECK(orbital_period_s(1e-9) == doctest::Approx(schuler).epsilon(1e-6));

    double prev = 0.0;
    for (double h : {200.0, 600.0, 1200.0, 10000.0, 35786.0}) {
        const double period = orbital_period_s(h);
        CHECK(period > prev);
        prev = period;
    }
    CHECK_THROWS_AS(orbital_period_s(0.0), std::invalid_argument);
    CHECK_THROWS_AS(orbital_period_s(-1.0), std::invalid_argument);
}

TEST_CASE("slant_range: zenith, anchors, numeric ray oracle") {
    CHECK(slant_range_km(600.0, 90.0) == doctest::Approx(600.0).epsilon(1e-12));
    CHECK(slant_range_km(600.0, 10.0) == doctest::Approx(1932.0).epsilon(0.001));
    CHECK(slant_range_km(35786.0, 10.0) == doctest::Approx(40600.0).epsilon(0.002));

    for (double h : {600.0, 1200.0, 35786.0}) {
        for (double e : {0.0, 5.0, 10.0, 30.0, 60.0, 90.0}) {
            CHECK(slant_range_km(h, e) ==
                  doctest::Approx(oracles::numeric_slant_range_km(h, e)).epsilon(1e-9));
        }
    }

    // Strictly decreasing in elevation.
    double prev = slant_range_km(600.0, 0.0);
    for (double e = 1.0; e <= 90.0; e += 1.0) {
        const double d = slant_range_km(600.0, e);
        CHECK(d < prev);
        prev = d;
    }
    CHECK_THROWS_AS(slant_range_km(600.0, -0.1), std::invalid_argument);
    CHECK_THROWS_AS(slant_range_km(600.0, 90.1), std::invalid_argument);
}

TEST_CASE("propagation_delay: values and linearity") {
    CHECK(propagation_delay_s(600.0) * 1e3 == doctest::Approx(2.0014).epsilon(1e-4));
    CHECK(propagation_delay_s(0.0) == 0.0);
    CHECK(propagation_delay_s(35786.0) * 1e3 == doctest::Approx(119.37).epsilon(1e-4));

    std::mt19937_64 rng(42);
    std::uniform_real_distribution<double> uni(0.0, 50000.0);
    for (int i = 0; i < 100; ++i) {
        const double a = uni(rng), b = uni(rng);
        CHECK(propagation_delay_s(a + b) ==
              doctest::Approx(propagation_delay_s(a) + propagation_delay_s(b)).epsilon(1e-12));
    }
}

namespace {

// Pole pass: polar orbit observed from the north pole. Earth rotation
// neither moves the observer nor changes its distance to the orbit plane.
struct PolePass {
    Orbit orbit;
    GroundPosition ue;
    double max_doppler_hz = 0.0;
    double t_max_doppler = 0.0;
    double t_zenith = 0.0;

    PolePass(double altitude_km, double carrier_hz) : orbit{altitude_km, 90.0, 0.0, 0.0} {
        ue = GroundPosition{90.0, 0.0, 0.0};
        const double period = orbital_period_s(altitude_km);
        double best_elev = -90.0;
        for (double t = 0.0; t <= period; t += 0.25) {
            const auto s = propagate(orbit, t);
            const double elev = elevation_deg(s, ue);
            if (elev > best_elev) {
                best_elev = elev;
                t_zenith = t;
            }
            if (elev < 0.0) continue;
            const auto f = doppler_shift_hz(s, ue, carrier_hz);
            if (f && std::abs(*f) > max_doppler_hz) {
                max_doppler_hz = std::abs(*f);
                t_max_doppler = t;
            }
        }
    }
};

}  // namespace

TEST_CASE("doppler_shift: S and Ka band maxima at 600 km") {
    const PolePass s_band(600.0, 2.0e9);
    CHECK(s_band.max_doppler_hz > 0.9 * 48e3);
    CHECK(s_band.max_doppler_hz < 1.1 * 48e3);

    const PolePass ka_band(600.0, 20.0e9);
    CHECK(ka_band.max_doppler_hz > 0.9 * 480e3);
    CHECK(ka_band.max_doppler_hz < 1.1 * 480e3);

    // Near-zero radial rate at closest approach.
    const auto at_zenith = propagate(s_band.orbit, s_band.t_zenith);
    const auto f0 = doppler_shift_hz(at_zenith, s_band.ue, 2.0e9);
    REQUIRE(f0.has_value());
    CHECK(std::abs(*f0) < 0.01 * s_band.max_doppler_hz);
}

TEST_CASE("doppler_shift: analytic matches finite difference of the range") {
    const PolePass pass(600.0, 2.0e9);
    for (double t : {pass.t_max_doppler, pass.t_max_doppler + 30.0, pass.t_zenith + 60.0}) {
        const auto s = propagate(pass.orbit, t);
        const auto analytic = doppler_shift_hz(s, pass.ue, 2.0e9);
        if (!analytic) continue;
        const double fd = oracles::finite_diff_doppler_hz(pass.orbit, pass.ue, 2.0e9, t);
        CHECK(*analytic ==
              doctest::Approx(fd).epsilon(1e-3).scale(pass.max_doppler_hz));
    }
}

TEST_CASE("doppler_shift: bounded by orbital speed, empty below horizon") {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> uni(0.0, 1.0);
    int visible = 0;
    for (int i = 0; i < 300; ++i) {
        const double h = 400.0 + uni(rng) * 35000.0;
        const Orbit orbit{h, uni(rng) * 180.0, uni(rng) * 360.0, uni(rng) * 360.0};
        const GroundPosition ue{uni(rng) * 180.0 - 90.0, uni(rng) * 360.0 - 180.0, 0.0};
        const double t = uni(rng) * 7000.0;
        const auto s = propagate(orbit, t);
        const double f_c = 2.0e9;
        const auto f = doppler_shift_hz(s, ue, f_c);
        if (elevation_deg(s, ue) < 0.0) {
            CHECK_FALSE(f.has_value());
            continue;
        }
        ++visible;
        REQUIRE(f.has_value());
        // Radial speed can slightly exceed the inertial orbital speed once
        // Earth rotation is added; bound with the rotation allowance.
        const double v_bound = s.velocity_ecef_km_s.norm() +
                               k::earth_rotation_rad_s * k::earth_radius_km;
        CHECK(std::abs(*f) <= v_bound / k::light_speed_km_s * f_c * (1.0 + 1e-12));
    }
    CHECK(visible > 20);
}

TEST_CASE("visibility_window: anchors and numeric pass oracle") {
    const double w10 = visibility_window_s(600.0, 10.0);
    CHECK(w10 / 60.0 >= 7.0);
    CHECK(w10 / 60.0 <= 10.0);
    CHECK(w10 / 60.0 == doctest::Approx(8.5).epsilon(0.01));

    CHECK(visibility_window_s(600.0, 89.999) < 1.0);

    // Numeric oracle: sample the elevation of a pole pass and time the
    // interval above the mask.
    for (double e_min : {0.0, 10.0, 25.0}) {
        const Orbit orbit{600.0, 90.0, 0.0, 0.0};
        const GroundPosition pole{90.0, 0.0, 0.0};
        const double period = orbital_period_s(600.0);
        double above = 0.0;
        const double dt = 0.05;
        for (double t = 0.0; t < period; t += dt) {
            if (elevation_deg(propagate(orbit, t), pole) >= e_min) above += dt;
        }
        CHECK(visibility_window_s(600.0, e_min) == doctest::Approx(above).epsilon(0.005));
    }

    CHECK_THROWS_AS(visibility_window_s(600.0, 90.0), std::invalid_argument);
    CHECK_THROWS_AS(visibility_window_s(600.0, -1.0), std::invalid_argument);
}

TEST_CASE("footprint_area: anchors, limits, Monte Carlo oracle") {
    const double mega = footprint_area_km2(600.0, 40.0);
    CHECK(mega >= 0.85e6);
    CHECK(mega <= 1.0e6);

    CHECK(footprint_area_km2(600.0, 20.0) == doctest::Approx(1.5e5).epsilon(0.02));

    // Flat-Earth limit for narrow beams.
    for (double eps : {0.25, 0.5, 1.0}) {
        const double flat = k::pi * std::pow(600.0 * std::tan(k::deg_to_rad(eps)), 2);
        CHECK(footprint_area_km2(600.0, eps) == doctest::Approx(flat).epsilon(0.01));
    }

    // Monte Carlo ray sampling oracle (full 1e6-sample run lives in the
    // acceptance suite).
    for (double eps : {20.0, 40.0}) {
        const double mc = oracles::mc_footprint_area_km2(600.0, eps, 200000, 99);
        CHECK(footprint_area_km2(600.0, eps) == doctest::Approx(mc).epsilon(0.01));
    }

    // Monotone in half-angle up to the limb.
    const double limb = earth_limb_angle_deg(600.0);
    double prev = 0.0;
    for (double eps = 1.0; eps < limb; eps += 1.0) {
        const double area = footprint_area_km2(600.0, eps);
        CHECK(area > prev);
        prev = area;
    }
    CHECK_THROWS_AS(footprint_area_km2(600.0, limb + 0.1), std::invalid_argument);
}

TEST_CASE("elevation_at_central_angle: zenith and horizon consistency") {
    CHECK(elevation_at_central_angle_deg(600.0, 0.0) == 90.0);
    // At the horizon central angle the elevation crosses zero.
    const double horizon = 90.0 - earth_limb_angle_deg(600.0);
    CHECK(elevation_at_central_angle_deg(600.0, horizon) == doctest::Approx(0.0).scale(1.0));
    // Consistency with slant_range: the point at the central angle for 30
    // deg elevation must see the satellite at the slant_range distance.
    const double lambda = 90.0 - 30.0 -
                          k::rad_to_deg(std::asin(k::earth_radius_km *
                                                  std::cos(k::deg_to_rad(30.0)) /
                                                  (k::earth_radius_km + 600.0)));
    CHECK(elevation_at_central_angle_deg(600.0, lambda) == doctest::Approx(30.0).epsilon(1e-9));
}
