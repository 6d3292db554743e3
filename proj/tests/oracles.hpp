#pragma once

// Independent reference computations the tests check the implementation
// against. These deliberately avoid the closed forms used by the library:
// ray-sphere intersections are solved numerically, Doppler comes from
// finite differences of the propagated range, and footprint areas from
// Monte Carlo ray sampling.

#include <cmath>
#include <random>
#include <stdexcept>

#include "ntnsim/constants.hpp"
#include "ntnsim/geometry.hpp"

namespace oracles {

// Slant range by bisection on |u + t*dir| = R_E + h with the observer on
// the sphere and the ray elevated by `elevation_deg` above the local
// horizon.
inline double numeric_slant_range_km(double altitude_km, double elevation_deg) {
    const double R = ntnsim::constants::earth_radius_km;
    const double r = R + altitude_km;
    const double e = ntnsim::constants::deg_to_rad(elevation_deg);
    // Observer at (R, 0); ray direction (sin e, cos e) in the local
    // up/horizontal plane.
    auto radius_at = [&](double t) {
        const double x = R + t * std::sin(e);
        const double y = t * std::cos(e);
        return std::sqrt(x * x + y * y);
    };
    double lo = 0.0;
    double hi = 2.0 * (r + R);
    for (int i = 0; i < 200; ++i) {
        const double mid = 0.5 * (lo + hi);
        if (radius_at(mid) < r) lo = mid;
        else hi = mid;
    }
    return 0.5 * (lo + hi);
}

// Doppler by central finite difference of the propagated slant range.
inline double finite_diff_doppler_hz(const ntnsim::Orbit& orbit,
                                     const ntnsim::GroundPosition& ground, double carrier_hz,
                                     double t_s, double dt_s = 1e-3) {
    const auto before = ntnsim::propagate(orbit, t_s - dt_s);
    const auto after = ntnsim::propagate(orbit, t_s + dt_s);
    const ntnsim::Vec3 u = ground.ecef_km();
    const double d0 = (before.position_ecef_km - u).norm();
    const double d1 = (after.position_ecef_km - u).norm();
    const double range_rate_km_s = (d1 - d0) / (2.0 * dt_s);
    return -range_rate_km_s / ntnsim::constants::light_speed_km_s * carrier_hz;
}

// Footprint area by Monte Carlo ray sampling: directions uniform in the
// solid angle of the beam cone, each ray intersected with the sphere
// numerically, surface patches accumulated through the d^2 / cos(theta)
// Jacobian.
inline double mc_footprint_area_km2(double altitude_km, double half_angle_deg,
                                    std::size_t samples, std::uint64_t seed) {
    const double R = ntnsim::constants::earth_radius_km;
    const double r = R + altitude_km;
    const double eps = ntnsim::constants::deg_to_rad(half_angle_deg);
    if (std::sin(eps) * r > R)
        throw std::invalid_argument("mc footprint: beam overshoots the Earth");

    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> uni(0.0, 1.0);

    const double cos_eps = std::cos(eps);
    const double solid_angle = 2.0 * ntnsim::constants::pi * (1.0 - cos_eps);

    // Satellite at (r, 0, 0), boresight along -x (nadir).
    double acc = 0.0;
    for (std::size_t i = 0; i < samples; ++i) {
        const double cos_t = 1.0 - uni(rng) * (1.0 - cos_eps);
        const double sin_t = std::sqrt(std::max(0.0, 1.0 - cos_t * cos_t));
        const double phi = 2.0 * ntnsim::constants::pi * uni(rng);
        // Direction with angle t from nadir.
        const double dx = -cos_t;
        const double dy = sin_t * std::cos(phi);
        const double dz = sin_t * std::sin(phi);

        // Solve |(r + s*dx, s*dy, s*dz)| = R for the near root.
        const double b = r * dx;  // dot(origin, dir)
        const double c = r * r - R * R;
        const double disc = b * b - c;
        if (disc < 0.0) continue;  // cannot happen inside the limb
        const double s = -b - std::sqrt(disc);

        const double px = r + s * dx;
        const double py = s * dy;
        const double pz = s * dz;
        // Incidence cosine between the ray and the inward surface normal.
        const double cos_inc = -(px * dx + py * dy + pz * dz) / R;
        acc += s * s / cos_inc;
    }
    return solid_angle * acc / static_cast<double>(samples);
}

}  // namespace oracles
