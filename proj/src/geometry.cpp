#include "ntnsim/geometry.hpp"

#include <cmath>
#include <stdexcept>

#include "ntnsim/constants.hpp"

namespace ntnsim {

namespace {
using namespace constants;
}

double Orbit::radius_km() const { return earth_radius_km + altitude_km; }

Vec3 GroundPosition::ecef_km() const {
    const double r = earth_radius_km + altitude_m / 1000.0;
    const double lat = deg_to_rad(latitude_deg);
    const double lon = deg_to_rad(longitude_deg);
    return {r * std::cos(lat) * std::cos(lon), r * std::cos(lat) * std::sin(lon),
            r * std::sin(lat)};
}

SatelliteState propagate(const Orbit& orbit, double t_s) {
    if (orbit.altitude_km <= 0.0) throw std::invalid_argument("propagate: altitude must be > 0");
    if (t_s < 0.0) throw std::invalid_argument("propagate: time must be >= 0");

    const double r = orbit.radius_km();
    const double n = std::sqrt(earth_mu_km3_s2 / (r * r * r));  // mean motion, rad/s
    const double theta = deg_to_rad(orbit.initial_anomaly_deg) + n * t_s;

    const double raan = deg_to_rad(orbit.raan_deg);
    const double incl = deg_to_rad(orbit.inclination_deg);

    // In-plane basis in ECI: ascending-node direction and its in-plane normal.
    const Vec3 node{std::cos(raan), std::sin(raan), 0.0};
    const Vec3 in_plane{-std::sin(raan) * std::cos(incl), std::cos(raan) * std::cos(incl),
                        std::sin(incl)};

    const Vec3 pos_eci = r * (std::cos(theta) * node + std::sin(theta) * in_plane);
    const Vec3 vel_eci = (r * n) * (-std::sin(theta) * node + std::cos(theta) * in_plane);

    // ECI and ECEF axes coincide at t = 0.
    const double earth_angle = earth_rotation_rad_s * t_s;
    SatelliteState state;
    state.time_s = t_s;
    state.position_ecef_km = rotate_z(pos_eci, -earth_angle);
    state.velocity_ecef_km_s = rotate_z(vel_eci, -earth_angle);
    return state;
}

double orbital_period_s(double altitude_km) {
    if (altitude_km <= 0.0) throw std::invalid_argument("orbital_period: altitude must be > 0");
    const double r = earth_radius_km + altitude_km;
    return 2.0 * pi * std::sqrt(r * r * r / earth_mu_km3_s2);
}

double slant_range_km(double altitude_km, double elevation_deg) {
    if (altitude_km <= 0.0) throw std::invalid_argument("slant_range: altitude must be > 0");
    if (elevation_deg < 0.0 || elevation_deg > 90.0)
        throw std::invalid_argument("slant_range: elevation must be in [0, 90] deg");
    const double ratio = (earth_radius_km + altitude_km) / earth_radius_km;
    const double e = deg_to_rad(elevation_deg);
    const double ce = std::cos(e);
    return earth_radius_km * (std::sqrt(ratio * ratio - ce * ce) - std::sin(e));
}

double propagation_delay_s(double distance_km) {
    if (distance_km < 0.0) throw std::invalid_argument("propagation_delay: distance must be >= 0");
    return distance_km / light_speed_km_s;
}

double elevation_deg(const SatelliteState& sat, const GroundPosition& ground) {
    const Vec3 u = ground.ecef_km();
    const Vec3 los = sat.position_ecef_km - u;
    const double d = los.norm();
    const double sin_el = los.dot(u.normalized()) / d;
    return rad_to_deg(std::asin(sin_el));
}

std::optional<double> doppler_shift_hz(const SatelliteState& sat, const GroundPosition& ground,
                                       double carrier_hz) {
    if (carrier_hz <= 0.0) throw std::invalid_argument("doppler_shift: carrier must be > 0");
    if (elevation_deg(sat, ground) < 0.0) return std::nullopt;

    // Range rate is frame independent; compute it from the ECEF derivative
    // of the satellite position against the Earth-fixed ground point.
    const Vec3 omega{0.0, 0.0, earth_rotation_rad_s};
    const Vec3 v_ecef = sat.velocity_ecef_km_s - omega.cross(sat.position_ecef_km);
    const Vec3 los = sat.position_ecef_km - ground.ecef_km();
    const double range_rate_km_s = v_ecef.dot(los) / los.norm();
    return -range_rate_km_s / light_speed_km_s * carrier_hz;
}

double visibility_window_s(double altitude_km, double min_elevation_deg) {
    if (altitude_km <= 0.0) throw std::invalid_argument("visibility_window: altitude must be > 0");
    if (min_elevation_deg < 0.0 || min_elevation_deg >= 90.0)
        throw std::invalid_argument("visibility_window: min elevation must be in [0, 90) deg");
    const double e = deg_to_rad(min_elevation_deg);
    const double lambda_max =
        pi / 2.0 - e - std::asin(earth_radius_km * std::cos(e) / (earth_radius_km + altitude_km));
    return 2.0 * (lambda_max / (2.0 * pi)) * orbital_period_s(altitude_km);
}

double earth_limb_angle_deg(double altitude_km) {
    if (altitude_km <= 0.0) throw std::invalid_argument("earth_limb_angle: altitude must be > 0");
    return rad_to_deg(std::asin(earth_radius_km / (earth_radius_km + altitude_km)));
}

double beam_central_angle_deg(double altitude_km, double nadir_half_angle_deg) {
    if (altitude_km <= 0.0) throw std::invalid_argument("beam_central_angle: altitude must be > 0");
    if (nadir_half_angle_deg <= 0.0)
        throw std::invalid_argument("beam_central_angle: half-angle must be > 0");
    if (nadir_half_angle_deg > earth_limb_angle_deg(altitude_km))
        throw std::invalid_argument("beam_central_angle: beam overshoots the Earth limb");
    const double eps = deg_to_rad(nadir_half_angle_deg);
    const double ratio = (earth_radius_km + altitude_km) / earth_radius_km;
    // Law of sines in the Earth-center / satellite / intersection triangle;
    // the near intersection has an obtuse angle at the surface.
    const double s = std::min(1.0, ratio * std::sin(eps));
    return rad_to_deg(std::asin(s) - eps);
}

double footprint_area_km2(double altitude_km, double nadir_half_angle_deg) {
    const double lambda = deg_to_rad(beam_central_angle_deg(altitude_km, nadir_half_angle_deg));
    return 2.0 * pi * earth_radius_km * earth_radius_km * (1.0 - std::cos(lambda));
}

double elevation_at_central_angle_deg(double altitude_km, double central_angle_deg) {
    const double lambda = deg_to_rad(central_angle_deg);
    const double ratio = earth_radius_km / (earth_radius_km + altitude_km);
    // tan(e) = (cos(lambda) - R/r) / sin(lambda); degenerate at lambda = 0.
    if (central_angle_deg <= 0.0) return 90.0;
    return rad_to_deg(std::atan2(std::cos(lambda) - ratio, std::sin(lambda)));
}

}  // namespace ntnsim
