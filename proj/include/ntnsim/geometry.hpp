#pragma once

#include <optional>

#include "ntnsim/vec3.hpp"

namespace ntnsim {

/// Circular orbit around a spherical Earth. All the scenarios in this
/// project are parameterized by altitude alone; inclination/RAAN/anomaly
/// select the plane and the phase.
struct Orbit {
    double altitude_km = 600.0;
    double inclination_deg = 0.0;      // [0, 180]
    double raan_deg = 0.0;             // [0, 360)
    double initial_anomaly_deg = 0.0;  // [0, 360), measured from ascending node

    double radius_km() const;
};

/// Satellite kinematic state at a given time.
///
/// position_ecef_km is the ECEF position (ECI and ECEF axes coincide at
/// t = 0). velocity_ecef_km_s is the inertial velocity expressed in ECEF
/// axes, so |velocity| == sqrt(mu/r) for circular orbits. The rotating
/// frame derivative, needed for range rates, is velocity - omega x position
/// and is what doppler_shift() uses internally.
struct SatelliteState {
    double time_s = 0.0;
    Vec3 position_ecef_km;
    Vec3 velocity_ecef_km_s;
};

struct GroundPosition {
    double latitude_deg = 0.0;   // [-90, 90]
    double longitude_deg = 0.0;  // [-180, 180)
    double altitude_m = 0.0;

    Vec3 ecef_km() const;
};

/// State on the circular orbit at time t >= 0, Earth rotation applied.
SatelliteState propagate(const Orbit& orbit, double t_s);

/// 2*pi*sqrt((R_E+h)^3 / mu). Rejects h <= 0.
double orbital_period_s(double altitude_km);

/// Line-of-sight distance to a satellite at altitude h seen under the
/// given elevation angle. Rejects elevation outside [0, 90].
double slant_range_km(double altitude_km, double elevation_deg);

/// distance / c. Rejects negative distance.
double propagation_delay_s(double distance_km);

/// Elevation of the satellite above the local horizon of `ground`,
/// in degrees (negative when below the horizon).
double elevation_deg(const SatelliteState& sat, const GroundPosition& ground);

/// Carrier shift from the range rate between the satellite and a fixed
/// ground point; positive while approaching. Empty when the satellite is
/// below the horizon.
std::optional<double> doppler_shift_hz(const SatelliteState& sat,
                                       const GroundPosition& ground,
                                       double carrier_hz);

/// Single-pass visibility duration for a ground point crossed at maximum
/// elevation 90 deg, non-rotating-Earth approximation:
///   2 * (lambda_max / 360) * orbital_period,
///   lambda_max = 90 - e_min - asin(R_E cos(e_min) / (R_E + h)).
double visibility_window_s(double altitude_km, double min_elevation_deg);

/// Earth-central angle subtended by the beam edge ray of a cone with the
/// given nadir half-angle. Rejects half-angles beyond the Earth limb.
double beam_central_angle_deg(double altitude_km, double nadir_half_angle_deg);

/// Largest nadir half-angle whose edge ray still grazes the Earth:
/// asin(R_E / (R_E + h)).
double earth_limb_angle_deg(double altitude_km);

/// Spherical-cap footprint area 2*pi*R_E^2*(1 - cos(lambda)) for a beam of
/// the given nadir half-angle.
double footprint_area_km2(double altitude_km, double nadir_half_angle_deg);

/// Elevation angle seen from a ground point at Earth-central angle lambda
/// from the sub-satellite point (degrees in, degrees out).
double elevation_at_central_angle_deg(double altitude_km, double central_angle_deg);

}  // namespace ntnsim
