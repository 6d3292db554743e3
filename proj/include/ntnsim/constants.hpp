#pragma once

namespace ntnsim::constants {

// Physical constants used across the simulator. Mean spherical Earth,
// no oblateness.
inline constexpr double earth_radius_km = 6371.0;
inline constexpr double light_speed_m_s = 299792458.0;
inline constexpr double light_speed_km_s = light_speed_m_s / 1000.0;
inline constexpr double earth_mu_km3_s2 = 398600.4418;  // GM of Earth
inline constexpr double sidereal_day_s = 86164.0905;
inline constexpr double earth_rotation_rad_s = 6.283185307179586476925287 / sidereal_day_s;
inline constexpr double boltzmann_j_k = 1.380649e-23;
inline constexpr double pi = 3.14159265358979323846;

inline constexpr double deg_to_rad(double deg) { return deg * pi / 180.0; }
inline constexpr double rad_to_deg(double rad) { return rad * 180.0 / pi; }

}  // namespace ntnsim::constants
