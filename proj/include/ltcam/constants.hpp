#pragma once

#include <numbers>

namespace ltcam::constants {

// Earth (EGM-96 / WGS-84 values), km and s.
inline constexpr double kMuEarth = 398600.4418;
inline constexpr double kEarthRadius = 6378.137;
inline constexpr double kJ2 = 1.08262668e-3;
inline constexpr double kJ3 = -2.53265649e-6;
inline constexpr double kJ4 = -1.61962159e-6;
inline constexpr double kEarthRotationRate = 7.292115146706979e-5;  // rad/s
inline constexpr double kWgs84Flattening = 1.0 / 298.257223563;

inline constexpr double kMuSun = 1.32712440018e11;
inline constexpr double kMuMoon = 4902.800066;
inline constexpr double kAstronomicalUnit = 149597870.7;
// Solar radiation pressure at 1 AU, N/m^2.
inline constexpr double kSolarPressure = 4.56e-6;

inline constexpr double kJ2000JulianDate = 2451545.0;
inline constexpr double kSecondsPerDay = 86400.0;

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kDeg = kPi / 180.0;

}  // namespace ltcam::constants
