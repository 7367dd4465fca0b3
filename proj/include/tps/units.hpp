#pragma once

// Unit conventions used throughout:
//   user-facing frequencies are nu = omega/2pi in GHz, relative to the laser;
//   internal generators work in angular units, rad/ns;
//   times are ns, detector response widths are ps.
// 1 GHz of nu corresponds to 2*pi rad/ns of omega.

namespace tps {

inline constexpr double kTwoPi = 6.283185307179586476925286766559;

constexpr double ghz_to_angular(double nu_ghz) { return kTwoPi * nu_ghz; }
constexpr double angular_to_ghz(double omega_rad_ns) { return omega_rad_ns / kTwoPi; }
constexpr double ps_to_ns(double ps) { return ps * 1e-3; }

}  // namespace tps
