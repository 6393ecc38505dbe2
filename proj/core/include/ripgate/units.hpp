#pragma once

namespace ripgate::units {

// Convention used throughout: every configured frequency is nu = omega/2pi in
// MHz and every time is in ns. Internally all rates are angular (rad/ns).
// 1 MHz corresponds to 2*pi*1e-3 rad/ns; this is the only place the
// conversion constant lives.
inline constexpr double kPi = 3.14159265358979323846264338327950288;
inline constexpr double kTwoPi = 2.0 * kPi;
inline constexpr double kRadPerNsPerMHz = kTwoPi * 1e-3;

constexpr double angular(double nu_mhz) { return nu_mhz * kRadPerNsPerMHz; }
constexpr double to_mhz(double omega_rad_ns) { return omega_rad_ns / kRadPerNsPerMHz; }

}  // namespace ripgate::units
