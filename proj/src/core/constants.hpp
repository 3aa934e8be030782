#pragma once

// Physical constants, SI (CODATA 2018 exact/recommended values).
namespace fluxtorque::constants {

inline constexpr double c0 = 299792458.0;            // m/s
inline constexpr double hbar = 1.054571817e-34;      // J s
inline constexpr double k_B = 1.380649e-23;          // J/K
inline constexpr double eps0 = 8.8541878128e-12;     // F/m
inline constexpr double mu0 = 1.25663706212e-6;      // H/m
inline constexpr double e_charge = 1.602176634e-19;  // C
inline constexpr double m_electron = 9.1093837015e-31;  // kg
inline constexpr double g_earth = 9.81;              // m/s^2
inline constexpr double pi = 3.14159265358979323846;
inline constexpr double pascal_per_torr = 133.322;   // config-time conversion only

}  // namespace fluxtorque::constants
