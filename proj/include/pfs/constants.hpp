#ifndef PFS_CONSTANTS_HPP
#define PFS_CONSTANTS_HPP

namespace pfs {

// CODATA values, SI units throughout.
inline constexpr double c_light = 2.99792458e8;       // m/s
inline constexpr double hbar = 1.054571817e-34;       // J s
inline constexpr double eps0 = 8.8541878128e-12;      // F/m
inline constexpr double pi = 3.14159265358979323846;

// Default third-order susceptibility of fused silica, m^2/V^2.
// Corresponds to n2 ~ 2.5e-20 m^2/W.
inline constexpr double chi3_silica_default = 1.85e-22;

inline constexpr double twopi = 2.0 * pi;

// Wavelength (m) <-> angular frequency (rad/s).
inline constexpr double omega_from_lambda(double lambda_m) {
  return twopi * c_light / lambda_m;
}
inline constexpr double lambda_from_omega(double omega) {
  return twopi * c_light / omega;
}

}  // namespace pfs

#endif
