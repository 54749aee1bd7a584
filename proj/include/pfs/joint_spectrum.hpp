#ifndef PFS_JOINT_SPECTRUM_HPP
#define PFS_JOINT_SPECTRUM_HPP

#include <complex>
#include <string>
#include <vector>

#include "pfs/phasematching.hpp"

namespace pfs {

// Gaussian-envelope pump pulse train (sigma = 0 flags the monochromatic regime).
struct PumpConfig {
  double omega0 = 0;         // carrier, rad/s
  double sigma = 0;          // bandwidth, rad/s
  double average_power = 0;  // W
  double rep_rate = 0;       // Hz

  // Peak power of the transform-limited pulse: the temporal intensity envelope
  // is exp(-sigma^2 t^2 / 2), so T_eff = integral I dt / I_peak = sqrt(2 pi)/sigma
  // and P_peak = p sigma / (R sqrt(2 pi)).  Monochromatic: P_peak = p.
  double peak_power() const;

  void validate() const;
};

// Spectral amplitude 2^{1/4} / (pi^{1/4} sqrt(sigma)) exp[-(w - w0)^2 / sigma^2];
// its square integrates to exactly 1.  Throws std::invalid_argument for sigma <= 0.
double pump_envelope(double omega, const PumpConfig& pump);

// Pair joint spectral amplitude: the pump-convolution integral
//   F(ws, wi) = integral dw a1(w) a2(ws + wi - w) sinc[(L/2) dk] e^{i (L/2) dk}.
// The bare variant f = sqrt(pi s1 s2 / 2) F carries unit Gaussian prefactors so
// that all constants sit in the efficiency prefactor.
std::complex<double> jsa_sfwm(const ProcessContext& ctx, const PumpConfig& pump1,
                              const PumpConfig& pump2, double length, double omega_s,
                              double omega_i);
std::complex<double> jsa_sfwm_bare(const ProcessContext& ctx, const PumpConfig& pump1,
                                   const PumpConfig& pump2, double length, double omega_s,
                                   double omega_i);

// Triplet joint spectral amplitude G = a(wr + ws + wi) sinc[L dk / 2] e^{i L dk / 2}
// and its bare variant g = (pi sigma^2 / 2)^{1/4} G.
std::complex<double> jsa_tospdc(const ProcessContext& ctx, const PumpConfig& pump, double length,
                                double omega_r, double omega_s, double omega_i);
std::complex<double> jsa_tospdc_bare(const ProcessContext& ctx, const PumpConfig& pump,
                                     double length, double omega_r, double omega_s, double omega_i);

// Rotated frequency coordinates aligned with the correlation structure.
// SFWM: nu_pm = (nu_s +/- nu_i) / sqrt(2) for detunings from the phasematched
// anchor.  TOSPDC: an orthogonal transform of the three detunings from
// omega_0 = omega_p / 3 whose first axis is the pump-sum direction.
void sfwm_to_rotated(double nu_s, double nu_i, double& nu_plus, double& nu_minus);
void sfwm_from_rotated(double nu_plus, double nu_minus, double& nu_s, double& nu_i);
void tospdc_to_rotated(double nu_r, double nu_s, double nu_i, double& nu_plus, double& nu_a,
                       double& nu_b);
void tospdc_from_rotated(double nu_plus, double nu_a, double nu_b, double& nu_r, double& nu_s,
                         double& nu_i);

struct GridAxis {
  std::string label;           // e.g. "nu_plus"
  std::vector<double> values;  // rad/s
};

// Sampled joint spectral intensity (2D grid, or 1D profile when axis2 is empty).
// values is row-major over (axis1, axis2); normalized is values / max.
struct JointSpectrumGrid {
  ProcessKind kind;
  GridAxis axis1, axis2;
  std::vector<double> values;
  std::vector<double> normalized;
  double peak_value = 0;
  double fiber_length = 0;
  // Anchor frequencies mapping detunings back to absolute frequencies.
  double anchor_omega_s = 0, anchor_omega_i = 0, anchor_omega_r = 0;
  std::string transform;  // description of the linear coordinate transform

  bool is_profile() const { return axis2.values.empty(); }
};

// |F|^2 on the rotated (nu_plus, nu_minus) grid anchored at a perfectly
// phasematched (omega_s0, omega_i0).  Half-ranges <= 0 request auto-windowing:
// nu_plus from 4x the pump bandwidth scale, nu_minus from the detuning at
// which the sinc^2 factor is bounded below 1e-4 of the peak.
JointSpectrumGrid jsi_grid_sfwm(const ProcessContext& ctx, const PumpConfig& pump1,
                                const PumpConfig& pump2, double length, double omega_s0,
                                double omega_i0, int n = 256, double half_plus = 0,
                                double half_minus = 0, bool parallel = true);

// TOSPDC slices: |G|^2 over (nu_a, nu_b) at nu_plus = 0, and the 1D profile
// along nu_plus at nu_a = nu_b = 0.
struct TospdcSlices {
  JointSpectrumGrid plane;    // (nu_a, nu_b)
  JointSpectrumGrid profile;  // nu_plus
};
TospdcSlices jsi_slices_tospdc(const ProcessContext& ctx, const PumpConfig& pump, double length,
                               int n_grid = 256, int n_profile = 1024, double half_plus = 0,
                               double half_perp = 0, bool parallel = true);

// Full width at half maximum of a sampled 1D profile (linear interpolation at
// the half-maximum crossings).  Returns 0 if the profile never drops below
// half maximum inside the sampled range.
double fwhm(const std::vector<double>& x, const std::vector<double>& y);

// Extracts the 1D cut of a 2D grid along axis 1 (axis2 fixed to the sample
// nearest `at`) or along axis 2 (axis1 fixed likewise).
std::vector<double> grid_cut(const JointSpectrumGrid& grid, int along_axis, double at);

// CSV: long format (axis columns + raw + normalized).  JSON: full axis and
// transform metadata plus both value sets.
void export_grid_csv(const JointSpectrumGrid& grid, const std::string& path);
void export_grid_json(const JointSpectrumGrid& grid, const std::string& path);

}  // namespace pfs

#endif
