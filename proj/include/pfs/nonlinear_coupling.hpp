#ifndef PFS_NONLINEAR_COUPLING_HPP
#define PFS_NONLINEAR_COUPLING_HPP

#include <limits>

#include "pfs/constants.hpp"
#include "pfs/fiber_modes.hpp"

namespace pfs {

// Physical inputs shared by all gamma computations.
struct NonlinearContext {
  double chi3 = chi3_silica_default;  // m^2/V^2
};

// Effective areas from normalized transverse profiles.  Overlap integrals run
// in cylindrical coordinates: adaptive radial quadrature, analytic azimuthal
// factors.  A vanishing overlap yields +inf.
double effective_area_single(const TransverseProfile& profile);
double effective_area_two_mode(const TransverseProfile& mu, const TransverseProfile& nu);

// Four-field interaction area.  Two conventions:
//  - scalar: the profiles' scalar fields multiplied directly (conjugation is a
//    no-op on the real scalars);
//  - full_vector: the isotropic chi3 pairing of the exact vector mode fields,
//    longitudinal components included with their conjugation phases.  This
//    matters for sub-wavelength cores, where Ez carries a large field
//    fraction; it is what the pipeline uses for gamma_fwm / gamma_pdc.
// n_unconjugated is the number of leading pump (annihilated) fields: 2 for
// four-wave mixing, 1 for triplet downconversion.
enum class OverlapConvention { scalar, full_vector };
double effective_area_four(const TransverseProfile& p1, const TransverseProfile& p2,
                           const TransverseProfile& p3, const TransverseProfile& p4,
                           OverlapConvention convention = OverlapConvention::scalar,
                           int n_unconjugated = 2);

// Self-phase modulation coefficient: gamma = 3 chi3 w0 / (4 eps0 c^2 n^2 A_eff).
double gamma_self(const NonlinearContext& ctx, double omega0, double n, double a_eff);

// Cross-phase modulation coefficient between fields mu and nu.
double gamma_cross(const NonlinearContext& ctx, double omega_mu0, double n_mu, double n_nu,
                   double a_eff_mu_nu);

// Four-field coefficients for the two processes.
double gamma_fwm(const NonlinearContext& ctx, double omega1, double omega2, double n1, double n2,
                 double a_eff_four);
double gamma_pdc(const NonlinearContext& ctx, double omega_p, double n_p, double a_eff_four);

// Nonlinear phase for SFWM, simplified (self-phase only) form.
double phi_nl_sfwm(double gamma1, double gamma2, double p1_peak, double p2_peak);

// Full SFWM nonlinear phase with explicit cross-phase terms.
struct SfwmGammaSet {
  double g1, g2;             // self
  double g12, g21;           // pump-pump cross
  double gs1, gs2, gi1, gi2; // signal/idler-pump cross
};
double phi_nl_sfwm_full(const SfwmGammaSet& g, double p1_peak, double p2_peak);

// TOSPDC nonlinear mismatch term: [gamma_p - 2(gamma_rp + gamma_sp + gamma_ip)] P.
double phi_nl_tospdc(double gamma_p, double gamma_rp, double gamma_sp, double gamma_ip,
                     double p_peak);

// Four-field coupling evaluated at the process carrier frequencies (the
// full-vector overlap convention; see effective_area_four).
struct ProcessCoefficients {
  double gamma = 0;       // gamma_fwm or gamma_pdc, 1/(W m)
  double a_eff_four = 0;  // m^2
  double n1 = 0, n2 = 0;  // bulk core indices at the pump carriers
  double omega1 = 0, omega2 = 0;  // pump carriers, rad/s
};

// SFWM: degenerate HE11 pumps at omega_p, signal/idler HE11 at the anchor
// frequencies.  TOSPDC: HE12 pump at omega_p, triplets HE11 at omega_p / 3.
ProcessCoefficients sfwm_coefficients(const FiberGeometry& geometry, const NonlinearContext& nl,
                                      double omega_p, double omega_s0, double omega_i0);
ProcessCoefficients tospdc_coefficients(const FiberGeometry& geometry, const NonlinearContext& nl,
                                        double omega_p);

}  // namespace pfs

#endif
