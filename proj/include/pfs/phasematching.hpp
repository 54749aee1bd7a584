#ifndef PFS_PHASEMATCHING_HPP
#define PFS_PHASEMATCHING_HPP

#include <memory>
#include <optional>
#include <vector>

#include "pfs/nonlinear_coupling.hpp"

namespace pfs {

enum class ProcessKind { sfwm, tospdc };

enum class ContourBranch { inner, outer, single };

struct ContourPoint {
  double omega_p;   // rad/s
  double detuning;  // rad/s; Delta_s for SFWM, Delta_r for TOSPDC
  ContourBranch branch;
  double residual;  // |Delta k| at the reported point, rad/m
};

class NoSolutionInBracket : public std::runtime_error {
 public:
  explicit NoSolutionInBracket(const std::string& what) : std::runtime_error(what) {}
};

// Dispersion context shared by the phasematching, joint-spectrum and
// efficiency layers: mode tables plus the nonlinear phase coefficients.
struct ProcessContext {
  ProcessKind kind;
  std::shared_ptr<const FiberGeometry> geometry;
  std::shared_ptr<const ModeDispersion> photon_mode;  // HE11 table (signal/idler/triplets)
  std::shared_ptr<const ModeDispersion> pump_mode;    // HE11 for SFWM, HE12 for TOSPDC
  // Nonlinear phase per watt of peak pump power (rad/m/W); precomputed from
  // the gamma coefficients at the carrier frequencies.
  double phi_nl_per_watt = 0.0;
};

// Builds the context for the degenerate-pumps SFWM scheme (all fields
// HE11) or the HE12-pump TOSPDC scheme, with dispersion tables spanning
// [lambda_min_um, lambda_max_um] for the photon mode.  The pump table for
// TOSPDC spans the HE12 guided range within [pump_lambda_min_um,
// pump_lambda_max_um].
ProcessContext make_sfwm_context(std::shared_ptr<const FiberGeometry> geometry, double lambda_min_um,
                                 double lambda_max_um, int n_samples, double pump_lambda_um,
                                 const NonlinearContext& nl, bool parallel = true);
ProcessContext make_tospdc_context(std::shared_ptr<const FiberGeometry> geometry,
                                   double lambda_min_um, double lambda_max_um, int n_samples,
                                   double pump_lambda_min_um, double pump_lambda_max_um,
                                   int n_pump_samples, double pump_lambda_um,
                                   const NonlinearContext& nl, bool parallel = true);

// Phasemismatch for SFWM (degenerate pumps share k1 = k2 = pump-mode table):
// k1(omega) + k2(omega_s + omega_i - omega) - k(omega_s) - k(omega_i) - Phi_NL.
double delta_k_sfwm(const ProcessContext& ctx, double omega, double omega_s, double omega_i,
                    double p1_peak, double p2_peak);

// Monochromatic-pump SFWM mismatch with half-sum arguments (degenerate pumps).
double delta_k_sfwm_cw(const ProcessContext& ctx, double omega_s, double omega_i, double p1,
                       double p2);

// TOSPDC phasemismatch: k_p(sum) - k_r - k_s - k_i + nonlinear term.
double delta_k_tospdc(const ProcessContext& ctx, double omega_r, double omega_s, double omega_i,
                      double p_peak);

struct ContourOptions {
  int n_pump_points = 200;
  int n_detuning_scan = 2000;
  double residual_tol = 1e-3;     // rad/m
  double min_detuning = 1e11;     // rad/s; excludes the trivial Delta=0 root
  bool parallel = true;
};

// Perfect-phasematching contour for degenerate-pumps SFWM: for each pump
// frequency, up to two detuning roots (inner/outer), Delta_i = -Delta_s.
std::vector<ContourPoint> sfwm_contour(const ProcessContext& ctx, double omega_p_min,
                                       double omega_p_max, double peak_power,
                                       const ContourOptions& opt = {});

// TOSPDC contour at fixed idler frequency omega_i; Delta_r = -Delta_s around
// (omega_p - omega_i)/2.
std::vector<ContourPoint> tospdc_contour(const ProcessContext& ctx, double omega_i,
                                         double omega_p_min, double omega_p_max, double peak_power,
                                         const ContourOptions& opt = {});

// Inverse design: the core radius for which frequency-degenerate TOSPDC is
// phasematched at lambda_degenerate (k_HE12(3w) = 3 k_HE11(w)).
struct DesignResult {
  double radius;     // m
  double residual;   // rad/m at the returned radius
};
// The tight default tolerance keeps the residual mismatch well inside the
// first sinc lobe (|dk| L / 2 << 1) for fiber lengths up to tens of cm; the
// residual scales as ~2e12 rad/m per meter of radius error.
DesignResult degenerate_tospdc_radius(const SellmeierModel& core, double lambda_degenerate_m,
                                      double r_min = 0.2e-6, double r_max = 0.8e-6,
                                      double rel_tol = 1e-8);

// CSV export: omega_p, lambda_p_um, branch, detuning, lambda_s_um, lambda_i_um, residual.
void export_contour_csv(const std::vector<ContourPoint>& points, ProcessKind kind,
                        double omega_i_fixed, const std::string& path);

}  // namespace pfs

#endif
