#ifndef PFS_EFFICIENCY_HPP
#define PFS_EFFICIENCY_HPP

#include <string>
#include <vector>

#include "pfs/joint_spectrum.hpp"

namespace pfs {

enum class Regime { pulsed, cw };

// Tunable quadrature knobs.  `resolution` scales every node count; doubling it
// is the self-convergence check.  `tail_tol` is the cumulative fraction below
// which slowly decaying sinc tails are truncated.
struct QuadratureSettings {
  double resolution = 1.0;
  double tail_tol = 1e-3;
};

struct EfficiencyRequest {
  const ProcessContext* ctx = nullptr;
  ProcessCoefficients coefficients;  // gamma_fwm or gamma_pdc at the carriers
  PumpConfig pump1, pump2;           // pump2 ignored for TOSPDC
  double length = 0;                 // m
  Regime regime = Regime::pulsed;
  // SFWM integration anchor: a perfectly phasematched signal/idler pair.
  double omega_s0 = 0, omega_i0 = 0;
  QuadratureSettings quad;

  void validate() const;
};

// eta plus the factors it was assembled from, for audit: eta = prefactor * integral.
struct EfficiencyResult {
  double eta = 0;
  double prefactor = 0;
  double integral = 0;
  double rel_error_estimate = 0;  // quadrature panel-difference + tail estimate
  double gamma = 0;               // 1/(W m)
  double peak_power = 0;          // W, as used inside the phasemismatch
};

// Spectral weights entering the efficiency integrals; k1 from the mode table,
// n the bulk core index.
double h2(const ProcessContext& ctx, double omega_s, double omega_i);
double h3(const ProcessContext& ctx, double omega_r, double omega_s, double omega_i);

EfficiencyResult eta_sfwm_pulsed(const EfficiencyRequest& req);
EfficiencyResult eta_sfwm_cw(const EfficiencyRequest& req);
EfficiencyResult eta_tospdc_pulsed(const EfficiencyRequest& req);
EfficiencyResult eta_tospdc_cw(const EfficiencyRequest& req);

// Dispatch on (process, regime).
EfficiencyResult run_efficiency(const EfficiencyRequest& req);

enum class SweepParameter { bandwidth, power, length };

struct SweepPoint {
  double value;  // parameter value, SI
  double eta;
};

// Reruns the efficiency with the parameter overridden per value (bandwidth and
// power apply to both pumps).
std::vector<SweepPoint> sweep(const EfficiencyRequest& base, SweepParameter parameter,
                              const std::vector<double>& values);

void export_sweep_csv(const std::vector<SweepPoint>& points, SweepParameter parameter,
                      const std::string& path);

}  // namespace pfs

#endif
