#ifndef PFS_TESTS_FIXTURE_HPP
#define PFS_TESTS_FIXTURE_HPP

#include "pfs/efficiency.hpp"

namespace fixture {

// Shared pipeline state for the heavier suites: the designed fiber, both
// process contexts, the phasematched SFWM anchor and the coupling
// coefficients.  Built once per binary.
struct Pipeline {
  pfs::SellmeierModel silica = pfs::SellmeierModel::fused_silica();
  pfs::DesignResult design;
  std::shared_ptr<pfs::FiberGeometry> geom;
  pfs::ProcessContext sfwm, tospdc;
  double omega_p = 0;        // 532 nm pump carrier
  double ws0 = 0, wi0 = 0;   // outer-branch phasematched signal/idler
  pfs::ProcessCoefficients co_sfwm, co_tospdc;
  pfs::PumpConfig pulse;     // sigma = 2.35e10 rad/s, 180 mW, 100 MHz
  double design_seconds = 0;
  double anchor_seconds = 0;
};

const Pipeline& pipeline();

// Baseline efficiency requests (L = 1 cm) for the two processes.
pfs::EfficiencyRequest sfwm_request(pfs::Regime regime);
pfs::EfficiencyRequest tospdc_request(pfs::Regime regime);

}  // namespace fixture

#endif
