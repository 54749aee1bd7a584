#include <doctest.h>

#include <cmath>

#include "pfs/constants.hpp"
#include "pfs/nonlinear_coupling.hpp"

using namespace pfs;

namespace {

const FiberGeometry& geometry() {
  static const FiberGeometry g(0.395e-6, SellmeierModel::fused_silica());
  return g;
}

}  // namespace

TEST_CASE("effective areas are positive and of sub-square-micron scale") {
  TransverseProfile he11(geometry(), ModeId::HE11(), omega_from_lambda(0.532e-6));
  TransverseProfile he12(geometry(), ModeId::HE12(), omega_from_lambda(0.532e-6));
  const double a_self = effective_area_single(he11);
  CHECK(a_self > 0.01e-12);
  CHECK(a_self < 5e-12);
  // Cross-mode overlap is weaker than self overlap, so the area is larger.
  CHECK(effective_area_two_mode(he11, he12) > a_self);
}

TEST_CASE("scalar four-field area with identical profiles reduces to the self area") {
  TransverseProfile he11(geometry(), ModeId::HE11(), omega_from_lambda(0.532e-6));
  const double a4 = effective_area_four(he11, he11, he11, he11, OverlapConvention::scalar);
  CHECK(a4 == doctest::Approx(effective_area_single(he11)).epsilon(1e-10));
}

TEST_CASE("vector-overlap area differs from the scalar one in a sub-wavelength core") {
  // The longitudinal field fraction is large here, so the two conventions
  // must not coincide.
  TransverseProfile he11(geometry(), ModeId::HE11(), omega_from_lambda(0.532e-6));
  const double scalar = effective_area_four(he11, he11, he11, he11, OverlapConvention::scalar);
  const double vector =
      effective_area_four(he11, he11, he11, he11, OverlapConvention::full_vector, 2);
  CHECK(vector > 0);
  CHECK(std::abs(vector / scalar - 1.0) > 0.02);
}

TEST_CASE("gamma formulas scale as chi3 omega / (n^2 A_eff)") {
  NonlinearContext nl;
  const double n = 1.46, a_eff = 0.5e-12, omega = omega_from_lambda(0.532e-6);
  const double g = gamma_self(nl, omega, n, a_eff);
  CHECK(g == doctest::Approx(3.0 * nl.chi3 * omega /
                             (4.0 * eps0 * c_light * c_light * n * n * a_eff))
                 .epsilon(1e-14));
  // Doubling chi3 doubles gamma; doubling the area halves it.
  NonlinearContext nl2{2.0 * nl.chi3};
  CHECK(gamma_self(nl2, omega, n, a_eff) == doctest::Approx(2.0 * g).epsilon(1e-14));
  CHECK(gamma_self(nl, omega, n, 2.0 * a_eff) == doctest::Approx(0.5 * g).epsilon(1e-14));
  // Degenerate-frequency four-wave coefficient collapses to the self form.
  CHECK(gamma_fwm(nl, omega, omega, n, n, a_eff) == doctest::Approx(g).epsilon(1e-14));
  CHECK(gamma_pdc(nl, omega, n, a_eff) == doctest::Approx(g).epsilon(1e-14));
}

TEST_CASE("nonlinear phase combinations") {
  CHECK(phi_nl_sfwm(2.0, 3.0, 0.5, 0.25) == doctest::Approx(2.0 * 0.5 + 3.0 * 0.25));
  SfwmGammaSet g{};
  g.g1 = 1.0;
  g.g2 = 1.0;
  // With no cross terms the full expression reduces to the simplified one.
  CHECK(phi_nl_sfwm_full(g, 0.3, 0.7) == doctest::Approx(phi_nl_sfwm(1.0, 1.0, 0.3, 0.7)));
  CHECK(phi_nl_tospdc(5.0, 0.5, 0.5, 0.5, 2.0) == doctest::Approx((5.0 - 3.0) * 2.0));
}

TEST_CASE("process coefficients at the 532 nm pump carrier") {
  NonlinearContext nl;
  const double omega_p = omega_from_lambda(0.532e-6);
  // Outer-branch anchor pair for this radius.
  const double ws0 = omega_from_lambda(0.3285e-6);
  const double wi0 = 2.0 * omega_p - ws0;
  const auto cs = sfwm_coefficients(geometry(), nl, omega_p, ws0, wi0);
  const auto ct = tospdc_coefficients(geometry(), nl, omega_p);
  CHECK(cs.gamma > ct.gamma);  // pair coupling dominates triplet coupling
  CHECK(cs.gamma * 1e3 > 100.0);   // 1/(W km) scale of a sub-micron silica core
  CHECK(cs.gamma * 1e3 < 2000.0);
  CHECK(ct.gamma * 1e3 > 1.0);
  CHECK(ct.gamma * 1e3 < 200.0);
  CHECK(cs.n1 == doctest::Approx(geometry().core.index_at_omega(omega_p)).epsilon(1e-14));
  CHECK(cs.a_eff_four > 0);
  CHECK(ct.a_eff_four > cs.a_eff_four);  // HE12/HE11 mode mismatch
}
