#include <doctest.h>

#include <cmath>

#include "fixture.hpp"

using namespace pfs;

TEST_CASE("degenerate-triplet design radius lands on a true root") {
  const auto& p = fixture::pipeline();
  // The returned radius must null k_HE12(3w) - 3 k_HE11(w) to sub-rad/m level.
  CHECK(std::abs(p.design.residual) < 1.0);
  CHECK(p.design.radius > 0.3e-6);
  CHECK(p.design.radius < 0.5e-6);
  CHECK_THROWS_AS(degenerate_tospdc_radius(p.silica, 1.596e-6, 0.20e-6, 0.21e-6),
                  NoSolutionInBracket);
}

TEST_CASE("SFWM mismatch respects signal/idler exchange and the cw reduction") {
  const auto& p = fixture::pipeline();
  const double ws = p.ws0 + 3e12, wi = p.wi0 - 1e12;
  const double a = delta_k_sfwm(p.sfwm, p.omega_p, ws, wi, 10.0, 10.0);
  const double b = delta_k_sfwm(p.sfwm, p.omega_p, wi, ws, 10.0, 10.0);
  // Exchange reorders the beta cancellation, so only rounding-level slack.
  CHECK(std::abs(a - b) < 1e-5);
  // cw variant pins the pump argument at the energy-conserving half sum.
  CHECK(delta_k_sfwm_cw(p.sfwm, ws, wi, 10.0, 10.0) ==
        doctest::Approx(delta_k_sfwm(p.sfwm, 0.5 * (ws + wi), ws, wi, 10.0, 10.0)).epsilon(1e-12));
  // The nonlinear phase shifts the mismatch linearly in total peak power.
  const double zero_power = delta_k_sfwm(p.sfwm, p.omega_p, ws, wi, 0.0, 0.0);
  CHECK(a - zero_power == doctest::Approx(-p.sfwm.phi_nl_per_watt * 20.0).epsilon(1e-9));
}

TEST_CASE("TOSPDC mismatch is symmetric under any photon exchange") {
  const auto& p = fixture::pipeline();
  const double w0 = p.omega_p / 3.0;
  const double wr = w0 + 2e12, ws = w0 - 3e12, wi = w0 + 1e12;
  const double ref = delta_k_tospdc(p.tospdc, wr, ws, wi, 5.0);
  CHECK(std::abs(delta_k_tospdc(p.tospdc, ws, wr, wi, 5.0) - ref) < 1e-5);
  CHECK(std::abs(delta_k_tospdc(p.tospdc, wi, ws, wr, 5.0) - ref) < 1e-5);
  // Degenerate frequencies at the designed radius are phasematched.
  CHECK(std::abs(delta_k_tospdc(p.tospdc, w0, w0, w0, 0.0)) < 1.0);
}

TEST_CASE("contour points satisfy the mismatch equation") {
  const auto& p = fixture::pipeline();
  ContourOptions opt;
  opt.n_pump_points = 25;
  auto pts = sfwm_contour(p.sfwm, omega_from_lambda(1.2e-6), omega_from_lambda(0.45e-6), 1e-6, opt);
  REQUIRE(!pts.empty());
  for (const auto& pt : pts) {
    CHECK(std::abs(pt.residual) < opt.residual_tol);
    CHECK(pt.detuning > 0);
  }
  // The outer branch is listed before inner for every pump frequency.
  for (size_t k = 1; k < pts.size(); ++k)
    if (pts[k].omega_p == pts[k - 1].omega_p) {
      CHECK(pts[k - 1].branch == ContourBranch::outer);
      CHECK(pts[k].branch == ContourBranch::inner);
      CHECK(pts[k - 1].detuning > pts[k].detuning);
    }
}

TEST_CASE("TOSPDC contour is single-branch with small residuals") {
  const auto& p = fixture::pipeline();
  ContourOptions opt;
  opt.n_pump_points = 15;
  auto pts = tospdc_contour(p.tospdc, omega_from_lambda(1.596e-6), omega_from_lambda(0.56e-6),
                            omega_from_lambda(0.51e-6), 1e-6, opt);
  REQUIRE(!pts.empty());
  for (const auto& pt : pts) {
    CHECK(pt.branch == ContourBranch::single);
    CHECK(std::abs(pt.residual) < opt.residual_tol);
  }
}

TEST_CASE("parallel and serial contours are identical") {
  const auto& p = fixture::pipeline();
  ContourOptions opt;
  opt.n_pump_points = 20;
  opt.parallel = false;
  auto serial =
      sfwm_contour(p.sfwm, omega_from_lambda(1.2e-6), omega_from_lambda(0.45e-6), 1e-6, opt);
  opt.parallel = true;
  auto parallel =
      sfwm_contour(p.sfwm, omega_from_lambda(1.2e-6), omega_from_lambda(0.45e-6), 1e-6, opt);
  REQUIRE(serial.size() == parallel.size());
  for (size_t k = 0; k < serial.size(); ++k) {
    CHECK(serial[k].omega_p == parallel[k].omega_p);
    CHECK(serial[k].detuning == parallel[k].detuning);
    CHECK(serial[k].branch == parallel[k].branch);
  }
}

TEST_CASE("empty pump window yields an empty contour, not an error") {
  const auto& p = fixture::pipeline();
  ContourOptions opt;
  opt.n_pump_points = 5;
  // Far-infrared pump: outside the photon-mode table, no roots possible.
  auto pts = sfwm_contour(p.sfwm, omega_from_lambda(3.15e-6) * 0.999,
                          omega_from_lambda(3.15e-6), 1e-6, opt);
  CHECK(pts.empty());
}
