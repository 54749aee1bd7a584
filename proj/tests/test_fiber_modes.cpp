#include <doctest.h>

#include <cmath>

#include "pfs/constants.hpp"
#include "pfs/fiber_modes.hpp"
#include "pfs/quadrature.hpp"

using namespace pfs;

namespace {

FiberGeometry test_geometry() {
  return FiberGeometry(0.395e-6, SellmeierModel::fused_silica());
}

// Transverse-plane integral of A^2 (trapezoid in theta, adaptive radial).
double profile_norm(const TransverseProfile& p) {
  const int n_theta = 64;
  const double a = p.core_radius();
  const double kappa = p.solution().w / a;  // evanescent decay rate
  auto ring = [&](double r) {
    double sum = 0;
    for (int j = 0; j < n_theta; ++j) {
      const double f = p.field(r, j * twopi / n_theta);
      sum += f * f;
    }
    return sum * (twopi / n_theta) * r;
  };
  return adaptive_simpson_rel(ring, 0.0, a, 1e-8) +
         adaptive_simpson_rel(ring, a, a + 40.0 / kappa, 1e-8);
}

}  // namespace

TEST_CASE("guided HE11 effective index sits between cladding and core indices") {
  const auto geom = test_geometry();
  for (double lambda_um : {0.35, 0.532, 0.8, 1.3, 1.596}) {
    const double omega = omega_from_lambda(lambda_um * 1e-6);
    const double n_eff = solve_mode(geom, ModeId::HE11(), omega) * c_light / omega;
    CHECK(n_eff > geom.cladding_index);
    CHECK(n_eff < geom.core.index_at_lambda_um(lambda_um));
  }
}

TEST_CASE("propagation constant grows monotonically with frequency") {
  const auto geom = test_geometry();
  double prev = 0;
  for (double lambda_um : {2.0, 1.5, 1.0, 0.7, 0.5}) {
    const double beta = solve_mode(geom, ModeId::HE11(), omega_from_lambda(lambda_um * 1e-6));
    CHECK(beta > prev);
    prev = beta;
  }
}

TEST_CASE("HE12 exists at the pump wavelength and cuts off in the infrared") {
  const auto geom = test_geometry();
  CHECK_NOTHROW(solve_mode(geom, ModeId::HE12(), omega_from_lambda(0.532e-6)));
  CHECK_THROWS_AS(solve_mode(geom, ModeId::HE12(), omega_from_lambda(1.596e-6)), ModeCutoff);
}

TEST_CASE("only the HE11/HE12 family is accepted") {
  const auto geom = test_geometry();
  CHECK_THROWS_AS(solve_mode(geom, ModeId{2, 1}, omega_from_lambda(0.532e-6)),
                  std::invalid_argument);
  CHECK_THROWS_AS(solve_mode(geom, ModeId{1, 3}, omega_from_lambda(0.532e-6)),
                  std::invalid_argument);
  CHECK_THROWS_AS(FiberGeometry(-1e-7, SellmeierModel::fused_silica()), std::invalid_argument);
}

TEST_CASE("full solution is self-consistent with the scalar solver") {
  const auto geom = test_geometry();
  const double omega = omega_from_lambda(0.8e-6);
  const auto sol = solve_mode_full(geom, ModeId::HE11(), omega);
  CHECK(sol.beta == doctest::Approx(solve_mode(geom, ModeId::HE11(), omega)).epsilon(1e-12));
  CHECK(sol.n_eff == doctest::Approx(sol.beta * c_light / omega).epsilon(1e-12));
  CHECK(sol.u > 0);
  CHECK(sol.w > 0);
}

TEST_CASE("transverse profiles integrate to unit power") {
  const auto geom = test_geometry();
  for (auto mode : {ModeId::HE11(), ModeId::HE12()}) {
    TransverseProfile p(geom, mode, omega_from_lambda(0.532e-6));
    CHECK(profile_norm(p) == doctest::Approx(1.0).epsilon(1e-6));
    const double cf = p.core_fraction();
    CHECK(cf > 0.0);
    CHECK(cf < 1.0);
  }
}

TEST_CASE("long-wavelength HE11 spreads into the cladding") {
  const auto geom = test_geometry();
  TransverseProfile tight(geom, ModeId::HE11(), omega_from_lambda(0.5e-6));
  TransverseProfile loose(geom, ModeId::HE11(), omega_from_lambda(1.596e-6));
  CHECK(loose.core_fraction() < tight.core_fraction());
}

TEST_CASE("dispersion table interpolates the direct solves") {
  const auto geom = test_geometry();
  ModeDispersion table(geom, ModeId::HE11(), omega_from_lambda(2.0e-6),
                       omega_from_lambda(0.4e-6), 200, false);
  for (double lambda_um : {1.7, 1.0, 0.61}) {
    const double omega = omega_from_lambda(lambda_um * 1e-6);
    CHECK(table.beta(omega) ==
          doctest::Approx(solve_mode(geom, ModeId::HE11(), omega)).epsilon(1e-6));
    CHECK(table.k1(omega) > 0);  // normal group delay
  }
  CHECK(table.covers(omega_from_lambda(1.0e-6)));
  CHECK(!table.covers(omega_from_lambda(3.0e-6)));
  CHECK_THROWS_AS(table.beta(omega_from_lambda(3.0e-6)), std::out_of_range);
}

TEST_CASE("parallel and serial table builds agree exactly") {
  const auto geom = test_geometry();
  ModeDispersion serial(geom, ModeId::HE11(), omega_from_lambda(1.8e-6),
                        omega_from_lambda(0.5e-6), 64, false);
  ModeDispersion parallel(geom, ModeId::HE11(), omega_from_lambda(1.8e-6),
                          omega_from_lambda(0.5e-6), 64, true);
  REQUIRE(serial.betas().size() == parallel.betas().size());
  for (size_t k = 0; k < serial.betas().size(); ++k)
    CHECK(serial.betas()[k] == parallel.betas()[k]);
}
