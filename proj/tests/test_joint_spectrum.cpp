#include <doctest.h>

#include <cmath>
#include <complex>
#include <cstdio>
#include <fstream>

#include "fixture.hpp"
#include "pfs/quadrature.hpp"

using namespace pfs;

TEST_CASE("pump envelope squared integrates to one") {
  PumpConfig pump{omega_from_lambda(0.532e-6), 23.5e9, 0.18, 100e6};
  const double norm = gauss_integrate(
      [&](double w) {
        const double a = pump_envelope(w, pump);
        return a * a;
      },
      pump.omega0 - 8.0 * pump.sigma, pump.omega0 + 8.0 * pump.sigma, 96);
  CHECK(norm == doctest::Approx(1.0).epsilon(1e-9));
  PumpConfig cw = pump;
  cw.sigma = 0;
  CHECK_THROWS_AS(pump_envelope(cw.omega0, cw), std::invalid_argument);
}

TEST_CASE("peak power: pulse-train duty cycle vs monochromatic") {
  PumpConfig pump{1e15, 23.5e9, 0.18, 100e6};
  // P_peak = p sigma / (R sqrt(2 pi)) for the Gaussian pulse train.
  CHECK(pump.peak_power() ==
        doctest::Approx(0.18 * 23.5e9 / (100e6 * std::sqrt(twopi))).epsilon(1e-12));
  pump.sigma = 0;
  CHECK(pump.peak_power() == doctest::Approx(0.18).epsilon(1e-15));
  pump.average_power = -1;
  CHECK_THROWS_AS(pump.validate(), std::invalid_argument);
}

TEST_CASE("pair amplitude approaches the monochromatic product form for narrow pumps") {
  const auto& p = fixture::pipeline();
  PumpConfig narrow = p.pulse;
  narrow.sigma = 1e9;
  const double length = 0.01;
  // Detune along the ridge so the sinc factor stays order one.
  const double nu = 5e10;
  const double ws = p.ws0 + nu, wi = p.wi0 + nu;
  const double dk = delta_k_sfwm_cw(p.sfwm, ws, wi, narrow.peak_power(), narrow.peak_power());
  const double arg = 0.5 * length * dk;
  const double sum_det = (ws + wi - 2.0 * narrow.omega0) / (std::sqrt(2.0) * narrow.sigma);
  const double expected = std::exp(-sum_det * sum_det) * std::abs(arg == 0 ? 1.0 : std::sin(arg) / arg);
  const double got = std::abs(jsa_sfwm_bare(p.sfwm, narrow, narrow, length, ws, wi));
  CHECK(got == doctest::Approx(expected).epsilon(1e-3));
}

TEST_CASE("triplet amplitude closed form") {
  const auto& p = fixture::pipeline();
  const double w0 = p.omega_p / 3.0;
  const double wr = w0 + 4e11, ws = w0 - 1e11, wi = w0 - 2e11;
  const double length = 0.01;
  const double dk = delta_k_tospdc(p.tospdc, wr, ws, wi, p.pulse.peak_power());
  const double d = (wr + ws + wi - p.pulse.omega0) / p.pulse.sigma;
  const double arg = 0.5 * length * dk;
  const double expected = std::exp(-d * d) * std::abs(arg == 0 ? 1.0 : std::sin(arg) / arg);
  CHECK(std::abs(jsa_tospdc_bare(p.tospdc, p.pulse, length, wr, ws, wi)) ==
        doctest::Approx(expected).epsilon(1e-12));
  // Normalized variant only differs by the constant Gaussian prefactor.
  const double ratio = std::abs(jsa_tospdc(p.tospdc, p.pulse, length, wr, ws, wi)) /
                       std::abs(jsa_tospdc_bare(p.tospdc, p.pulse, length, wr, ws, wi));
  CHECK(ratio == doctest::Approx(1.0 / std::pow(0.5 * pi * p.pulse.sigma * p.pulse.sigma, 0.25))
                     .epsilon(1e-12));
}

TEST_CASE("rotated coordinates are orthonormal and round-trip") {
  // Pair coordinates.
  double np = 0, nm = 0, ns = 0, ni = 0;
  sfwm_to_rotated(3.7e11, -1.2e11, np, nm);
  CHECK(np * np + nm * nm ==
        doctest::Approx(3.7e11 * 3.7e11 + 1.2e11 * 1.2e11).epsilon(1e-14));
  sfwm_from_rotated(np, nm, ns, ni);
  CHECK(ns == doctest::Approx(3.7e11).epsilon(1e-12));
  CHECK(ni == doctest::Approx(-1.2e11).epsilon(1e-12));
  // Triplet coordinates: norm preservation and round-trip at 1e-12 level.
  const double r0 = 1.7e11, s0 = -3.1e10, i0 = 9.9e9;
  double na = 0, nb = 0, r1 = 0, s1 = 0, i1 = 0;
  tospdc_to_rotated(r0, s0, i0, np, na, nb);
  CHECK(np * np + na * na + nb * nb ==
        doctest::Approx(r0 * r0 + s0 * s0 + i0 * i0).epsilon(1e-14));
  tospdc_from_rotated(np, na, nb, r1, s1, i1);
  CHECK(r1 == doctest::Approx(r0).epsilon(1e-12));
  CHECK(s1 == doctest::Approx(s0).epsilon(1e-12));
  CHECK(i1 == doctest::Approx(i0).epsilon(1e-12));
  // The pump-sum axis is the symmetric direction.
  tospdc_to_rotated(1.0, 1.0, 1.0, np, na, nb);
  CHECK(np == doctest::Approx(std::sqrt(3.0)).epsilon(1e-14));
  CHECK(na == doctest::Approx(0.0).epsilon(1e-14));
  CHECK(nb == doctest::Approx(0.0).epsilon(1e-14));
}

TEST_CASE("full width at half maximum of a sampled Gaussian") {
  const double sigma = 2.0;
  std::vector<double> x(401), y(401);
  for (int k = 0; k <= 400; ++k) {
    x[k] = -10.0 + 0.05 * k;
    y[k] = std::exp(-x[k] * x[k] / (2.0 * sigma * sigma));
  }
  CHECK(fwhm(x, y) == doctest::Approx(2.0 * std::sqrt(2.0 * std::log(2.0)) * sigma).epsilon(1e-4));
  // Profile that never drops below half maximum reports zero width.
  std::vector<double> flat(x.size(), 1.0);
  CHECK(fwhm(x, flat) == 0.0);
  CHECK_THROWS_AS(fwhm({0.0}, {1.0}), std::invalid_argument);
}

TEST_CASE("grid cuts select the expected rows and columns") {
  JointSpectrumGrid g;
  g.kind = ProcessKind::sfwm;
  g.axis1 = {"a", {0.0, 1.0, 2.0}};
  g.axis2 = {"b", {0.0, 10.0}};
  g.values = {1, 2, 3, 4, 5, 6};  // row-major (a, b)
  g.normalized = g.values;
  CHECK(grid_cut(g, 2, 1.0) == std::vector<double>{3, 4});    // row a = 1
  CHECK(grid_cut(g, 1, 10.0) == std::vector<double>{2, 4, 6});  // column b = 10
  CHECK_THROWS_AS(grid_cut(g, 3, 0.0), std::invalid_argument);
}

TEST_CASE("pair grid decays at its boundary and is peak-normalized") {
  const auto& p = fixture::pipeline();
  PumpConfig pump = p.pulse;
  pump.sigma = 0.118e12;
  auto grid = jsi_grid_sfwm(p.sfwm, pump, pump, 0.01, p.ws0, p.wi0, 64);
  REQUIRE(grid.values.size() == 64u * 64u);
  double edge = 0, top = 0;
  const size_t n = 64;
  for (size_t j = 0; j < n; ++j) {
    edge = std::max({edge, grid.normalized[j], grid.normalized[(n - 1) * n + j],
                     grid.normalized[j * n], grid.normalized[j * n + n - 1]});
  }
  for (double v : grid.normalized) top = std::max(top, v);
  CHECK(edge < 1e-4);
  CHECK(top == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(grid.peak_value > 0);
}

TEST_CASE("triplet slices decay at the boundary; serial equals parallel") {
  const auto& p = fixture::pipeline();
  PumpConfig pump = p.pulse;
  pump.sigma = 0.118e12;
  auto serial = jsi_slices_tospdc(p.tospdc, pump, 0.01, 48, 128, 0, 0, false);
  auto parallel = jsi_slices_tospdc(p.tospdc, pump, 0.01, 48, 128, 0, 0, true);
  for (size_t k = 0; k < serial.plane.values.size(); ++k)
    CHECK(serial.plane.values[k] == parallel.plane.values[k]);
  const size_t n = 48;
  double edge = 0;
  for (size_t j = 0; j < n; ++j)
    edge = std::max({edge, serial.plane.normalized[j], serial.plane.normalized[(n - 1) * n + j],
                     serial.plane.normalized[j * n], serial.plane.normalized[j * n + n - 1]});
  CHECK(edge < 1e-4);
  CHECK(serial.profile.is_profile());
  CHECK(serial.profile.normalized.front() < 1e-4);
  CHECK(serial.profile.normalized.back() < 1e-4);
}

TEST_CASE("grid exports round-trip the sampled values") {
  JointSpectrumGrid g;
  g.kind = ProcessKind::tospdc;
  g.fiber_length = 0.01;
  g.axis1 = {"nu_plus", {-1.0, 0.0, 1.0}};
  g.values = {0.25, 1.0, 0.5};
  g.normalized = g.values;
  g.peak_value = 1.0;
  g.transform = "test";
  const std::string csv = "grid_roundtrip.tmp.csv";
  export_grid_csv(g, csv);
  std::ifstream in(csv);
  std::string header;
  std::getline(in, header);
  CHECK(header == "nu_plus_rad_s,jsi_raw,jsi_normalized");
  double a = 0, b = 0, c = 0;
  char comma;
  in >> a >> comma >> b >> comma >> c;
  CHECK(a == doctest::Approx(-1.0));
  CHECK(b == doctest::Approx(0.25));
  in.close();
  std::remove(csv.c_str());
}
