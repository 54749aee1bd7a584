#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <fstream>

#include "fixture.hpp"

using namespace pfs;

TEST_CASE("spectral weights factorize over the photons") {
  const auto& p = fixture::pipeline();
  const double a = p.ws0, b = p.wi0;
  const double w0 = p.omega_p / 3.0;
  CHECK(h2(p.sfwm, a, b) > 0);
  CHECK(h2(p.sfwm, a, b) == doctest::Approx(h2(p.sfwm, b, a)).epsilon(1e-14));
  // h3(r, s, i) = h1(r) h1(s) h1(i) with h1 = sqrt(h2(w, w)).
  const double wr = w0 * 1.01, ws = w0 * 0.995, wi = w0 * 1.002;
  const double h3sq = h3(p.tospdc, wr, ws, wi) * h3(p.tospdc, wr, ws, wi);
  CHECK(h3sq == doctest::Approx(h2(p.tospdc, wr, wr) * h2(p.tospdc, ws, ws) *
                                h2(p.tospdc, wi, wi))
                    .epsilon(1e-12));
}

TEST_CASE("requests are validated before any computation") {
  auto req = fixture::sfwm_request(Regime::pulsed);
  auto bad = req;
  bad.length = 0;
  CHECK_THROWS_AS(run_efficiency(bad), std::invalid_argument);
  bad = req;
  bad.ctx = nullptr;
  CHECK_THROWS_AS(run_efficiency(bad), std::invalid_argument);
  bad = req;
  bad.regime = Regime::cw;  // sigma still nonzero
  CHECK_THROWS_AS(run_efficiency(bad), std::invalid_argument);
  bad = fixture::sfwm_request(Regime::cw);
  bad.pump1.sigma = 1e9;
  CHECK_THROWS_AS(run_efficiency(bad), std::invalid_argument);
  bad = req;
  bad.omega_s0 = 0;
  CHECK_THROWS_AS(run_efficiency(bad), std::invalid_argument);
}

TEST_CASE("result decomposes into prefactor times integral") {
  for (auto regime : {Regime::pulsed, Regime::cw}) {
    const auto rs = run_efficiency(fixture::sfwm_request(regime));
    CHECK(rs.eta > 0);
    CHECK(rs.eta == doctest::Approx(rs.prefactor * rs.integral).epsilon(1e-12));
    CHECK(rs.rel_error_estimate < 0.05);
    CHECK(rs.gamma == doctest::Approx(fixture::pipeline().co_sfwm.gamma).epsilon(1e-14));
    const auto rt = run_efficiency(fixture::tospdc_request(regime));
    CHECK(rt.eta > 0);
    CHECK(rt.eta == doctest::Approx(rt.prefactor * rt.integral).epsilon(1e-12));
    CHECK(rt.rel_error_estimate < 0.05);
  }
}

TEST_CASE("dispatch matches the dedicated entry points") {
  const auto req = fixture::sfwm_request(Regime::pulsed);
  CHECK(run_efficiency(req).eta == doctest::Approx(eta_sfwm_pulsed(req).eta).epsilon(1e-14));
  const auto creq = fixture::tospdc_request(Regime::cw);
  CHECK(run_efficiency(creq).eta == doctest::Approx(eta_tospdc_cw(creq).eta).epsilon(1e-14));
}

TEST_CASE("pair efficiency is linear in average power") {
  auto req = fixture::sfwm_request(Regime::pulsed);
  const double base = eta_sfwm_pulsed(req).eta;
  req.pump1.average_power = req.pump2.average_power = 0.36;
  CHECK(eta_sfwm_pulsed(req).eta / base == doctest::Approx(2.0).epsilon(0.01));
}

TEST_CASE("parameter sweep reruns the baseline per value") {
  auto req = fixture::sfwm_request(Regime::pulsed);
  const auto pts = sweep(req, SweepParameter::power, {0.09, 0.18});
  REQUIRE(pts.size() == 2);
  CHECK(pts[0].value == doctest::Approx(0.09));
  CHECK(pts[1].eta == doctest::Approx(eta_sfwm_pulsed(req).eta).epsilon(1e-12));
  CHECK(pts[1].eta / pts[0].eta == doctest::Approx(2.0).epsilon(0.01));

  const std::string path = "sweep_roundtrip.tmp.csv";
  export_sweep_csv(pts, SweepParameter::power, path);
  std::ifstream in(path);
  std::string header;
  std::getline(in, header);
  CHECK(header == "average_power_w,eta");
  in.close();
  std::remove(path.c_str());
}

TEST_CASE("triplet efficiency is independent of the pulse shape knobs") {
  auto req = fixture::tospdc_request(Regime::pulsed);
  const double base = eta_tospdc_pulsed(req).eta;
  auto other = req;
  other.pump1.average_power = 0.001;
  CHECK(eta_tospdc_pulsed(other).eta / base == doctest::Approx(1.0).epsilon(0.01));
}
