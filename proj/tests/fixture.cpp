#include "fixture.hpp"

#include <chrono>

namespace fixture {

using namespace pfs;

namespace {

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

}  // namespace

const Pipeline& pipeline() {
  static const Pipeline p = [] {
    Pipeline q;
    auto t0 = std::chrono::steady_clock::now();
    q.design = degenerate_tospdc_radius(q.silica, 1.596e-6);
    q.design_seconds = seconds_since(t0);

    q.geom = std::make_shared<FiberGeometry>(q.design.radius, q.silica);
    NonlinearContext nl;
    q.omega_p = omega_from_lambda(0.532e-6);
    q.sfwm = make_sfwm_context(q.geom, 0.26, 3.2, 400, 0.532, nl);
    q.tospdc = make_tospdc_context(q.geom, 1.2, 2.2, 300, 0.50, 0.57, 150, 0.532, nl);

    q.pulse = PumpConfig{q.omega_p, 23.5e9, 0.18, 100e6};
    t0 = std::chrono::steady_clock::now();
    ContourOptions opt;
    opt.n_pump_points = 1;
    auto pts = sfwm_contour(q.sfwm, q.omega_p, q.omega_p, q.pulse.peak_power(), opt);
    if (pts.empty()) throw std::runtime_error("fixture: no phasematched anchor at 532 nm");
    q.ws0 = q.omega_p + pts.front().detuning;
    q.wi0 = q.omega_p - pts.front().detuning;
    q.anchor_seconds = seconds_since(t0);

    q.co_sfwm = sfwm_coefficients(*q.geom, nl, q.omega_p, q.ws0, q.wi0);
    q.co_tospdc = tospdc_coefficients(*q.geom, nl, q.omega_p);
    return q;
  }();
  return p;
}

EfficiencyRequest sfwm_request(Regime regime) {
  const Pipeline& p = pipeline();
  EfficiencyRequest req;
  req.ctx = &p.sfwm;
  req.coefficients = p.co_sfwm;
  req.pump1 = req.pump2 = p.pulse;
  if (regime == Regime::cw) req.pump1.sigma = req.pump2.sigma = 0;
  req.length = 0.01;
  req.regime = regime;
  req.omega_s0 = p.ws0;
  req.omega_i0 = p.wi0;
  return req;
}

EfficiencyRequest tospdc_request(Regime regime) {
  const Pipeline& p = pipeline();
  EfficiencyRequest req;
  req.ctx = &p.tospdc;
  req.coefficients = p.co_tospdc;
  req.pump1 = p.pulse;
  if (regime == Regime::cw) req.pump1.sigma = 0;
  req.length = 0.01;
  req.regime = regime;
  return req;
}

}  // namespace fixture
