// Compares the OpenMP-parallel kernels against their serial reference paths:
// dispersion-table construction, phasematching contour tracing and JSI grid
// sampling.  Also asserts that both paths agree bitwise-tolerantly, so the
// parallel schedules stay deterministic.

#include <chrono>
#include <cmath>
#include <cstdio>

#include <omp.h>

#include "pfs/joint_spectrum.hpp"

using namespace pfs;

namespace {

template <typename F>
double time_ms(F&& f) {
  const auto t0 = std::chrono::steady_clock::now();
  f();
  const auto t1 = std::chrono::steady_clock::now();
  return std::chrono::duration<double, std::milli>(t1 - t0).count();
}

void report(const char* name, double serial_ms, double parallel_ms, double max_rel_diff) {
  std::printf("%-28s serial %8.1f ms   parallel %8.1f ms   speedup %5.2fx   max rel diff %.2e\n",
              name, serial_ms, parallel_ms, serial_ms / parallel_ms, max_rel_diff);
}

double grid_diff(const JointSpectrumGrid& a, const JointSpectrumGrid& b) {
  double m = 0;
  for (size_t k = 0; k < a.values.size(); ++k) {
    const double scale = std::max({std::abs(a.values[k]), std::abs(b.values[k]), 1e-300});
    m = std::max(m, std::abs(a.values[k] - b.values[k]) / scale);
  }
  return m;
}

}  // namespace

int main() {
  std::printf("threads: %d\n", omp_get_max_threads());
  auto silica = SellmeierModel::fused_silica();
  const double radius = degenerate_tospdc_radius(silica, 1.596e-6).radius;
  auto geom = std::make_shared<FiberGeometry>(radius, silica);
  NonlinearContext nl;

  // 1. Dispersion table: one mode solve per frequency sample.
  ModeDispersion serial_table(*geom, ModeId::HE11(), omega_from_lambda(3.2e-6),
                              omega_from_lambda(0.26e-6), 8, false);  // warm-up
  double table_diff = 0;
  std::shared_ptr<ModeDispersion> ts, tp;
  const double t_table_s = time_ms([&] {
    ts = std::make_shared<ModeDispersion>(*geom, ModeId::HE11(), omega_from_lambda(3.2e-6),
                                          omega_from_lambda(0.26e-6), 600, false);
  });
  const double t_table_p = time_ms([&] {
    tp = std::make_shared<ModeDispersion>(*geom, ModeId::HE11(), omega_from_lambda(3.2e-6),
                                          omega_from_lambda(0.26e-6), 600, true);
  });
  for (double w = ts->omega_min() * 1.01; w < ts->omega_max() * 0.99; w += ts->omega_max() / 500)
    table_diff = std::max(table_diff, std::abs(ts->beta(w) - tp->beta(w)) / ts->beta(w));
  report("dispersion table (600)", t_table_s, t_table_p, table_diff);

  // 2. Phasematching contour: root scan per pump frequency.
  auto ctx = make_sfwm_context(geom, 0.26, 3.2, 400, 0.532, nl);
  ContourOptions copt;
  copt.n_pump_points = 120;
  std::vector<ContourPoint> cs, cp;
  copt.parallel = false;
  const double t_cont_s = time_ms(
      [&] { cs = sfwm_contour(ctx, omega_from_lambda(1.3e-6), omega_from_lambda(0.4e-6), 1e-6, copt); });
  copt.parallel = true;
  const double t_cont_p = time_ms(
      [&] { cp = sfwm_contour(ctx, omega_from_lambda(1.3e-6), omega_from_lambda(0.4e-6), 1e-6, copt); });
  double cont_diff = cs.size() == cp.size() ? 0.0 : 1.0;
  for (size_t k = 0; cont_diff == 0 && k < cs.size(); ++k)
    cont_diff = std::max(cont_diff, std::abs(cs[k].detuning - cp[k].detuning) /
                                        std::abs(cs[k].detuning));
  report("sfwm contour (120 pumps)", t_cont_s, t_cont_p, cont_diff);

  // 3. JSI grid: one pump-convolution quadrature per pixel.
  const double omega_p = omega_from_lambda(0.532e-6);
  ContourOptions aopt;
  aopt.n_pump_points = 1;
  const PumpConfig pump{omega_p, 0.118e12, 0.18, 100e6};
  const auto anchor = sfwm_contour(ctx, omega_p, omega_p, pump.peak_power(), aopt).front();
  const double ws0 = omega_p + anchor.detuning, wi0 = omega_p - anchor.detuning;
  JointSpectrumGrid gs, gp;
  const double t_jsi_s =
      time_ms([&] { gs = jsi_grid_sfwm(ctx, pump, pump, 0.01, ws0, wi0, 96, 0, 0, false); });
  const double t_jsi_p =
      time_ms([&] { gp = jsi_grid_sfwm(ctx, pump, pump, 0.01, ws0, wi0, 96, 0, 0, true); });
  report("sfwm jsi grid (96x96)", t_jsi_s, t_jsi_p, grid_diff(gs, gp));

  auto tctx = make_tospdc_context(geom, 1.2, 2.2, 300, 0.50, 0.57, 150, 0.532, nl);
  TospdcSlices ss, sp;
  const double t_tsl_s =
      time_ms([&] { ss = jsi_slices_tospdc(tctx, pump, 0.01, 96, 256, 0, 0, false); });
  const double t_tsl_p =
      time_ms([&] { sp = jsi_slices_tospdc(tctx, pump, 0.01, 96, 256, 0, 0, true); });
  report("tospdc slices (96x96)", t_tsl_s, t_tsl_p,
         std::max(grid_diff(ss.plane, sp.plane), grid_diff(ss.profile, sp.profile)));
  return 0;
}
