#include "pfs/phasematching.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>

#include "pfs/constants.hpp"

namespace pfs {

namespace {

// Bisect f on a sign-change bracket until the residual drops below tol (or the
// bracket collapses).  Returns the midpoint.
template <typename F>
double bisect_root(F&& f, double a, double b, double fa, double tol) {
  double mid = 0.5 * (a + b);
  for (int iter = 0; iter < 200; ++iter) {
    mid = 0.5 * (a + b);
    const double fm = f(mid);
    if (std::abs(fm) < tol || (b - a) < 1e-6 * std::abs(mid) * 1e-9) break;
    if (fa * fm <= 0) {
      b = mid;
    } else {
      a = mid;
      fa = fm;
    }
  }
  return mid;
}

}  // namespace

ProcessContext make_sfwm_context(std::shared_ptr<const FiberGeometry> geometry, double lambda_min_um,
                                 double lambda_max_um, int n_samples, double pump_lambda_um,
                                 const NonlinearContext& nl, bool parallel) {
  ProcessContext ctx;
  ctx.kind = ProcessKind::sfwm;
  ctx.geometry = geometry;
  auto table = std::make_shared<ModeDispersion>(*geometry, ModeId::HE11(),
                                                omega_from_lambda(lambda_max_um * 1e-6),
                                                omega_from_lambda(lambda_min_um * 1e-6), n_samples,
                                                parallel);
  ctx.photon_mode = table;
  ctx.pump_mode = table;
  const double omega_p = omega_from_lambda(pump_lambda_um * 1e-6);
  TransverseProfile pump_profile(*geometry, ModeId::HE11(), omega_p);
  const double gamma1 = gamma_self(nl, omega_p, geometry->core.index_at_omega(omega_p),
                                   effective_area_single(pump_profile));
  ctx.phi_nl_per_watt = gamma1;  // per pump field; Phi_NL = gamma1 (P1 + P2)
  return ctx;
}

ProcessContext make_tospdc_context(std::shared_ptr<const FiberGeometry> geometry,
                                   double lambda_min_um, double lambda_max_um, int n_samples,
                                   double pump_lambda_min_um, double pump_lambda_max_um,
                                   int n_pump_samples, double pump_lambda_um,
                                   const NonlinearContext& nl, bool parallel) {
  ProcessContext ctx;
  ctx.kind = ProcessKind::tospdc;
  ctx.geometry = geometry;
  ctx.photon_mode = std::make_shared<ModeDispersion>(*geometry, ModeId::HE11(),
                                                     omega_from_lambda(lambda_max_um * 1e-6),
                                                     omega_from_lambda(lambda_min_um * 1e-6),
                                                     n_samples, parallel);
  ctx.pump_mode = std::make_shared<ModeDispersion>(*geometry, ModeId::HE12(),
                                                   omega_from_lambda(pump_lambda_max_um * 1e-6),
                                                   omega_from_lambda(pump_lambda_min_um * 1e-6),
                                                   n_pump_samples, parallel);
  const double omega_p = omega_from_lambda(pump_lambda_um * 1e-6);
  const double omega_0 = omega_p / 3.0;
  TransverseProfile pump_profile(*geometry, ModeId::HE12(), omega_p);
  TransverseProfile triplet_profile(*geometry, ModeId::HE11(), omega_0);
  const double n_p = geometry->core.index_at_omega(omega_p);
  const double n_t = geometry->core.index_at_omega(omega_0);
  const double gamma_p = gamma_self(nl, omega_p, n_p, effective_area_single(pump_profile));
  const double gamma_mp =
      gamma_cross(nl, omega_0, n_t, n_p, effective_area_two_mode(triplet_profile, pump_profile));
  ctx.phi_nl_per_watt = gamma_p - 2.0 * 3.0 * gamma_mp;  // bracket of the TOSPDC mismatch
  return ctx;
}

double delta_k_sfwm(const ProcessContext& ctx, double omega, double omega_s, double omega_i,
                    double p1_peak, double p2_peak) {
  const double phi_nl = ctx.phi_nl_per_watt * (p1_peak + p2_peak);
  return ctx.pump_mode->beta(omega) + ctx.pump_mode->beta(omega_s + omega_i - omega) -
         ctx.photon_mode->beta(omega_s) - ctx.photon_mode->beta(omega_i) - phi_nl;
}

double delta_k_sfwm_cw(const ProcessContext& ctx, double omega_s, double omega_i, double p1,
                       double p2) {
  const double half_sum = 0.5 * (omega_s + omega_i);  // degenerate pumps
  return delta_k_sfwm(ctx, half_sum, omega_s, omega_i, p1, p2);
}

double delta_k_tospdc(const ProcessContext& ctx, double omega_r, double omega_s, double omega_i,
                      double p_peak) {
  return ctx.pump_mode->beta(omega_r + omega_s + omega_i) - ctx.photon_mode->beta(omega_r) -
         ctx.photon_mode->beta(omega_s) - ctx.photon_mode->beta(omega_i) +
         ctx.phi_nl_per_watt * p_peak;
}

namespace {

// Scan detunings in [d_min, d_max] for roots of f and refine each bracket.
template <typename F>
std::vector<double> detuning_roots(F&& f, double d_min, double d_max, int n_scan, double tol) {
  std::vector<double> roots;
  if (!(d_max > d_min) || n_scan < 2) return roots;
  const double h = (d_max - d_min) / n_scan;
  double x_prev = d_min, f_prev = f(d_min);
  for (int i = 1; i <= n_scan; ++i) {
    const double x = d_min + i * h;
    const double fx = f(x);
    if (std::isfinite(f_prev) && std::isfinite(fx) && f_prev * fx < 0)
      roots.push_back(bisect_root(f, x_prev, x, f_prev, tol));
    x_prev = x;
    f_prev = fx;
  }
  return roots;
}

}  // namespace

std::vector<ContourPoint> sfwm_contour(const ProcessContext& ctx, double omega_p_min,
                                       double omega_p_max, double peak_power,
                                       const ContourOptions& opt) {
  const double omega_lo = ctx.photon_mode->omega_min(), omega_hi = ctx.photon_mode->omega_max();
  std::vector<std::vector<ContourPoint>> per_pump(opt.n_pump_points);

#pragma omp parallel for schedule(dynamic) if (opt.parallel)
  for (int j = 0; j < opt.n_pump_points; ++j) {
    const double omega_p =
        omega_p_min + (omega_p_max - omega_p_min) * j / std::max(1, opt.n_pump_points - 1);
    if (omega_p <= omega_lo || omega_p >= omega_hi) continue;
    const double d_max = std::min(omega_p - omega_lo, omega_hi - omega_p) * (1.0 - 1e-12);
    auto mismatch = [&](double d) {
      return delta_k_sfwm(ctx, omega_p, omega_p + d, omega_p - d, peak_power, peak_power);
    };
    auto roots = detuning_roots(mismatch, opt.min_detuning, d_max, opt.n_detuning_scan,
                                opt.residual_tol);
    std::sort(roots.rbegin(), roots.rend());  // outer first
    for (size_t k = 0; k < roots.size(); ++k) {
      ContourPoint pt;
      pt.omega_p = omega_p;
      pt.detuning = roots[k];
      pt.branch = (k == 0) ? ContourBranch::outer : ContourBranch::inner;
      pt.residual = std::abs(mismatch(roots[k]));
      per_pump[j].push_back(pt);
    }
  }
  std::vector<ContourPoint> out;
  for (auto& v : per_pump) out.insert(out.end(), v.begin(), v.end());
  return out;
}

std::vector<ContourPoint> tospdc_contour(const ProcessContext& ctx, double omega_i,
                                         double omega_p_min, double omega_p_max, double peak_power,
                                         const ContourOptions& opt) {
  const double omega_lo = ctx.photon_mode->omega_min(), omega_hi = ctx.photon_mode->omega_max();
  std::vector<std::vector<ContourPoint>> per_pump(opt.n_pump_points);

#pragma omp parallel for schedule(dynamic) if (opt.parallel)
  for (int j = 0; j < opt.n_pump_points; ++j) {
    const double omega_p =
        omega_p_min + (omega_p_max - omega_p_min) * j / std::max(1, opt.n_pump_points - 1);
    if (!ctx.pump_mode->covers(omega_p)) continue;
    const double center = 0.5 * (omega_p - omega_i);
    if (center <= omega_lo || center >= omega_hi) continue;
    const double d_max = std::min(center - omega_lo, omega_hi - center) * (1.0 - 1e-12);
    auto mismatch = [&](double d) {
      return delta_k_tospdc(ctx, center + d, center - d, omega_i, peak_power);
    };
    // The mismatch is even in the detuning; scanning d >= 0 finds each +/- pair once.
    auto roots = detuning_roots(mismatch, 1e9, d_max, opt.n_detuning_scan, opt.residual_tol);
    for (double d : roots) {
      ContourPoint pt;
      pt.omega_p = omega_p;
      pt.detuning = d;
      pt.branch = ContourBranch::single;
      pt.residual = std::abs(mismatch(d));
      per_pump[j].push_back(pt);
    }
  }
  std::vector<ContourPoint> out;
  for (auto& v : per_pump) out.insert(out.end(), v.begin(), v.end());
  return out;
}

DesignResult degenerate_tospdc_radius(const SellmeierModel& core, double lambda_degenerate_m,
                                      double r_min, double r_max, double rel_tol) {
  const double omega = omega_from_lambda(lambda_degenerate_m);
  const double omega_p = 3.0 * omega;
  // Validity check for both wavelengths up front.
  core.index_at_omega(omega);
  core.index_at_omega(omega_p);

  auto residual = [&](double r) -> std::optional<double> {
    FiberGeometry geom(r, core);
    try {
      return solve_mode(geom, ModeId::HE12(), omega_p) - 3.0 * solve_mode(geom, ModeId::HE11(), omega);
    } catch (const ModeCutoff&) {
      return std::nullopt;
    }
  };

  // Coarse scan for a sign change; HE12 may be below cutoff at small radii.
  const int n_scan = 48;
  double a = 0, b = 0, fa = 0, fb = 0;
  bool have_prev = false;
  double x_prev = 0, f_prev = 0;
  for (int i = 0; i <= n_scan; ++i) {
    const double r = r_min + (r_max - r_min) * i / n_scan;
    const auto f = residual(r);
    if (!f) {
      have_prev = false;
      continue;
    }
    if (have_prev && f_prev * (*f) < 0) {
      a = x_prev;
      b = r;
      fa = f_prev;
      fb = *f;
      break;
    }
    have_prev = true;
    x_prev = r;
    f_prev = *f;
  }
  if (b == 0)
    throw NoSolutionInBracket("degenerate_tospdc_radius: no sign change of k_p(3w)-3k(w) in [" +
                              std::to_string(r_min * 1e6) + ", " + std::to_string(r_max * 1e6) +
                              "] um");
  (void)fb;
  while ((b - a) > rel_tol * a) {
    const double mid = 0.5 * (a + b);
    const auto fm = residual(mid);
    if (!fm) throw ConvergenceFailure("degenerate_tospdc_radius: mode lost inside bracket");
    if (fa * (*fm) <= 0) {
      b = mid;
    } else {
      a = mid;
      fa = *fm;
    }
  }
  DesignResult res;
  res.radius = 0.5 * (a + b);
  res.residual = residual(res.radius).value_or(std::numeric_limits<double>::quiet_NaN());
  return res;
}

void export_contour_csv(const std::vector<ContourPoint>& points, ProcessKind kind,
                        double omega_i_fixed, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("export_contour_csv: cannot open " + path);
  out.precision(8);  // 9 significant digits in scientific notation
  out << std::scientific;
  if (kind == ProcessKind::sfwm) {
    out << "omega_p_rad_s,lambda_p_um,branch,detuning_rad_s,lambda_s_um,lambda_i_um,residual_rad_m\n";
    for (const auto& pt : points) {
      out << pt.omega_p << ',' << lambda_from_omega(pt.omega_p) * 1e6 << ','
          << (pt.branch == ContourBranch::outer ? "outer" : "inner") << ',' << pt.detuning << ','
          << lambda_from_omega(pt.omega_p + pt.detuning) * 1e6 << ','
          << lambda_from_omega(pt.omega_p - pt.detuning) * 1e6 << ',' << pt.residual << '\n';
    }
  } else {
    out << "omega_p_rad_s,lambda_p_um,branch,detuning_rad_s,lambda_r_um,lambda_s_um,lambda_i_um,"
           "residual_rad_m\n";
    for (const auto& pt : points) {
      const double center = 0.5 * (pt.omega_p - omega_i_fixed);
      out << pt.omega_p << ',' << lambda_from_omega(pt.omega_p) * 1e6 << ",single," << pt.detuning
          << ',' << lambda_from_omega(center + pt.detuning) * 1e6 << ','
          << lambda_from_omega(center - pt.detuning) * 1e6 << ','
          << lambda_from_omega(omega_i_fixed) * 1e6 << ',' << pt.residual << '\n';
    }
  }
}

}  // namespace pfs
