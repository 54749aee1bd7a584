#include "pfs/joint_spectrum.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <stdexcept>

#include <json.hpp>

#include "pfs/constants.hpp"
#include "pfs/quadrature.hpp"

namespace pfs {

namespace {

double sinc(double x) { return x == 0 ? 1.0 : std::sin(x) / x; }

std::complex<double> phase_sinc(double half_arg) {
  return sinc(half_arg) * std::exp(std::complex<double>(0.0, half_arg));
}

// TOSPDC rotation matrix rows (orthogonal; inverse = transpose).
constexpr double inv_sqrt3 = 0.57735026918962576451;
const double t_rows[3][3] = {
    {inv_sqrt3, inv_sqrt3, inv_sqrt3},
    {0.5 * (1.0 - inv_sqrt3), 0.5 * (-1.0 - inv_sqrt3), inv_sqrt3},
    {0.5 * (1.0 + inv_sqrt3), 0.5 * (-1.0 + inv_sqrt3), -inv_sqrt3},
};

}  // namespace

double PumpConfig::peak_power() const {
  if (sigma <= 0) return average_power;
  return average_power * sigma / (rep_rate * std::sqrt(twopi));
}

void PumpConfig::validate() const {
  if (!(omega0 > 0)) throw std::invalid_argument("PumpConfig: carrier frequency must be positive");
  if (sigma < 0) throw std::invalid_argument("PumpConfig: bandwidth must be nonnegative");
  if (!(average_power > 0)) throw std::invalid_argument("PumpConfig: average power must be positive");
  if (sigma > 0 && !(rep_rate > 0))
    throw std::invalid_argument("PumpConfig: pulsed pump requires a positive repetition rate");
}

double pump_envelope(double omega, const PumpConfig& pump) {
  if (!(pump.sigma > 0))
    throw std::invalid_argument("pump_envelope: sigma must be positive (monochromatic pump has "
                                "no spectral density)");
  const double d = (omega - pump.omega0) / pump.sigma;
  return std::pow(2.0, 0.25) / (std::pow(pi, 0.25) * std::sqrt(pump.sigma)) * std::exp(-d * d);
}

std::complex<double> jsa_sfwm_bare(const ProcessContext& ctx, const PumpConfig& pump1,
                                   const PumpConfig& pump2, double length, double omega_s,
                                   double omega_i) {
  if (!(pump1.sigma > 0) || !(pump2.sigma > 0))
    throw std::invalid_argument("jsa_sfwm: pulsed JSA requires sigma > 0 for both pumps");
  const double p1 = pump1.peak_power(), p2 = pump2.peak_power();
  const double omega_sum = omega_s + omega_i;
  // Product of the two Gaussians completes the square around mu with scale s.
  const double inv1 = 1.0 / (pump1.sigma * pump1.sigma), inv2 = 1.0 / (pump2.sigma * pump2.sigma);
  const double a = inv1 + inv2;
  const double mu = (pump1.omega0 * inv1 + (omega_sum - pump2.omega0) * inv2) / a;
  const double s = 1.0 / std::sqrt(a);
  const double lo = mu - 6.0 * s, hi = mu + 6.0 * s;

  auto integrand = [&](double w) -> std::complex<double> {
    const double d1 = (w - pump1.omega0) / pump1.sigma;
    const double d2 = (omega_sum - w - pump2.omega0) / pump2.sigma;
    const double env = std::exp(-d1 * d1 - d2 * d2);
    if (env < 1e-14) return {0.0, 0.0};
    const double dk = delta_k_sfwm(ctx, w, omega_s, omega_i, p1, p2);
    return env * phase_sinc(0.5 * length * dk);
  };

  auto gauss_eval = [&](int n) {
    const auto& rule = gauss_legendre(n);
    std::complex<double> acc{0.0, 0.0};
    const double c = 0.5 * (lo + hi), h = 0.5 * (hi - lo);
    for (size_t k = 0; k < rule.x.size(); ++k) acc += rule.w[k] * integrand(c + h * rule.x[k]);
    return h * acc;
  };

  std::complex<double> prev = gauss_eval(24);
  for (int n = 48; n <= 384; n *= 2) {
    const std::complex<double> cur = gauss_eval(n);
    const double scale = std::abs(cur);
    if (std::abs(cur - prev) <= 1e-4 * std::max(scale, 1e-300)) return cur;
    prev = cur;
  }
  return prev;
}

std::complex<double> jsa_sfwm(const ProcessContext& ctx, const PumpConfig& pump1,
                              const PumpConfig& pump2, double length, double omega_s,
                              double omega_i) {
  return jsa_sfwm_bare(ctx, pump1, pump2, length, omega_s, omega_i) /
         std::sqrt(0.5 * pi * pump1.sigma * pump2.sigma);
}

std::complex<double> jsa_tospdc_bare(const ProcessContext& ctx, const PumpConfig& pump,
                                     double length, double omega_r, double omega_s,
                                     double omega_i) {
  if (!(pump.sigma > 0)) throw std::invalid_argument("jsa_tospdc: pulsed JSA requires sigma > 0");
  const double d = (omega_r + omega_s + omega_i - pump.omega0) / pump.sigma;
  const double env = std::exp(-d * d);
  const double dk = delta_k_tospdc(ctx, omega_r, omega_s, omega_i, pump.peak_power());
  return env * phase_sinc(0.5 * length * dk);
}

std::complex<double> jsa_tospdc(const ProcessContext& ctx, const PumpConfig& pump, double length,
                                double omega_r, double omega_s, double omega_i) {
  return jsa_tospdc_bare(ctx, pump, length, omega_r, omega_s, omega_i) /
         std::pow(0.5 * pi * pump.sigma * pump.sigma, 0.25);
}

void sfwm_to_rotated(double nu_s, double nu_i, double& nu_plus, double& nu_minus) {
  const double r = 1.0 / std::sqrt(2.0);
  nu_plus = r * (nu_s + nu_i);
  nu_minus = r * (nu_s - nu_i);
}

void sfwm_from_rotated(double nu_plus, double nu_minus, double& nu_s, double& nu_i) {
  const double r = 1.0 / std::sqrt(2.0);
  nu_s = r * (nu_plus + nu_minus);
  nu_i = r * (nu_plus - nu_minus);
}

void tospdc_to_rotated(double nu_r, double nu_s, double nu_i, double& nu_plus, double& nu_a,
                       double& nu_b) {
  const double v[3] = {nu_r, nu_s, nu_i};
  double out[3];
  for (int k = 0; k < 3; ++k)
    out[k] = t_rows[k][0] * v[0] + t_rows[k][1] * v[1] + t_rows[k][2] * v[2];
  nu_plus = out[0];
  nu_a = out[1];
  nu_b = out[2];
}

void tospdc_from_rotated(double nu_plus, double nu_a, double nu_b, double& nu_r, double& nu_s,
                         double& nu_i) {
  const double v[3] = {nu_plus, nu_a, nu_b};
  double out[3];
  for (int k = 0; k < 3; ++k)
    out[k] = t_rows[0][k] * v[0] + t_rows[1][k] * v[1] + t_rows[2][k] * v[2];
  nu_r = out[0];
  nu_s = out[1];
  nu_i = out[2];
}

namespace {

std::vector<double> linspace(double lo, double hi, int n) {
  std::vector<double> x(n);
  for (int k = 0; k < n; ++k) x[k] = lo + (hi - lo) * k / (n - 1);
  return x;
}

void finalize_grid(JointSpectrumGrid& grid) {
  grid.peak_value = *std::max_element(grid.values.begin(), grid.values.end());
  grid.normalized.resize(grid.values.size());
  const double inv = grid.peak_value > 0 ? 1.0 / grid.peak_value : 0.0;
  for (size_t k = 0; k < grid.values.size(); ++k) grid.normalized[k] = grid.values[k] * inv;
}

// First detuning at which the sinc argument |dk| L / 2 reaches `arg` along
// the given direction, found by outward scanning with linear interpolation on
// the last step.  With arg = 100 the sinc^2 factor is bounded by 1 / arg^2 =
// 1e-4, so a grid edge placed there sits below 1e-4 of the peak.
template <typename F>
double sinc_arg_boundary(F&& abs_dk, double length, double d_max, double arg) {
  const int n = 1600;
  const double target = 2.0 * arg / length;
  double prev = abs_dk(0.0);
  for (int k = 1; k <= n; ++k) {
    const double d = d_max * k / n;
    const double cur = abs_dk(d);
    if (cur >= target) {
      const double d_prev = d_max * (k - 1) / n;
      const double t = (target - prev) / std::max(cur - prev, 1e-300);
      return d_prev + t * (d - d_prev);
    }
    prev = cur;
  }
  return d_max;  // mismatch stays inside the first lobe over the whole table
}

}  // namespace

JointSpectrumGrid jsi_grid_sfwm(const ProcessContext& ctx, const PumpConfig& pump1,
                                const PumpConfig& pump2, double length, double omega_s0,
                                double omega_i0, int n, double half_plus, double half_minus,
                                bool parallel) {
  if (n < 2) throw std::invalid_argument("jsi_grid_sfwm: grid needs at least 2 points per axis");
  const double sigma_sum =
      std::sqrt(pump1.sigma * pump1.sigma + pump2.sigma * pump2.sigma);
  if (half_plus <= 0) half_plus = 4.0 * sigma_sum / std::sqrt(2.0);
  const double p1 = pump1.peak_power(), p2 = pump2.peak_power();
  if (half_minus <= 0) {
    const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
    const double d_cap =
        std::min(ctx.photon_mode->omega_max() - omega_s0, omega_i0 - ctx.photon_mode->omega_min()) /
        inv_sqrt2 * (1.0 - 1e-9);
    auto abs_dk = [&](double nm) {
      return std::abs(delta_k_sfwm_cw(ctx, omega_s0 + inv_sqrt2 * nm, omega_i0 - inv_sqrt2 * nm,
                                      p1, p2));
    };
    half_minus = std::min(sinc_arg_boundary(abs_dk, length, d_cap, 100.0), d_cap);
  }

  JointSpectrumGrid grid;
  grid.kind = ProcessKind::sfwm;
  grid.fiber_length = length;
  grid.anchor_omega_s = omega_s0;
  grid.anchor_omega_i = omega_i0;
  grid.transform = "nu_plus=(nu_s+nu_i)/sqrt2, nu_minus=(nu_s-nu_i)/sqrt2";
  grid.axis1 = {"nu_plus", linspace(-half_plus, half_plus, n)};
  grid.axis2 = {"nu_minus", linspace(-half_minus, half_minus, n)};
  grid.values.assign(static_cast<size_t>(n) * n, 0.0);

#pragma omp parallel for collapse(2) schedule(dynamic) if (parallel)
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      double nu_s, nu_i;
      sfwm_from_rotated(grid.axis1.values[i], grid.axis2.values[j], nu_s, nu_i);
      const auto f = jsa_sfwm(ctx, pump1, pump2, length, omega_s0 + nu_s, omega_i0 + nu_i);
      grid.values[static_cast<size_t>(i) * n + j] = std::norm(f);
    }
  finalize_grid(grid);
  return grid;
}

TospdcSlices jsi_slices_tospdc(const ProcessContext& ctx, const PumpConfig& pump, double length,
                               int n_grid, int n_profile, double half_plus, double half_perp,
                               bool parallel) {
  const double omega_0 = pump.omega0 / 3.0;
  if (half_plus <= 0) half_plus = 4.0 * pump.sigma / std::sqrt(3.0);
  const double p = pump.peak_power();
  if (half_perp <= 0) {
    const double d_cap = (ctx.photon_mode->omega_max() - omega_0) * (1.0 - 1e-9);
    auto abs_dk = [&](double na, double nb) {
      double nr, ns, ni;
      tospdc_from_rotated(0.0, na, nb, nr, ns, ni);
      return std::abs(delta_k_tospdc(ctx, omega_0 + nr, omega_0 + ns, omega_0 + ni, p));
    };
    // The mismatch curvature differs slightly between nu_a and nu_b; the
    // square window takes the larger of the two boundaries, with margin so the
    // weaker-curvature edge still clears the 1e-4 decay level.
    const double ha = sinc_arg_boundary([&](double d) { return abs_dk(d, 0.0); }, length, d_cap,
                                        110.0);
    const double hb = sinc_arg_boundary([&](double d) { return abs_dk(0.0, d); }, length, d_cap,
                                        110.0);
    half_perp = std::min(std::max(ha, hb), d_cap);
  }

  TospdcSlices out;
  auto& plane = out.plane;
  plane.kind = ProcessKind::tospdc;
  plane.fiber_length = length;
  plane.anchor_omega_r = plane.anchor_omega_s = plane.anchor_omega_i = omega_0;
  plane.transform =
      "orthogonal (nu_plus, nu_a, nu_b) from detunings (nu_r, nu_s, nu_i); slice nu_plus=0";
  plane.axis1 = {"nu_a", linspace(-half_perp, half_perp, n_grid)};
  plane.axis2 = {"nu_b", linspace(-half_perp, half_perp, n_grid)};
  plane.values.assign(static_cast<size_t>(n_grid) * n_grid, 0.0);

#pragma omp parallel for collapse(2) schedule(dynamic) if (parallel)
  for (int i = 0; i < n_grid; ++i)
    for (int j = 0; j < n_grid; ++j) {
      double nr, ns, ni;
      tospdc_from_rotated(0.0, plane.axis1.values[i], plane.axis2.values[j], nr, ns, ni);
      const auto g = jsa_tospdc(ctx, pump, length, omega_0 + nr, omega_0 + ns, omega_0 + ni);
      plane.values[static_cast<size_t>(i) * n_grid + j] = std::norm(g);
    }
  finalize_grid(plane);

  auto& prof = out.profile;
  prof.kind = ProcessKind::tospdc;
  prof.fiber_length = length;
  prof.anchor_omega_r = prof.anchor_omega_s = prof.anchor_omega_i = omega_0;
  prof.transform =
      "orthogonal (nu_plus, nu_a, nu_b) from detunings (nu_r, nu_s, nu_i); cut nu_a=nu_b=0";
  prof.axis1 = {"nu_plus", linspace(-half_plus, half_plus, n_profile)};
  prof.values.assign(n_profile, 0.0);

#pragma omp parallel for schedule(dynamic) if (parallel)
  for (int i = 0; i < n_profile; ++i) {
    double nr, ns, ni;
    tospdc_from_rotated(prof.axis1.values[i], 0.0, 0.0, nr, ns, ni);
    const auto g = jsa_tospdc(ctx, pump, length, omega_0 + nr, omega_0 + ns, omega_0 + ni);
    prof.values[i] = std::norm(g);
  }
  finalize_grid(prof);
  return out;
}

double fwhm(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2)
    throw std::invalid_argument("fwhm: need matching x/y with at least 2 samples");
  const auto it = std::max_element(y.begin(), y.end());
  const double half = 0.5 * *it;
  const size_t peak = static_cast<size_t>(it - y.begin());
  double left = x.front(), right = x.back();
  bool found_left = false, found_right = false;
  for (size_t k = peak; k-- > 0;) {
    if (y[k] < half) {
      const double t = (half - y[k]) / (y[k + 1] - y[k]);
      left = x[k] + t * (x[k + 1] - x[k]);
      found_left = true;
      break;
    }
  }
  for (size_t k = peak + 1; k < y.size(); ++k) {
    if (y[k] < half) {
      const double t = (half - y[k - 1]) / (y[k] - y[k - 1]);
      right = x[k - 1] + t * (x[k] - x[k - 1]);
      found_right = true;
      break;
    }
  }
  if (!found_left || !found_right) return 0.0;
  return right - left;
}

std::vector<double> grid_cut(const JointSpectrumGrid& grid, int along_axis, double at) {
  if (grid.is_profile()) {
    if (along_axis != 1) throw std::invalid_argument("grid_cut: profile only has axis 1");
    return grid.values;
  }
  const auto& fixed = (along_axis == 1) ? grid.axis2.values : grid.axis1.values;
  size_t idx = 0;
  double best = std::numeric_limits<double>::infinity();
  for (size_t k = 0; k < fixed.size(); ++k) {
    const double d = std::abs(fixed[k] - at);
    if (d < best) {
      best = d;
      idx = k;
    }
  }
  const size_t n2 = grid.axis2.values.size();
  std::vector<double> cut;
  if (along_axis == 1) {
    cut.resize(grid.axis1.values.size());
    for (size_t i = 0; i < cut.size(); ++i) cut[i] = grid.values[i * n2 + idx];
  } else if (along_axis == 2) {
    cut.assign(grid.values.begin() + idx * n2, grid.values.begin() + (idx + 1) * n2);
  } else {
    throw std::invalid_argument("grid_cut: axis must be 1 or 2");
  }
  return cut;
}

void export_grid_csv(const JointSpectrumGrid& grid, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("export_grid_csv: cannot open " + path);
  out.precision(8);  // 9 significant digits in scientific notation
  out << std::scientific;
  if (grid.is_profile()) {
    out << grid.axis1.label << "_rad_s,jsi_raw,jsi_normalized\n";
    for (size_t i = 0; i < grid.axis1.values.size(); ++i)
      out << grid.axis1.values[i] << ',' << grid.values[i] << ',' << grid.normalized[i] << '\n';
    return;
  }
  out << grid.axis1.label << "_rad_s," << grid.axis2.label << "_rad_s,jsi_raw,jsi_normalized\n";
  const size_t n2 = grid.axis2.values.size();
  for (size_t i = 0; i < grid.axis1.values.size(); ++i)
    for (size_t j = 0; j < n2; ++j)
      out << grid.axis1.values[i] << ',' << grid.axis2.values[j] << ',' << grid.values[i * n2 + j]
          << ',' << grid.normalized[i * n2 + j] << '\n';
}

void export_grid_json(const JointSpectrumGrid& grid, const std::string& path) {
  nlohmann::json j;
  j["process"] = grid.kind == ProcessKind::sfwm ? "sfwm" : "tospdc";
  j["fiber_length_m"] = grid.fiber_length;
  j["transform"] = grid.transform;
  j["anchors_rad_s"] = {{"omega_s", grid.anchor_omega_s},
                        {"omega_i", grid.anchor_omega_i},
                        {"omega_r", grid.anchor_omega_r}};
  j["axes"] = nlohmann::json::array();
  j["axes"].push_back({{"label", grid.axis1.label}, {"values_rad_s", grid.axis1.values}});
  if (!grid.is_profile())
    j["axes"].push_back({{"label", grid.axis2.label}, {"values_rad_s", grid.axis2.values}});
  j["peak_value"] = grid.peak_value;
  j["jsi_raw"] = grid.values;
  j["jsi_normalized"] = grid.normalized;
  std::ofstream out(path);
  if (!out) throw std::runtime_error("export_grid_json: cannot open " + path);
  out << j.dump(2) << '\n';
}

}  // namespace pfs
