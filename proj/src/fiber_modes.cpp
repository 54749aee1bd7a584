#include "pfs/fiber_modes.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "pfs/constants.hpp"
#include "pfs/quadrature.hpp"

namespace pfs {

namespace {

double bessel_jp(int m, double x) {
  return 0.5 * (std::cyl_bessel_j(m - 1, x) - std::cyl_bessel_j(m + 1, x));
}

double bessel_kp(int m, double x) {
  return -0.5 * (std::cyl_bessel_k(m - 1, x) + std::cyl_bessel_k(m + 1, x));
}

struct CharContext {
  double k0a;       // k0 * core_radius
  double n_core;
  double n_clad;
  int m;
};

// HE branch of the exact vector characteristic equation, written as the
// quadratic-root split of
//   (Ju + Kw)(Ju + s*Kw) = q^2,   s = (n_clad/n_core)^2,
// with Ju = J'_m(u)/(u J_m(u)), Kw = K'_m(w)/(w K_m(w)),
// q = m (n_eff/n_core)(1/u^2 + 1/w^2).
// Zeros of the returned function are the HE_mn modes; the conjugate (-sqrt)
// branch holds the EH_mn modes.
double he_char(const CharContext& ctx, double n_eff) {
  const double u = ctx.k0a * std::sqrt(ctx.n_core * ctx.n_core - n_eff * n_eff);
  const double w = ctx.k0a * std::sqrt(n_eff * n_eff - ctx.n_clad * ctx.n_clad);
  const double jm = std::cyl_bessel_j(ctx.m, u);
  const double km = std::cyl_bessel_k(ctx.m, w);
  const double Ju = bessel_jp(ctx.m, u) / (u * jm);
  const double Kw = bessel_kp(ctx.m, w) / (w * km);
  const double s = (ctx.n_clad * ctx.n_clad) / (ctx.n_core * ctx.n_core);
  const double q = ctx.m * (n_eff / ctx.n_core) * (1.0 / (u * u) + 1.0 / (w * w));
  const double d = 0.5 * (1.0 - s) * Kw;
  return Ju + 0.5 * (1.0 + s) * Kw + std::sqrt(d * d + q * q);
}

// All HE_mn effective indices at this frequency, descending (HE_m1 first).
// Sign-change scan on a uniform n_eff grid, bisection refinement, and
// rejection of J_m(u)=0 pole crossings by a residual check.
std::vector<double> he_roots(const FiberGeometry& geom, int m, double omega) {
  CharContext ctx;
  ctx.k0a = omega / c_light * geom.core_radius;
  ctx.n_core = geom.core.index_at_omega(omega);
  ctx.n_clad = geom.cladding_index;
  ctx.m = m;
  if (ctx.n_clad >= ctx.n_core)
    throw std::invalid_argument("he_roots: cladding index must stay below core index");

  const int n_scan = 2000;
  const double eps = 1e-6;
  const double lo = ctx.n_clad + eps, hi = ctx.n_core - eps;
  const double h = (hi - lo) / n_scan;

  std::vector<double> roots;
  double x_prev = lo;
  double f_prev = he_char(ctx, x_prev);
  for (int i = 1; i <= n_scan; ++i) {
    const double x = lo + i * h;
    const double f = he_char(ctx, x);
    if (std::isfinite(f_prev) && std::isfinite(f) && f_prev * f < 0) {
      double a = x_prev, b = x, fa = f_prev;
      const double fscale = std::abs(f_prev) + std::abs(f);
      for (int iter = 0; iter < 100 && (b - a) > 1e-10; ++iter) {
        const double mid = 0.5 * (a + b);
        const double fm = he_char(ctx, mid);
        if (fa * fm <= 0) {
          b = mid;
        } else {
          a = mid;
          fa = fm;
        }
      }
      const double root = 0.5 * (a + b);
      // A genuine root drives the characteristic function to zero; a pole of
      // Ju blows it up instead.
      if (std::abs(he_char(ctx, root)) < 1e-3 * fscale) roots.push_back(root);
    }
    x_prev = x;
    f_prev = f;
  }
  std::sort(roots.rbegin(), roots.rend());
  return roots;
}

}  // namespace

ModeSolution solve_mode_full(const FiberGeometry& geometry, ModeId mode, double omega) {
  mode.validate();
  const auto roots = he_roots(geometry, mode.azimuthal_order, omega);
  if (static_cast<int>(roots.size()) < mode.radial_order)
    throw ModeCutoff("HE1" + std::to_string(mode.radial_order) + " not guided at lambda = " +
                     std::to_string(lambda_from_omega(omega) * 1e6) + " um (found " +
                     std::to_string(roots.size()) + " HE roots)");
  ModeSolution sol;
  sol.omega = omega;
  sol.n_eff = roots[mode.radial_order - 1];
  sol.n_core = geometry.core.index_at_omega(omega);
  const double k0 = omega / c_light;
  sol.beta = k0 * sol.n_eff;
  const double k0a = k0 * geometry.core_radius;
  sol.u = k0a * std::sqrt(sol.n_core * sol.n_core - sol.n_eff * sol.n_eff);
  sol.w = k0a * std::sqrt(sol.n_eff * sol.n_eff - geometry.cladding_index * geometry.cladding_index);
  const int m = mode.azimuthal_order;
  const double Ju = bessel_jp(m, sol.u) / (sol.u * std::cyl_bessel_j(m, sol.u));
  const double Kw = bessel_kp(m, sol.w) / (sol.w * std::cyl_bessel_k(m, sol.w));
  sol.s_par = m * (1.0 / (sol.u * sol.u) + 1.0 / (sol.w * sol.w)) / (Ju + Kw);
  return sol;
}

double solve_mode(const FiberGeometry& geometry, ModeId mode, double omega) {
  return solve_mode_full(geometry, mode, omega).beta;
}

// ---------------------------------------------------------------------------
// Transverse profile

TransverseProfile::TransverseProfile(const FiberGeometry& geometry, ModeId mode, double omega,
                                     ProfileScalarization scal)
    : mode_(mode), sol_(solve_mode_full(geometry, mode, omega)), a_(geometry.core_radius), scal_(scal) {
  jm_u_ = std::cyl_bessel_j(mode.azimuthal_order, sol_.u);
  km_w_ = std::cyl_bessel_k(mode.azimuthal_order, sol_.w);
  norm_ = 1.0;
  // Normalize the scalar field to unit transverse-plane integral of A^2.
  // Azimuthal integrals of the cos/sin structure are analytic; the radial part
  // is integrated adaptively, piecewise across the core boundary.
  const double r_max = a_ * (1.0 + 40.0 / sol_.w);
  auto radial_weight = [this](double r) {
    double fr, ft;
    radial_components(r, fr, ft);
    double az;
    if (scal_ == ProfileScalarization::polarized_component) {
      // A = fr cos^2 t - ft sin^2 t; integral of A^2 over t in [0, 2pi).
      az = 0.75 * pi * (fr * fr + ft * ft) - 0.5 * pi * fr * ft;
    } else {
      az = pi * (fr * fr + ft * ft);
    }
    return az * r;
  };
  const double i_core = adaptive_simpson_rel(radial_weight, 0.0, a_, 1e-9);
  const double i_clad = adaptive_simpson_rel(radial_weight, a_, r_max, 1e-9);
  norm_ = 1.0 / std::sqrt(i_core + i_clad);
}

void TransverseProfile::radial_components(double r_m, double& fr, double& ftheta) const {
  const int m = mode_.azimuthal_order;
  const double s = sol_.s_par;
  double R = r_m / a_;
  if (R < 1e-12) R = 1e-12;
  if (R <= 1.0) {
    const double x = sol_.u * R;
    const double j = std::cyl_bessel_j(m, x);
    const double jp = bessel_jp(m, x);
    const double inv_u2 = 1.0 / (sol_.u * sol_.u);
    fr = norm_ * inv_u2 * (sol_.u * jp - s * m * j / R);
    ftheta = -norm_ * inv_u2 * (m * j / R - s * sol_.u * jp);
  } else {
    const double x = sol_.w * R;
    const double k = std::cyl_bessel_k(m, x);
    const double kp = bessel_kp(m, x);
    const double inv_w2 = 1.0 / (sol_.w * sol_.w);
    const double amp = jm_u_ / km_w_;
    fr = -norm_ * amp * inv_w2 * (sol_.w * kp - s * m * k / R);
    ftheta = norm_ * amp * inv_w2 * (m * k / R - s * sol_.w * kp);
  }
}

double TransverseProfile::longitudinal_component(double r_m) const {
  const int m = mode_.azimuthal_order;
  double R = r_m / a_;
  if (R < 1e-12) R = 1e-12;
  const double beta_a = sol_.beta * a_;
  double raw;
  if (R <= 1.0)
    raw = std::cyl_bessel_j(m, sol_.u * R);
  else
    raw = (jm_u_ / km_w_) * std::cyl_bessel_k(m, sol_.w * R);
  return norm_ * raw / beta_a;
}

double TransverseProfile::field(double r_m, double theta) const {
  double fr, ft;
  radial_components(r_m, fr, ft);
  const double ct = std::cos(theta), st = std::sin(theta);
  if (scal_ == ProfileScalarization::polarized_component) return fr * ct * ct - ft * st * st;
  const double er = fr * ct, et = ft * st;
  return std::sqrt(er * er + et * et);
}

double TransverseProfile::core_fraction() const {
  auto radial_weight = [this](double r) {
    double fr, ft;
    radial_components(r, fr, ft);
    double az;
    if (scal_ == ProfileScalarization::polarized_component)
      az = 0.75 * pi * (fr * fr + ft * ft) - 0.5 * pi * fr * ft;
    else
      az = pi * (fr * fr + ft * ft);
    return az * r;
  };
  return adaptive_simpson_rel(radial_weight, 0.0, a_, 1e-9);
}

// ---------------------------------------------------------------------------
// Dispersion table

ModeDispersion::ModeDispersion(const FiberGeometry& geometry, ModeId mode, double omega_min,
                               double omega_max, int n_samples, bool parallel)
    : mode_(mode) {
  if (n_samples < 4) throw std::invalid_argument("ModeDispersion: need at least 4 samples");
  if (!(omega_min > 0 && omega_max > omega_min))
    throw std::invalid_argument("ModeDispersion: bad omega range");
  omega_.resize(n_samples);
  beta_.resize(n_samples);
  const double h = (omega_max - omega_min) / (n_samples - 1);
  for (int i = 0; i < n_samples; ++i) omega_[i] = omega_min + i * h;

  std::string first_error;
#pragma omp parallel for schedule(dynamic) if (parallel)
  for (int i = 0; i < n_samples; ++i) {
    try {
      beta_[i] = solve_mode(geometry, mode, omega_[i]);
    } catch (const std::exception& e) {
      #pragma omp critical
      if (first_error.empty())
        first_error = std::string(e.what()) + " (table sample omega = " + std::to_string(omega_[i]) + " rad/s)";
      beta_[i] = 0;
    }
  }
  if (!first_error.empty()) throw ModeCutoff(first_error);

  for (int i = 1; i < n_samples; ++i)
    if (beta_[i] <= beta_[i - 1])
      throw ConvergenceFailure("ModeDispersion: beta samples not strictly increasing");

  // Natural cubic spline second derivatives.
  const int n = n_samples;
  d2beta_.assign(n, 0.0);
  std::vector<double> scratch(n, 0.0);
  for (int i = 1; i < n - 1; ++i) {
    const double sig = (omega_[i] - omega_[i - 1]) / (omega_[i + 1] - omega_[i - 1]);
    const double p = sig * d2beta_[i - 1] + 2.0;
    d2beta_[i] = (sig - 1.0) / p;
    scratch[i] = (beta_[i + 1] - beta_[i]) / (omega_[i + 1] - omega_[i]) -
                 (beta_[i] - beta_[i - 1]) / (omega_[i] - omega_[i - 1]);
    scratch[i] = (6.0 * scratch[i] / (omega_[i + 1] - omega_[i - 1]) - sig * scratch[i - 1]) / p;
  }
  for (int i = n - 2; i >= 0; --i) d2beta_[i] = d2beta_[i] * d2beta_[i + 1] + scratch[i];
}

void ModeDispersion::check_range(double omega) const {
  if (!covers(omega))
    throw std::out_of_range("ModeDispersion: omega " + std::to_string(omega) +
                            " rad/s outside table [" + std::to_string(omega_.front()) + ", " +
                            std::to_string(omega_.back()) + "]");
}

double ModeDispersion::beta(double omega) const {
  check_range(omega);
  const auto it = std::upper_bound(omega_.begin(), omega_.end(), omega);
  size_t i = std::min<size_t>(std::max<ptrdiff_t>(it - omega_.begin() - 1, 0), omega_.size() - 2);
  const double h = omega_[i + 1] - omega_[i];
  const double A = (omega_[i + 1] - omega) / h, B = (omega - omega_[i]) / h;
  return A * beta_[i] + B * beta_[i + 1] +
         ((A * A * A - A) * d2beta_[i] + (B * B * B - B) * d2beta_[i + 1]) * h * h / 6.0;
}

double ModeDispersion::n_eff(double omega) const { return beta(omega) * c_light / omega; }

double ModeDispersion::k1(double omega) const {
  check_range(omega);
  const auto it = std::upper_bound(omega_.begin(), omega_.end(), omega);
  size_t i = std::min<size_t>(std::max<ptrdiff_t>(it - omega_.begin() - 1, 0), omega_.size() - 2);
  const double h = omega_[i + 1] - omega_[i];
  const double A = (omega_[i + 1] - omega) / h, B = (omega - omega_[i]) / h;
  return (beta_[i + 1] - beta_[i]) / h +
         ((3 * B * B - 1) * d2beta_[i + 1] - (3 * A * A - 1) * d2beta_[i]) * h / 6.0;
}

void ModeDispersion::export_csv(const std::string& path) const {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("ModeDispersion::export_csv: cannot open " + path);
  out << "omega_rad_s,lambda_um,n_eff,k1_s_m\n";
  out.precision(8);  // 9 significant digits in scientific notation
  out << std::scientific;
  for (size_t i = 0; i < omega_.size(); ++i) {
    out << omega_[i] << ',' << lambda_from_omega(omega_[i]) * 1e6 << ','
        << beta_[i] * c_light / omega_[i] << ',' << k1(omega_[i]) << '\n';
  }
}

}  // namespace pfs
