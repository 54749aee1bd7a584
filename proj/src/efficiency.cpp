#include "pfs/efficiency.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <stdexcept>

#include "pfs/constants.hpp"
#include "pfs/quadrature.hpp"

namespace pfs {

namespace {

double sinc(double x) { return x == 0 ? 1.0 : std::sin(x) / x; }
double sinc2(double x) { const double s = sinc(x); return s * s; }

// Detuning of the first sinc zero (|dk| L / 2 = pi) along a scan direction.
template <typename F>
double first_sinc_zero(F&& abs_dk, double length, double d_max) {
  const int n = 800;
  const double target = twopi / length;
  double prev = abs_dk(0.0);
  for (int k = 1; k <= n; ++k) {
    const double d = d_max * k / n;
    const double cur = abs_dk(d);
    if (cur >= target) {
      const double d_prev = d_max * (k - 1) / n;
      return d_prev + (target - prev) / std::max(cur - prev, 1e-300) * (d - d_prev);
    }
    prev = cur;
  }
  return d_max;
}

struct TailResult {
  double value = 0;
  double err = 0;  // absolute: panel-rule differences + truncated-tail bound
};

// 1D integral with slowly decaying tails: panels of one sinc-lobe width,
// evaluated with an embedded lower-order rule for the error estimate; the
// window grows outward from [c - w0, c + w0] in w0-sized blocks until a block
// contributes less than tail_tol of the running total.  Panel results are
// stored by index and summed serially, so parallel evaluation is deterministic.
template <typename F>
TailResult tail_1d(F&& f, double center, double lobe, double w0, double lo_cap, double hi_cap,
                   double tail_tol, int nodes) {
  const double h = std::max(std::min(lobe, w0 / 4.0), 1e-12 * std::max(std::abs(center), w0));
  const int half = std::min(nodes / 2 > 1 ? nodes / 2 : 2, nodes - 1);

  auto eval_block = [&](double a, double b, double& err) {
    const int np = std::max(1, static_cast<int>(std::ceil((b - a) / h)));
    std::vector<double> vals(np), diffs(np);
#pragma omp parallel for schedule(dynamic)
    for (int k = 0; k < np; ++k) {
      const double pa = a + (b - a) * k / np, pb = a + (b - a) * (k + 1) / np;
      const double fine = gauss_integrate(f, pa, pb, nodes);
      const double coarse = gauss_integrate(f, pa, pb, half);
      vals[k] = fine;
      diffs[k] = std::abs(fine - coarse);
    }
    double v = 0;
    for (int k = 0; k < np; ++k) {
      v += vals[k];
      err += diffs[k];
    }
    return v;
  };

  TailResult res;
  double lo = std::max(center - w0, lo_cap), hi = std::min(center + w0, hi_cap);
  res.value = eval_block(lo, hi, res.err);
  double block = std::max(w0, hi - lo);
  for (int iter = 0; iter < 40; ++iter) {
    double added = 0;
    bool grew = false;
    if (lo > lo_cap) {
      const double nlo = std::max(lo - block, lo_cap);
      added += eval_block(nlo, lo, res.err);
      lo = nlo;
      grew = true;
    }
    if (hi < hi_cap) {
      const double nhi = std::min(hi + block, hi_cap);
      added += eval_block(hi, nhi, res.err);
      hi = nhi;
      grew = true;
    }
    res.value += added;
    if (!grew) return res;
    if (std::abs(added) < tail_tol * std::abs(res.value)) {
      res.err += std::abs(added);  // bound on what the next extensions could add
      return res;
    }
    block *= 2;
  }
  return res;
}

// 2D analogue over a square centered at the origin, grown in square annuli.
template <typename F>
TailResult tail_2d(F&& f, double lobe, double w0, double cap, double tail_tol, int nodes) {
  const double h = std::min(lobe, w0 / 2.0);
  const int half = std::max(nodes / 2, 2);
  const auto& fine = gauss_legendre(nodes);
  const auto& coarse = gauss_legendre(half);

  auto panel = [&](double x0, double x1, double y0, double y1, double& diff) {
    const double cx = 0.5 * (x0 + x1), hx = 0.5 * (x1 - x0);
    const double cy = 0.5 * (y0 + y1), hy = 0.5 * (y1 - y0);
    double vf = 0;
    for (size_t a = 0; a < fine.x.size(); ++a)
      for (size_t b = 0; b < fine.x.size(); ++b)
        vf += fine.w[a] * fine.w[b] * f(cx + hx * fine.x[a], cy + hy * fine.x[b]);
    vf *= hx * hy;
    double vc = 0;
    for (size_t a = 0; a < coarse.x.size(); ++a)
      for (size_t b = 0; b < coarse.x.size(); ++b)
        vc += coarse.w[a] * coarse.w[b] * f(cx + hx * coarse.x[a], cy + hy * coarse.x[b]);
    vc *= hx * hy;
    diff = std::abs(vf - vc);
    return vf;
  };

  // Panels of the region [x in (-W, W)] x [y in (-W, W)] minus the inner square
  // (-Wi, Wi)^2 (Wi = 0 for the first pass).
  auto eval_region = [&](double wi, double wo, double& err) {
    struct Cell {
      double x0, x1, y0, y1;
    };
    std::vector<Cell> cells;
    const int n = std::max(1, static_cast<int>(std::ceil(2.0 * wo / h)));
    const double step = 2.0 * wo / n;
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        const Cell c{-wo + i * step, -wo + (i + 1) * step, -wo + j * step, -wo + (j + 1) * step};
        // Skip cells fully inside the already-integrated square.
        if (c.x0 >= -wi && c.x1 <= wi && c.y0 >= -wi && c.y1 <= wi) continue;
        cells.push_back(c);
      }
    std::vector<double> vals(cells.size()), diffs(cells.size());
#pragma omp parallel for schedule(dynamic)
    for (int k = 0; k < static_cast<int>(cells.size()); ++k)
      vals[k] = panel(cells[k].x0, cells[k].x1, cells[k].y0, cells[k].y1, diffs[k]);
    double v = 0;
    for (size_t k = 0; k < cells.size(); ++k) {
      v += vals[k];
      err += diffs[k];
    }
    return v;
  };

  TailResult res;
  double w = std::min(w0, cap);
  res.value = eval_region(0.0, w, res.err);
  for (int iter = 0; iter < 20 && w < cap; ++iter) {
    const double wn = std::min(2.0 * w, cap);
    const double added = eval_region(w, wn, res.err);
    res.value += added;
    w = wn;
    if (std::abs(added) < tail_tol * std::abs(res.value)) {
      res.err += std::abs(added);
      return res;
    }
  }
  return res;
}

double bulk_index(const ProcessContext& ctx, double omega) {
  return ctx.geometry->core.index_at_omega(omega);
}

}  // namespace

void EfficiencyRequest::validate() const {
  if (!ctx) throw std::invalid_argument("EfficiencyRequest: missing process context");
  if (!(length > 0)) throw std::invalid_argument("EfficiencyRequest: fiber length must be positive");
  if (!(coefficients.gamma > 0))
    throw std::invalid_argument("EfficiencyRequest: process gamma must be positive");
  const bool sfwm = ctx->kind == ProcessKind::sfwm;
  pump1.validate();
  if (sfwm) pump2.validate();
  if (regime == Regime::pulsed) {
    if (!(pump1.sigma > 0) || (sfwm && !(pump2.sigma > 0)))
      throw std::invalid_argument("EfficiencyRequest: pulsed regime requires sigma > 0");
  } else {
    if (pump1.sigma != 0 || (sfwm && pump2.sigma != 0))
      throw std::invalid_argument("EfficiencyRequest: cw regime requires sigma = 0");
  }
  if (sfwm && (!(omega_s0 > 0) || !(omega_i0 > 0)))
    throw std::invalid_argument("EfficiencyRequest: SFWM needs a phasematched anchor");
}

double h2(const ProcessContext& ctx, double omega_s, double omega_i) {
  const double ns = bulk_index(ctx, omega_s), ni = bulk_index(ctx, omega_i);
  return (ctx.photon_mode->k1(omega_s) * omega_s / (ns * ns)) *
         (ctx.photon_mode->k1(omega_i) * omega_i / (ni * ni));
}

double h3(const ProcessContext& ctx, double omega_r, double omega_s, double omega_i) {
  const double nr = bulk_index(ctx, omega_r);
  return (ctx.photon_mode->k1(omega_r) * omega_r / (nr * nr)) * h2(ctx, omega_s, omega_i);
}

EfficiencyResult eta_sfwm_pulsed(const EfficiencyRequest& req) {
  req.validate();
  const ProcessContext& ctx = *req.ctx;
  const auto& co = req.coefficients;
  const double s1 = req.pump1.sigma, s2 = req.pump2.sigma;
  const double p1 = req.pump1.average_power, p2 = req.pump2.average_power;
  const double pk1 = req.pump1.peak_power(), pk2 = req.pump2.peak_power();
  const double L = req.length, rr = req.pump1.rep_rate;

  const double pref = 256.0 * hbar * c_light * c_light * co.n1 * co.n2 /
                      (twopi * twopi * twopi * rr) * L * L * co.gamma * co.gamma * p1 * p2 /
                      (s1 * s2 * (co.omega1 * p2 + co.omega2 * p1));

  const double sigma_sum = std::sqrt(s1 * s1 + s2 * s2);
  const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
  const double plus_half = 6.0 * sigma_sum * inv_sqrt2;
  const int n_plus = std::max(8, static_cast<int>(std::lround(24 * req.quad.resolution)));
  const int n_panel = std::max(6, static_cast<int>(std::lround(12 * req.quad.resolution)));

  const double w_lo = ctx.photon_mode->omega_min(), w_hi = ctx.photon_mode->omega_max();
  PumpConfig pc1 = req.pump1, pc2 = req.pump2;

  auto jsa_weight = [&](double nu_p, double nu_m) {
    double nu_s, nu_i;
    sfwm_from_rotated(nu_p, nu_m, nu_s, nu_i);
    const double ws = req.omega_s0 + nu_s, wi = req.omega_i0 + nu_i;
    if (ws <= w_lo || ws >= w_hi || wi <= w_lo || wi >= w_hi) return 0.0;
    const auto f = jsa_sfwm_bare(ctx, pc1, pc2, L, ws, wi);
    return h2(ctx, ws, wi) * std::norm(f);
  };
  auto outer = [&](double nu_m) {
    return gauss_integrate([&](double nu_p) { return jsa_weight(nu_p, nu_m); }, -plus_half,
                           plus_half, n_plus);
  };

  // Sinc-lobe scale of the linearized mismatch along nu_minus.  The window is
  // anchored to the contour ridge; it never reaches past halfway toward the
  // degenerate point omega_s = omega_i = omega_p, where the trivial
  // zero-detuning phasematching would otherwise dominate the integral.
  const double margin = plus_half * inv_sqrt2 + 6.0 * sigma_sum;
  const double mid_gap = 0.5 * std::abs(req.omega_s0 - req.omega_i0) * inv_sqrt2;
  const double cap_hi = std::min(
      std::sqrt(2.0) * std::min(w_hi - req.omega_s0 - margin, req.omega_i0 - w_lo - margin),
      mid_gap);
  const double cap_lo = std::max(
      -std::sqrt(2.0) * std::min(w_hi - req.omega_i0 - margin, req.omega_s0 - w_lo - margin),
      -mid_gap);
  auto abs_dk = [&](double nu_m) {
    return std::abs(delta_k_sfwm_cw(ctx, req.omega_s0 + inv_sqrt2 * nu_m,
                                    req.omega_i0 - inv_sqrt2 * nu_m, pk1, pk2));
  };
  const double lobe = first_sinc_zero(abs_dk, L, std::min(cap_hi, -cap_lo));
  const double w0 = std::max(4.0 * lobe, 4.0 * sigma_sum);

  // The integral over the full (omega_s, omega_i) plane picks up the mirror
  // ridge at (omega_i0, omega_s0) as well; by s<->i symmetry of |F|^2 h2 it
  // contributes equally, hence the factor 2.
  const TailResult tr = tail_1d(outer, 0.0, lobe, w0, cap_lo, cap_hi, req.quad.tail_tol, n_panel);

  EfficiencyResult res;
  res.integral = 2.0 * tr.value;
  res.prefactor = pref;
  res.eta = pref * res.integral;
  res.rel_error_estimate = tr.value > 0 ? tr.err / tr.value : 0.0;
  res.gamma = co.gamma;
  res.peak_power = pk1;
  return res;
}

EfficiencyResult eta_sfwm_cw(const EfficiencyRequest& req) {
  req.validate();
  const ProcessContext& ctx = *req.ctx;
  const auto& co = req.coefficients;
  const double p1 = req.pump1.average_power, p2 = req.pump2.average_power;
  const double L = req.length;

  const double pref = 32.0 * hbar * c_light * c_light * co.n1 * co.n2 / pi * L * L * co.gamma *
                      co.gamma * p1 * p2 / (p1 * co.omega2 + p2 * co.omega1);

  const double omega_sum = co.omega1 + co.omega2;
  const double w_lo = ctx.photon_mode->omega_min(), w_hi = ctx.photon_mode->omega_max();
  auto integrand = [&](double nu) {
    const double ws = req.omega_s0 + nu, wi = omega_sum - ws;
    if (ws <= w_lo || ws >= w_hi || wi <= w_lo || wi >= w_hi) return 0.0;
    return h2(ctx, ws, wi) * sinc2(0.5 * L * delta_k_sfwm_cw(ctx, ws, wi, p1, p2));
  };

  // Integrand is symmetric about the pump frequency (omega <-> omega_sum - omega);
  // integrating the signal-side ridge and doubling covers the full range.
  const double mid = 0.5 * omega_sum;
  // Window anchored to the ridge; capped halfway toward the degenerate point
  // omega = omega_p (the trivial zero-detuning phasematching region).
  const double half_gap = 0.5 * std::abs(req.omega_s0 - mid);
  const double cap_lo = -half_gap;
  const double cap_hi = std::min((w_hi - req.omega_s0) * (1.0 - 1e-12), half_gap);
  auto abs_dk = [&](double nu) {
    return std::abs(delta_k_sfwm_cw(ctx, req.omega_s0 + nu, omega_sum - req.omega_s0 - nu, p1, p2));
  };
  const double lobe = first_sinc_zero(abs_dk, L, std::min(cap_hi, -cap_lo));
  const int n_panel = std::max(6, static_cast<int>(std::lround(12 * req.quad.resolution)));
  const TailResult tr =
      tail_1d(integrand, 0.0, lobe, 4.0 * lobe, cap_lo, cap_hi, req.quad.tail_tol, n_panel);

  EfficiencyResult res;
  res.integral = 2.0 * tr.value;
  res.prefactor = pref;
  res.eta = pref * res.integral;
  res.rel_error_estimate = tr.value > 0 ? tr.err / tr.value : 0.0;
  res.gamma = co.gamma;
  res.peak_power = p1;
  return res;
}

namespace {

// Shared TOSPDC pieces: sinc^2-weighted h3 on the nu_plus slice, and the caps
// keeping all three photon frequencies inside the table.
struct TospdcKernel {
  const ProcessContext* ctx;
  double omega_0, length, peak_power;
  double w_lo, w_hi;

  double operator()(double nu_plus, double nu_a, double nu_b) const {
    double nr, ns, ni;
    tospdc_from_rotated(nu_plus, nu_a, nu_b, nr, ns, ni);
    const double wr = omega_0 + nr, ws = omega_0 + ns, wi = omega_0 + ni;
    if (wr <= w_lo || wr >= w_hi || ws <= w_lo || ws >= w_hi || wi <= w_lo || wi >= w_hi)
      return 0.0;
    const double dk = delta_k_tospdc(*ctx, wr, ws, wi, peak_power);
    return h3(*ctx, wr, ws, wi) * sinc2(0.5 * length * dk);
  }
};

}  // namespace

EfficiencyResult eta_tospdc_pulsed(const EfficiencyRequest& req) {
  req.validate();
  const ProcessContext& ctx = *req.ctx;
  const auto& co = req.coefficients;
  const double sigma = req.pump1.sigma, L = req.length;
  const double pk = req.pump1.peak_power();
  const double omega_p = co.omega1, omega_0 = omega_p / 3.0;
  const double np3 = co.n1 * co.n1 * co.n1;

  const double pref = std::pow(2.0, 2.5) * 9.0 * c_light * c_light * c_light * hbar * hbar * np3 /
                      (std::pow(pi, 2.5) * omega_p) * L * L * co.gamma * co.gamma / sigma;

  TospdcKernel kern{&ctx, omega_0, L, pk, ctx.photon_mode->omega_min(),
                    ctx.photon_mode->omega_max()};

  // Transverse (nu_a, nu_b) components map to photon detunings with row norm
  // sqrt(2/3); the cap keeps every omega_mu inside the table.
  const double margin = 6.0 * sigma;  // nu_plus excursion allowance
  const double cap = (std::min(omega_0 - kern.w_lo, kern.w_hi - omega_0) - margin) /
                     std::sqrt(2.0 / 3.0) * 0.98;
  auto abs_dk = [&](double nu_a) {
    double nr, ns, ni;
    tospdc_from_rotated(0.0, nu_a, 0.0, nr, ns, ni);
    return std::abs(
        delta_k_tospdc(ctx, omega_0 + nr, omega_0 + ns, omega_0 + ni, pk));
  };
  const double lobe = first_sinc_zero(abs_dk, L, cap);
  const int n_panel = std::max(4, static_cast<int>(std::lround(8 * req.quad.resolution)));
  const int n_plus = std::max(8, static_cast<int>(std::lround(16 * req.quad.resolution)));

  // Factorized 3D quadrature: the squared bare envelope exp(-6 nu_plus^2 / sigma^2)
  // times the transverse sinc^2 integral at each nu_plus node.
  const auto& rule = gauss_legendre(n_plus);
  const double half_plus = 6.0 * sigma / std::sqrt(6.0);
  double integral = 0, err_acc = 0, weight_acc = 0;
  for (size_t k = 0; k < rule.x.size(); ++k) {
    const double nu_p = half_plus * rule.x[k];
    const double env2 = std::exp(-6.0 * nu_p * nu_p / (sigma * sigma));
    auto slice = [&](double a, double b) { return kern(nu_p, a, b); };
    const TailResult tr =
        tail_2d(slice, lobe, 4.0 * lobe, cap, req.quad.tail_tol, n_panel);
    integral += rule.w[k] * half_plus * env2 * tr.value;
    err_acc += rule.w[k] * half_plus * env2 * tr.err;
    weight_acc += rule.w[k] * half_plus * env2 * std::abs(tr.value);
  }

  EfficiencyResult res;
  res.integral = integral;
  res.prefactor = pref;
  res.eta = pref * integral;
  res.rel_error_estimate = weight_acc > 0 ? err_acc / weight_acc : 0.0;
  res.gamma = co.gamma;
  res.peak_power = pk;
  return res;
}

EfficiencyResult eta_tospdc_cw(const EfficiencyRequest& req) {
  req.validate();
  const ProcessContext& ctx = *req.ctx;
  const auto& co = req.coefficients;
  const double L = req.length, p = req.pump1.average_power;
  const double omega_p = co.omega1, omega_0 = omega_p / 3.0;
  const double np3 = co.n1 * co.n1 * co.n1;

  const double pref = 4.0 * 9.0 * hbar * hbar * c_light * c_light * c_light * np3 * co.gamma *
                      co.gamma * L * L / (pi * pi * omega_p);

  const double w_lo = ctx.photon_mode->omega_min(), w_hi = ctx.photon_mode->omega_max();
  auto integrand = [&](double nu_r, double nu_s) {
    const double wr = omega_0 + nu_r, ws = omega_0 + nu_s, wi = omega_p - wr - ws;
    if (wr <= w_lo || wr >= w_hi || ws <= w_lo || ws >= w_hi || wi <= w_lo || wi >= w_hi)
      return 0.0;
    const double dk = delta_k_tospdc(ctx, wr, ws, wi, p);
    return h3(ctx, wr, ws, wi) * sinc2(0.5 * L * dk);
  };

  const double cap = std::min(omega_0 - w_lo, w_hi - omega_0) * 0.49;
  auto abs_dk = [&](double nu) {
    return std::abs(delta_k_tospdc(ctx, omega_0 + nu, omega_0 - nu, omega_0, p));
  };
  const double lobe = first_sinc_zero(abs_dk, L, cap);
  const int n_panel = std::max(4, static_cast<int>(std::lround(8 * req.quad.resolution)));
  const TailResult tr = tail_2d(integrand, lobe, 4.0 * lobe, cap, req.quad.tail_tol, n_panel);

  EfficiencyResult res;
  res.integral = tr.value;
  res.prefactor = pref;
  res.eta = pref * tr.value;
  res.rel_error_estimate = tr.value > 0 ? tr.err / tr.value : 0.0;
  res.gamma = co.gamma;
  res.peak_power = p;
  return res;
}

EfficiencyResult run_efficiency(const EfficiencyRequest& req) {
  if (!req.ctx) throw std::invalid_argument("run_efficiency: missing process context");
  if (req.ctx->kind == ProcessKind::sfwm)
    return req.regime == Regime::pulsed ? eta_sfwm_pulsed(req) : eta_sfwm_cw(req);
  return req.regime == Regime::pulsed ? eta_tospdc_pulsed(req) : eta_tospdc_cw(req);
}

std::vector<SweepPoint> sweep(const EfficiencyRequest& base, SweepParameter parameter,
                              const std::vector<double>& values) {
  std::vector<SweepPoint> out;
  out.reserve(values.size());
  for (double v : values) {
    EfficiencyRequest req = base;
    switch (parameter) {
      case SweepParameter::bandwidth:
        req.pump1.sigma = v;
        req.pump2.sigma = v;
        break;
      case SweepParameter::power:
        req.pump1.average_power = v;
        req.pump2.average_power = v;
        break;
      case SweepParameter::length:
        req.length = v;
        break;
    }
    out.push_back({v, run_efficiency(req).eta});
  }
  return out;
}

void export_sweep_csv(const std::vector<SweepPoint>& points, SweepParameter parameter,
                      const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("export_sweep_csv: cannot open " + path);
  const char* name = parameter == SweepParameter::bandwidth ? "sigma_rad_s"
                     : parameter == SweepParameter::power   ? "average_power_w"
                                                            : "length_m";
  out.precision(8);  // 9 significant digits in scientific notation
  out << std::scientific << name << ",eta\n";
  for (const auto& pt : points) out << pt.value << ',' << pt.eta << '\n';
}

}  // namespace pfs
