#include "pfs/nonlinear_coupling.hpp"

#include <array>
#include <cmath>

#include "pfs/constants.hpp"
#include "pfs/quadrature.hpp"

namespace pfs {

namespace {

// Transverse-plane integral of the product of N normalized scalar profiles.
// Azimuthal direction: periodic trapezoid (the integrand is smooth and
// 2pi-periodic); radial direction: adaptive, split at the core boundary.
template <size_t N>
double overlap_integral(const std::array<const TransverseProfile*, N>& profiles) {
  constexpr int n_theta = 64;
  const double dtheta = twopi / n_theta;
  double a = 0, w_min = std::numeric_limits<double>::infinity();
  for (const auto* p : profiles) {
    a = std::max(a, p->core_radius());
    w_min = std::min(w_min, p->solution().w / p->core_radius());
  }
  const double r_max = a + 40.0 / w_min;

  auto ring = [&](double r) {
    double sum = 0;
    for (int j = 0; j < n_theta; ++j) {
      const double theta = j * dtheta;
      double prod = 1.0;
      for (const auto* p : profiles) prod *= p->field(r, theta);
      sum += prod;
    }
    return sum * dtheta * r;
  };
  return adaptive_simpson_rel(ring, 0.0, a, 1e-7) + adaptive_simpson_rel(ring, a, r_max, 1e-7);
}

double reciprocal_area(double integral) {
  const double mag = std::abs(integral);
  if (!(mag > 0)) return std::numeric_limits<double>::infinity();
  return 1.0 / mag;
}

// Vector-field overlap machinery.  Each mode field, in a frame where the
// transverse components are real, is (fr cos t, ft sin t, i fz cos t); the
// per-profile vector norm rescales to unit integral of |E|^2.
struct VectorField {
  const TransverseProfile* p;
  double renorm;

  void components(double r, double& fr, double& ft, double& fz) const {
    p->radial_components(r, fr, ft);
    fz = p->longitudinal_component(r);
    fr *= renorm;
    ft *= renorm;
    fz *= renorm;
  }
};

VectorField make_vector_field(const TransverseProfile& p) {
  VectorField v{&p, 1.0};
  const double a = p.core_radius();
  const double w = p.solution().w / a;
  auto weight = [&](double r) {
    double fr, ft, fz;
    v.components(r, fr, ft, fz);
    return pi * r * (fr * fr + ft * ft + fz * fz);
  };
  const double norm2 = adaptive_simpson_rel(weight, 0.0, a, 1e-8) +
                       adaptive_simpson_rel(weight, a, a + 40.0 / w, 1e-8);
  v.renorm = 1.0 / std::sqrt(norm2);
  return v;
}

// Dot product of fields a, b with conjugation flags, reduced to
// P cos^2 t + Q sin^2 t.  The z parts are purely imaginary, so their product
// flips sign unless exactly one factor is conjugated.
struct DotPQ {
  double P, Q;
};

DotPQ vec_dot(double fra, double fta, double fza, bool conj_a, double frb, double ftb, double fzb,
              bool conj_b) {
  const double zsign = (conj_a != conj_b) ? 1.0 : -1.0;
  return {fra * frb + zsign * fza * fzb, fta * ftb};
}

// Integral over theta of (P1 c^2 + Q1 s^2)(P2 c^2 + Q2 s^2).
double az_pair(const DotPQ& d1, const DotPQ& d2) {
  return pi * 0.25 * (3 * d1.P * d2.P + d1.P * d2.Q + d1.Q * d2.P + 3 * d1.Q * d2.Q);
}

double vector_overlap_four(const std::array<const TransverseProfile*, 4>& profiles,
                           int n_unconjugated) {
  std::array<VectorField, 4> v = {make_vector_field(*profiles[0]), make_vector_field(*profiles[1]),
                                  make_vector_field(*profiles[2]), make_vector_field(*profiles[3])};
  std::array<bool, 4> conj;
  for (int k = 0; k < 4; ++k) conj[k] = (k >= n_unconjugated);

  double a = 0, w_min = std::numeric_limits<double>::infinity();
  for (const auto* p : profiles) {
    a = std::max(a, p->core_radius());
    w_min = std::min(w_min, p->solution().w / p->core_radius());
  }
  const double r_max = a + 40.0 / w_min;

  auto ring = [&](double r) {
    std::array<double, 4> fr, ft, fz;
    for (int k = 0; k < 4; ++k) v[k].components(r, fr[k], ft[k], fz[k]);
    auto dot = [&](int i, int j) {
      return vec_dot(fr[i], ft[i], fz[i], conj[i], fr[j], ft[j], fz[j], conj[j]);
    };
    // Symmetrized isotropic chi3 pairing over the three partitions into pairs.
    const double t = (az_pair(dot(0, 1), dot(2, 3)) + az_pair(dot(0, 2), dot(1, 3)) +
                      az_pair(dot(0, 3), dot(1, 2))) /
                     3.0;
    return t * r;
  };
  return adaptive_simpson_rel(ring, 0.0, a, 1e-7) + adaptive_simpson_rel(ring, a, r_max, 1e-7);
}

}  // namespace

double effective_area_single(const TransverseProfile& profile) {
  return reciprocal_area(overlap_integral<4>({&profile, &profile, &profile, &profile}));
}

double effective_area_two_mode(const TransverseProfile& mu, const TransverseProfile& nu) {
  return reciprocal_area(overlap_integral<4>({&mu, &mu, &nu, &nu}));
}

double effective_area_four(const TransverseProfile& p1, const TransverseProfile& p2,
                           const TransverseProfile& p3, const TransverseProfile& p4,
                           OverlapConvention convention, int n_unconjugated) {
  const std::array<const TransverseProfile*, 4> ps = {&p1, &p2, &p3, &p4};
  if (convention == OverlapConvention::scalar) return reciprocal_area(overlap_integral<4>(ps));
  return reciprocal_area(vector_overlap_four(ps, n_unconjugated));
}

double gamma_self(const NonlinearContext& ctx, double omega0, double n, double a_eff) {
  return 3.0 * ctx.chi3 * omega0 / (4.0 * eps0 * c_light * c_light * n * n * a_eff);
}

double gamma_cross(const NonlinearContext& ctx, double omega_mu0, double n_mu, double n_nu,
                   double a_eff_mu_nu) {
  return 3.0 * ctx.chi3 * omega_mu0 / (4.0 * eps0 * c_light * c_light * n_mu * n_nu * a_eff_mu_nu);
}

double gamma_fwm(const NonlinearContext& ctx, double omega1, double omega2, double n1, double n2,
                 double a_eff_four) {
  return 3.0 * ctx.chi3 * std::sqrt(omega1 * omega2) /
         (4.0 * eps0 * c_light * c_light * n1 * n2 * a_eff_four);
}

double gamma_pdc(const NonlinearContext& ctx, double omega_p, double n_p, double a_eff_four) {
  return 3.0 * ctx.chi3 * omega_p / (4.0 * eps0 * c_light * c_light * n_p * n_p * a_eff_four);
}

double phi_nl_sfwm(double gamma1, double gamma2, double p1_peak, double p2_peak) {
  return gamma1 * p1_peak + gamma2 * p2_peak;
}

double phi_nl_sfwm_full(const SfwmGammaSet& g, double p1_peak, double p2_peak) {
  return (g.g1 + 2 * g.g21 - 2 * g.gs1 - 2 * g.gi1) * p1_peak +
         (g.g2 + 2 * g.g12 - 2 * g.gs2 - 2 * g.gi2) * p2_peak;
}

double phi_nl_tospdc(double gamma_p, double gamma_rp, double gamma_sp, double gamma_ip,
                     double p_peak) {
  return (gamma_p - 2.0 * (gamma_rp + gamma_sp + gamma_ip)) * p_peak;
}

ProcessCoefficients sfwm_coefficients(const FiberGeometry& geometry, const NonlinearContext& nl,
                                      double omega_p, double omega_s0, double omega_i0) {
  TransverseProfile pump(geometry, ModeId::HE11(), omega_p);
  TransverseProfile sig(geometry, ModeId::HE11(), omega_s0);
  TransverseProfile idl(geometry, ModeId::HE11(), omega_i0);
  ProcessCoefficients c;
  c.omega1 = c.omega2 = omega_p;
  c.n1 = c.n2 = geometry.core.index_at_omega(omega_p);
  c.a_eff_four = effective_area_four(pump, pump, sig, idl, OverlapConvention::full_vector, 2);
  c.gamma = gamma_fwm(nl, c.omega1, c.omega2, c.n1, c.n2, c.a_eff_four);
  return c;
}

ProcessCoefficients tospdc_coefficients(const FiberGeometry& geometry, const NonlinearContext& nl,
                                        double omega_p) {
  TransverseProfile pump(geometry, ModeId::HE12(), omega_p);
  TransverseProfile trip(geometry, ModeId::HE11(), omega_p / 3.0);
  ProcessCoefficients c;
  c.omega1 = c.omega2 = omega_p;
  c.n1 = c.n2 = geometry.core.index_at_omega(omega_p);
  c.a_eff_four = effective_area_four(pump, trip, trip, trip, OverlapConvention::full_vector, 1);
  c.gamma = gamma_pdc(nl, omega_p, c.n1, c.a_eff_four);
  return c;
}

}  // namespace pfs
