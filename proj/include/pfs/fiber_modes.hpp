#ifndef PFS_FIBER_MODES_HPP
#define PFS_FIBER_MODES_HPP

#include <stdexcept>
#include <vector>

#include "pfs/sellmeier.hpp"

namespace pfs {

class ModeCutoff : public std::runtime_error {
 public:
  explicit ModeCutoff(const std::string& what) : std::runtime_error(what) {}
};

class ConvergenceFailure : public std::runtime_error {
 public:
  explicit ConvergenceFailure(const std::string& what) : std::runtime_error(what) {}
};

// Air-clad step-index cylinder: fused-silica (or substitute) core, constant cladding index.
struct FiberGeometry {
  double core_radius;          // m
  SellmeierModel core;
  double cladding_index = 1.0;

  FiberGeometry(double r, SellmeierModel core_model, double n_clad = 1.0)
      : core_radius(r), core(std::move(core_model)), cladding_index(n_clad) {
    if (!(r > 0)) throw std::invalid_argument("FiberGeometry: core radius must be positive");
  }
};

// Only the HE1n hybrid family is supported (azimuthal order 1, radial order 1 or 2).
struct ModeId {
  int azimuthal_order = 1;  // m
  int radial_order = 1;     // n in HE_mn

  static ModeId HE11() { return {1, 1}; }
  static ModeId HE12() { return {1, 2}; }

  void validate() const {
    if (azimuthal_order != 1 || (radial_order != 1 && radial_order != 2))
      throw std::invalid_argument("ModeId: only HE11 and HE12 are supported");
  }
  bool operator==(const ModeId&) const = default;
};

// Propagation constant of the requested HE1n mode at angular frequency omega.
// Roots of the exact vector characteristic equation, bracketed on an n_eff scan
// and refined by bisection to |dn_eff| < 1e-10.
double solve_mode(const FiberGeometry& geometry, ModeId mode, double omega);

// Exact-mode solution parameters at one frequency; enough to reconstruct the
// transverse field pattern.
struct ModeSolution {
  double omega;
  double beta;     // rad/m
  double n_eff;
  double u, w;     // normalized transverse wavenumbers (dimensionless)
  double s_par;    // hybrid-mode Hz/Ez amplitude ratio parameter
  double n_core;
};

ModeSolution solve_mode_full(const FiberGeometry& geometry, ModeId mode, double omega);

// Normalized transverse field profile of a guided HE1n mode.
// Two scalarizations of the vector field are available: the x-polarized field
// component Ex (signed; default, matches a linearly polarized source) and the
// full transverse magnitude sqrt(Er^2 + Etheta^2).
enum class ProfileScalarization { polarized_component, transverse_magnitude };

class TransverseProfile {
 public:
  TransverseProfile(const FiberGeometry& geometry, ModeId mode, double omega,
                    ProfileScalarization scal = ProfileScalarization::polarized_component);

  // Scalar field A(r, theta) in 1/m, normalized so that the transverse-plane
  // integral of A^2 equals 1 (to quadrature tolerance).
  double field(double r_m, double theta) const;

  // Radial components before azimuthal assembly: Er = fr(r) cos(theta),
  // Etheta = ftheta(r) sin(theta), in the same normalization as field().
  void radial_components(double r_m, double& fr, double& ftheta) const;

  // Longitudinal component amplitude fz(r): Ez = i fz(r) cos(theta) in the
  // frame where the transverse components are real.  Same scale as fr/ftheta.
  double longitudinal_component(double r_m) const;

  double core_radius() const { return a_; }
  double omega() const { return sol_.omega; }
  ModeId mode() const { return mode_; }
  const ModeSolution& solution() const { return sol_; }
  ProfileScalarization scalarization() const { return scal_; }

  // Fraction of A^2 inside the core.
  double core_fraction() const;

 private:
  ModeId mode_;
  ModeSolution sol_;
  double a_;
  ProfileScalarization scal_;
  double b_over_a_;   // Hz/Ez amplitude ratio times omega*mu0/beta terms folded in
  double jm_u_, km_w_;
  double norm_;       // 1/sqrt(integral of unnormalized A^2)
};

// Tabulated beta(omega) with a cubic-spline interpolant.
class ModeDispersion {
 public:
  ModeDispersion(const FiberGeometry& geometry, ModeId mode, double omega_min, double omega_max,
                 int n_samples, bool parallel = true);

  double beta(double omega) const;     // rad/m
  double n_eff(double omega) const;
  double k1(double omega) const;       // d beta / d omega, s/m

  double omega_min() const { return omega_.front(); }
  double omega_max() const { return omega_.back(); }
  bool covers(double omega) const { return omega >= omega_.front() && omega <= omega_.back(); }

  const std::vector<double>& omegas() const { return omega_; }
  const std::vector<double>& betas() const { return beta_; }

  ModeId mode() const { return mode_; }

  // CSV rows: omega, lambda_um, n_eff, k1.
  void export_csv(const std::string& path) const;

 private:
  ModeId mode_;
  std::vector<double> omega_, beta_, d2beta_;  // natural cubic spline
  void check_range(double omega) const;
};

}  // namespace pfs

#endif
