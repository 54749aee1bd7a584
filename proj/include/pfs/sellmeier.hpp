#ifndef PFS_SELLMEIER_HPP
#define PFS_SELLMEIER_HPP

#include <array>
#include <stdexcept>
#include <string>

namespace pfs {

// Raised when a refractive-index evaluation falls outside the fitted window.
class OutOfValidityRange : public std::domain_error {
 public:
  OutOfValidityRange(double lambda_um, double lo_um, double hi_um);
  double lambda_um;
};

// Three-term Sellmeier fit: n^2(lambda) = 1 + sum B_i lambda^2 / (lambda^2 - C_i),
// lambda in micrometres, C_i in um^2.  Evaluation outside [lambda_min, lambda_max]
// throws OutOfValidityRange; there is no silent extrapolation.
class SellmeierModel {
 public:
  SellmeierModel(std::string name, std::array<double, 3> b, std::array<double, 3> c_um2,
                 double lambda_min_um, double lambda_max_um);

  // Fused silica at room temperature (Malitson-type coefficients).
  static SellmeierModel fused_silica();

  // Parse from a small key=value text file (name, B1..B3, C1..C3, window).
  static SellmeierModel load(const std::string& path);

  double index_at_lambda_um(double lambda_um) const;
  double index_at_omega(double omega) const;  // rad/s

  // d n / d lambda (per um), central finite difference clamped to the window.
  double dn_dlambda_um(double lambda_um) const;

  // Group index n_g = n - lambda dn/dlambda.
  double group_index(double lambda_um) const;

  const std::string& name() const { return name_; }
  double lambda_min_um() const { return lambda_min_um_; }
  double lambda_max_um() const { return lambda_max_um_; }
  const std::array<double, 3>& b() const { return b_; }
  const std::array<double, 3>& c_um2() const { return c_um2_; }

 private:
  std::string name_;
  std::array<double, 3> b_;
  std::array<double, 3> c_um2_;
  double lambda_min_um_;
  double lambda_max_um_;
};

}  // namespace pfs

#endif
