#include "pfs/sellmeier.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include "pfs/constants.hpp"

namespace pfs {

OutOfValidityRange::OutOfValidityRange(double lam, double lo, double hi)
    : std::domain_error("wavelength " + std::to_string(lam) + " um outside Sellmeier validity window [" +
                        std::to_string(lo) + ", " + std::to_string(hi) + "] um"),
      lambda_um(lam) {}

SellmeierModel::SellmeierModel(std::string name, std::array<double, 3> b, std::array<double, 3> c_um2,
                               double lambda_min_um, double lambda_max_um)
    : name_(std::move(name)), b_(b), c_um2_(c_um2), lambda_min_um_(lambda_min_um), lambda_max_um_(lambda_max_um) {
  if (lambda_min_um_ <= 0 || lambda_max_um_ <= lambda_min_um_)
    throw std::invalid_argument("SellmeierModel: bad validity window");
}

SellmeierModel SellmeierModel::fused_silica() {
  // Malitson, JOSA 55, 1205 (1965); 20 C.
  return SellmeierModel("fused-silica-malitson",
                        {0.6961663, 0.4079426, 0.8974794},
                        {0.0684043 * 0.0684043, 0.1162414 * 0.1162414, 9.896161 * 9.896161},
                        0.21, 3.71);
}

SellmeierModel SellmeierModel::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("SellmeierModel::load: cannot open " + path);
  std::string name = "unnamed";
  std::array<double, 3> b{}, c{};
  double lo = 0, hi = 0;
  std::string line;
  while (std::getline(in, line)) {
    auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    auto eq = line.find('=');
    if (eq == std::string::npos) continue;
    std::string key = line.substr(0, eq);
    std::string val = line.substr(eq + 1);
    auto trim = [](std::string& s) {
      s.erase(0, s.find_first_not_of(" \t\r"));
      auto e = s.find_last_not_of(" \t\r");
      s.erase(e == std::string::npos ? 0 : e + 1);
    };
    trim(key);
    trim(val);
    if (key == "name") name = val;
    else if (key == "B1") b[0] = std::stod(val);
    else if (key == "B2") b[1] = std::stod(val);
    else if (key == "B3") b[2] = std::stod(val);
    else if (key == "C1") c[0] = std::stod(val);
    else if (key == "C2") c[1] = std::stod(val);
    else if (key == "C3") c[2] = std::stod(val);
    else if (key == "lambda_min_um") lo = std::stod(val);
    else if (key == "lambda_max_um") hi = std::stod(val);
    else throw std::runtime_error("SellmeierModel::load: unknown key '" + key + "' in " + path);
  }
  return SellmeierModel(name, b, c, lo, hi);
}

double SellmeierModel::index_at_lambda_um(double lambda_um) const {
  if (!(lambda_um >= lambda_min_um_ && lambda_um <= lambda_max_um_))
    throw OutOfValidityRange(lambda_um, lambda_min_um_, lambda_max_um_);
  const double l2 = lambda_um * lambda_um;
  double n2 = 1.0;
  for (int i = 0; i < 3; ++i) n2 += b_[i] * l2 / (l2 - c_um2_[i]);
  return std::sqrt(n2);
}

double SellmeierModel::index_at_omega(double omega) const {
  return index_at_lambda_um(lambda_from_omega(omega) * 1e6);
}

double SellmeierModel::dn_dlambda_um(double lambda_um) const {
  double h = 1e-4 * lambda_um;
  double lo = lambda_um - h, hi = lambda_um + h;
  if (lo < lambda_min_um_) lo = lambda_min_um_;
  if (hi > lambda_max_um_) hi = lambda_max_um_;
  return (index_at_lambda_um(hi) - index_at_lambda_um(lo)) / (hi - lo);
}

double SellmeierModel::group_index(double lambda_um) const {
  return index_at_lambda_um(lambda_um) - lambda_um * dn_dlambda_um(lambda_um);
}

}  // namespace pfs
