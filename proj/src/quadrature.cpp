#include "pfs/quadrature.hpp"

#include <map>
#include <mutex>

namespace pfs {

static GaussRule make_gauss(int n) {
  if (n < 1) throw std::invalid_argument("gauss_legendre: order must be >= 1");
  GaussRule r;
  r.x.resize(n);
  r.w.resize(n);
  const double eps = 1e-15;
  const int m = (n + 1) / 2;
  for (int i = 0; i < m; ++i) {
    // Chebyshev-based initial guess for the i-th root.
    double x = std::cos(M_PI * (i + 0.75) / (n + 0.5));
    double pp = 0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0, p1 = 0.0;
      for (int j = 0; j < n; ++j) {
        double p2 = p1;
        p1 = p0;
        p0 = ((2 * j + 1) * x * p1 - j * p2) / (j + 1);
      }
      pp = n * (x * p0 - p1) / (x * x - 1.0);
      double dx = p0 / pp;
      x -= dx;
      if (std::abs(dx) < eps) break;
    }
    r.x[i] = -x;
    r.x[n - 1 - i] = x;
    r.w[i] = r.w[n - 1 - i] = 2.0 / ((1.0 - x * x) * pp * pp);
  }
  return r;
}

const GaussRule& gauss_legendre(int n) {
  static std::map<int, GaussRule> cache;
  static std::mutex mtx;
  std::lock_guard<std::mutex> lock(mtx);
  auto it = cache.find(n);
  if (it == cache.end()) it = cache.emplace(n, make_gauss(n)).first;
  return it->second;
}

}  // namespace pfs
