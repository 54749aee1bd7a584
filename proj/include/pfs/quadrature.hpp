#ifndef PFS_QUADRATURE_HPP
#define PFS_QUADRATURE_HPP

#include <cmath>
#include <functional>
#include <stdexcept>
#include <vector>

namespace pfs {

// Gauss-Legendre nodes/weights on [-1, 1], computed by Newton iteration on
// Legendre polynomials; cached per order.
struct GaussRule {
  std::vector<double> x, w;
};

const GaussRule& gauss_legendre(int n);

// Integrate f over [a, b] with an n-point Gauss-Legendre rule.
template <typename F>
double gauss_integrate(F&& f, double a, double b, int n) {
  const GaussRule& g = gauss_legendre(n);
  const double mid = 0.5 * (a + b), half = 0.5 * (b - a);
  double sum = 0;
  for (int i = 0; i < n; ++i) sum += g.w[i] * f(mid + half * g.x[i]);
  return sum * half;
}

namespace detail {
template <typename F>
double adaptive_simpson_rec(F& f, double a, double b, double fa, double fm, double fb, double whole,
                            double tol, int depth) {
  const double m = 0.5 * (a + b);
  const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
  const double flm = f(lm), frm = f(rm);
  const double left = (m - a) / 6.0 * (fa + 4 * flm + fm);
  const double right = (b - m) / 6.0 * (fm + 4 * frm + fb);
  const double delta = left + right - whole;
  if (depth <= 0 || std::abs(delta) <= 15.0 * tol) return left + right + delta / 15.0;
  return adaptive_simpson_rec(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
         adaptive_simpson_rec(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
}
}  // namespace detail

// Adaptive Simpson with absolute tolerance tol.
template <typename F>
double adaptive_simpson(F&& f, double a, double b, double tol, int max_depth = 48) {
  if (a == b) return 0.0;
  const double m = 0.5 * (a + b);
  const double fa = f(a), fm = f(m), fb = f(b);
  const double whole = (b - a) / 6.0 * (fa + 4 * fm + fb);
  return detail::adaptive_simpson_rec(f, a, b, fa, fm, fb, whole, tol, max_depth);
}

// Adaptive Simpson with a relative tolerance: a coarse pass sets the scale.
template <typename F>
double adaptive_simpson_rel(F&& f, double a, double b, double rel_tol, int max_depth = 48) {
  double coarse = 0;
  const int n0 = 64;
  const double h = (b - a) / n0;
  for (int i = 0; i < n0; ++i) coarse += std::abs(f(a + (i + 0.5) * h)) * h;
  const double tol = (coarse > 0 ? coarse : 1.0) * rel_tol;
  return adaptive_simpson(f, a, b, tol, max_depth);
}

}  // namespace pfs

#endif
