#ifndef PDC_ROOTS_HPP
#define PDC_ROOTS_HPP

#include <cmath>
#include <optional>
#include <stdexcept>

namespace pdc {

/// Root of f on [a, b] with f(a), f(b) of opposite sign. Secant steps (Illinois variant)
/// guarded by bisection whenever the secant stalls or leaves the bracket.
template <class F>
double bracketed_root(F&& f, double a, double b, double xtol = 1e-12, int max_iter = 200) {
  double fa = f(a), fb = f(b);
  if (fa == 0.0) return a;
  if (fb == 0.0) return b;
  if ((fa > 0) == (fb > 0)) throw std::invalid_argument("bracketed_root: no sign change on bracket");
  int side = 0;
  for (int it = 0; it < max_iter && std::abs(b - a) > xtol; ++it) {
    double x = (a * fb - b * fa) / (fb - fa);
    const double width = std::abs(b - a);
    if (!(x > std::min(a, b) && x < std::max(a, b)) || it % 4 == 3) x = 0.5 * (a + b);
    const double fx = f(x);
    if (fx == 0.0) return x;
    if ((fx > 0) == (fb > 0)) {
      b = x;
      fb = fx;
      if (side == -1) fa *= 0.5;
      side = -1;
    } else {
      a = x;
      fa = fx;
      if (side == 1) fb *= 0.5;
      side = 1;
    }
    if (std::abs(b - a) > 0.99 * width) {
      const double mid = 0.5 * (a + b);
      const double fm = f(mid);
      if (fm == 0.0) return mid;
      if ((fm > 0) == (fb > 0)) {
        b = mid;
        fb = fm;
      } else {
        a = mid;
        fa = fm;
      }
    }
  }
  return 0.5 * (a + b);
}

/// Scans x0, x0*growth, ... up to xmax for the first sign change of f relative to f(0+)
/// and refines it; nullopt if none is found.
template <class F>
std::optional<double> first_root_by_scan(F&& f, double lo, double x0, double xmax, double growth = 1.25,
                                         double xtol = 1e-14) {
  const double flo = f(lo);
  double prev = lo;
  for (double x = x0; x <= xmax * growth; x *= growth) {
    const double xc = std::min(x, xmax);
    const double fx = f(xc);
    if ((fx > 0) != (flo > 0) || fx == 0.0) return bracketed_root(f, prev, xc, xtol);
    prev = xc;
    if (xc == xmax) break;
  }
  return std::nullopt;
}

}  // namespace pdc

#endif  // PDC_ROOTS_HPP
