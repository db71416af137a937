#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

#include "pdc/roots.hpp"
#include "pdc/special_functions.hpp"

namespace pdc {
namespace {

constexpr int kMaxAgm = 32;

// sn, cn, dn for 0 < m < 1 by the descending AGM sequence.
JacobiTriple jacobi_agm(double u, double m, double m1) {
  double a[kMaxAgm + 1], c[kMaxAgm + 1];
  a[0] = 1.0;
  double b = std::sqrt(m1);
  c[0] = std::sqrt(m);
  int n = 0;
  while (std::abs(c[n]) > 1e-17 * a[n] && n < kMaxAgm) {
    a[n + 1] = 0.5 * (a[n] + b);
    c[n + 1] = 0.5 * (a[n] - b);
    b = std::sqrt(a[n] * b);
    ++n;
  }
  double phi = std::ldexp(a[n] * u, n);
  for (int k = n; k > 0; --k) phi = 0.5 * (phi + std::asin(c[k] / a[k] * std::sin(phi)));
  const double sn = std::sin(phi);
  const double cn = std::cos(phi);
  return {sn, cn, std::sqrt(m1 + m * cn * cn)};
}

}  // namespace

JacobiTriple jacobi_elliptic(double u, double m, double m1) {
  if (m < 0.0 || m1 < 0.0) throw std::domain_error("jacobi_elliptic: use the single-parameter overload");
  if (u == 0.0) return {0.0, 1.0, 1.0};
  if (m == 0.0) return {std::sin(u), std::cos(u), 1.0};
  if (m1 == 0.0) {
    const double sech = 1.0 / std::cosh(u);
    return {std::tanh(u), sech, sech};
  }
  return jacobi_agm(u, m, m1);
}

JacobiTriple jacobi_elliptic(double u, double m) {
  if (m < 0.0) {
    // negative parameter: map to mu = -m/(1-m) in (0,1)
    const double mu = -m / (1.0 - m);
    const double mu1 = 1.0 / (1.0 - m);
    const JacobiTriple t = jacobi_elliptic(u * std::sqrt(1.0 - m), mu, mu1);
    return {std::sqrt(mu1) * t.sn / t.dn, t.cn / t.dn, 1.0 / t.dn};
  }
  if (m > 1.0) {
    // reciprocal modulus
    const double k = std::sqrt(m);
    const JacobiTriple t = jacobi_elliptic(u * k, 1.0 / m, (m - 1.0) / m);
    return {t.sn / k, t.dn, t.cn};
  }
  return jacobi_elliptic(u, m, 1.0 - m);
}

double ellint_k_complement(double m1) {
  if (m1 <= 0.0) throw std::domain_error("ellint_k: parameter must be < 1");
  double a = 1.0, b = std::sqrt(m1);
  for (int i = 0; i < kMaxAgm && std::abs(a - b) > 4.0 * std::numeric_limits<double>::epsilon() * a; ++i) {
    const double an = 0.5 * (a + b);
    b = std::sqrt(a * b);
    a = an;
  }
  return std::numbers::pi / (a + b);
}

double ellint_k(double m) { return ellint_k_complement(1.0 - m); }

double ellint_k_real_part(double m) {
  if (m <= 1.0) throw std::domain_error("ellint_k_real_part: parameter must be > 1");
  return ellint_k_complement((m - 1.0) / m) / std::sqrt(m);
}

SecondOrderSolution::SecondOrderSolution(double alpha0) : alpha0_(alpha0) {
  if (!(alpha0 > 0.0)) throw std::domain_error("SecondOrderSolution: alpha0 must be positive");
  const double a2 = alpha0 * alpha0;
  param_ = a2 / (a2 + 1.0);
  param_c_ = 1.0 / (a2 + 1.0);
  rate_ = std::sqrt(a2 + 1.0);
  quarter_period_ = ellint_k_complement(param_c_);
}

// dn(i t a0 | -1/a0^2) = dc(t a0 | 1 + 1/a0^2) and sn(i u | m) = i sc(u | 1 - m); the
// parameter 1 + 1/a0^2 is then brought into (0,1) by the reciprocal-modulus step, which
// leaves argument v = t sqrt(a0^2 + 1) and parameter a0^2/(a0^2 + 1).
SecondOrderSolution::Point SecondOrderSolution::at(double tau) const {
  const double v = tau * rate_;
  const JacobiTriple j = jacobi_elliptic(v, param_, param_c_);
  const double sinh_eta = std::sqrt(param_) * j.sn / j.dn;
  return {std::asinh(sinh_eta), alpha0_ * j.cn / j.dn, v > 4.0 * quarter_period_};
}

double SecondOrderSolution::signal_population(double tau) const {
  const double v = tau * rate_;
  const JacobiTriple j = jacobi_elliptic(v, param_, param_c_);
  const double sinh_eta = std::sqrt(param_) * j.sn / j.dn;
  return sinh_eta * sinh_eta;
}

double SecondOrderSolution::tau_max() const { return quarter_period_ / rate_; }

TauMax tau_max(double alpha0) {
  const double m = 1.0 + 1.0 / (alpha0 * alpha0);
  const double exact = ellint_k_real_part(m) / alpha0;
  return {exact, std::log(4.0 * alpha0) / alpha0};
}

DepletionTime depletion_time(double alpha0, double delta) {
  if (!(delta > 0.0 && delta < 1.0)) throw std::domain_error("depletion_time: delta must lie in (0,1)");
  const SecondOrderSolution sol(alpha0);
  const double target = (1.0 - delta) * alpha0 * alpha0;
  auto f = [&](double t) {
    const double a = sol.at(t).alpha;
    return a * a - target;
  };
  const double exact = bracketed_root(f, 0.0, sol.tau_max(), 1e-13);
  return {std::asinh(std::sqrt(delta) * alpha0) / alpha0, exact};
}

ThresholdTimes threshold_times(double alpha0, double delta) {
  const double a2 = alpha0 * alpha0, a4 = a2 * a2, a6 = a4 * a2;
  auto sixth = [&](double t) {
    const double x = t * t;
    return ((a4 / 45.0 - a2 / 18.0) * x + a2 / 6.0) * x * x - 0.5 * delta;
  };
  auto eighth = [&](double t) {
    const double x = t * t;
    return ((4.0 * a6 / 45.0 - 2.0 * a4 / 9.0) * x + 2.0 * a4 / 9.0) * x * x * x - delta;
  };
  ThresholdTimes out;
  out.squeezing = first_root_by_scan(sixth, 0.0, 1e-6, 100.0, 1.05);
  out.entanglement = first_root_by_scan(eighth, 0.0, 1e-6, 100.0, 1.05);
  out.squeezing_asymptote = std::pow(180.0 * delta, 1.0 / 6.0) / std::sqrt(2.0) * std::pow(alpha0, -2.0 / 3.0);
  out.entanglement_asymptote = std::pow(1.5, 0.25) * std::pow(5.0 * delta, 0.125) * std::pow(alpha0, -0.75);
  return out;
}

}  // namespace pdc
