#ifndef PDC_ODE_HPP
#define PDC_ODE_HPP

#include <Eigen/Core>
#include <algorithm>
#include <cmath>
#include <complex>
#include <functional>
#include <optional>
#include <stdexcept>
#include <vector>

namespace pdc {

enum class SegmentStatus { ok, unphysical, step_failure };

template <class Scalar>
struct Trajectory {
  using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;
  std::vector<double> times;  // the requested grid points actually reached
  Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> states;  // variables x times
  std::vector<SegmentStatus> status;  // one per reached grid point
  SegmentStatus final_status = SegmentStatus::ok;
  long steps = 0;
  long rejected = 0;

  std::size_t size() const { return times.size(); }
  bool complete(std::size_t requested) const { return times.size() == requested; }
  Vector state(std::size_t i) const { return states.col(static_cast<Eigen::Index>(i)); }
};

struct OdeOptions {
  double rtol = 1e-10;
  double atol = 1e-12;
  double initial_step = 0.0;  // 0 picks one from the derivative scale
  double min_step_rel = 1e-14;
  long max_steps = 10'000'000;
};

namespace detail {

inline double abs2(double x) { return x * x; }
inline double abs2(const std::complex<double>& z) { return std::norm(z); }
inline bool finite(double x) { return std::isfinite(x); }
inline bool finite(const std::complex<double>& z) { return std::isfinite(z.real()) && std::isfinite(z.imag()); }

}  // namespace detail

/// Dormand-Prince 5(4) with PI step control and 4th-order dense output at the
/// requested grid (which must be increasing; grid[0] is the initial time).
/// `rhs(t, y, dy)` fills dy. `physical(y)` marks grid points as unphysical when false.
template <class Scalar, class Rhs>
Trajectory<Scalar> integrate(Rhs&& rhs, const Eigen::Matrix<Scalar, Eigen::Dynamic, 1>& y0,
                             const std::vector<double>& grid, const OdeOptions& opt = {},
                             const std::function<bool(const Eigen::Matrix<Scalar, Eigen::Dynamic, 1>&)>& physical = {}) {
  using Vec = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;
  if (grid.empty()) throw std::invalid_argument("integrate: empty grid");
  for (std::size_t i = 1; i < grid.size(); ++i)
    if (!(grid[i] > grid[i - 1])) throw std::invalid_argument("integrate: grid must be strictly increasing");
  if (!(opt.rtol > 0.0) || !(opt.atol > 0.0)) throw std::invalid_argument("integrate: tolerances must be positive");

  constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
  constexpr double a21 = 1.0 / 5;
  constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
  constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
  constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561, a54 = -212.0 / 729;
  constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                   a65 = -5103.0 / 18656;
  constexpr double a71 = 35.0 / 384, a73 = 500.0 / 1113, a74 = 125.0 / 192, a75 = -2187.0 / 6784,
                   a76 = 11.0 / 84;
  constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920, e5 = -17253.0 / 339200,
                   e6 = 22.0 / 525, e7 = -1.0 / 40;
  constexpr double d1 = -12715105075.0 / 11282082432.0, d3 = 87487479700.0 / 32700410799.0,
                   d4 = -10690763975.0 / 1880347072.0, d5 = 701980252875.0 / 199316789632.0,
                   d6 = -1453857185.0 / 822651844.0, d7 = 69997945.0 / 29380423.0;

  const Eigen::Index n = y0.size();
  Trajectory<Scalar> out;
  out.states.resize(n, static_cast<Eigen::Index>(grid.size()));
  auto record = [&](double t, const Vec& y) {
    const auto col = static_cast<Eigen::Index>(out.times.size());
    out.states.col(col) = y;
    out.times.push_back(t);
    out.status.push_back(physical && !physical(y) ? SegmentStatus::unphysical : SegmentStatus::ok);
  };

  double t = grid.front();
  Vec y = y0, k1(n), k2(n), k3(n), k4(n), k5(n), k6(n), k7(n), ynew(n), tmp(n), err(n);
  rhs(t, y, k1);
  record(t, y);
  if (grid.size() == 1) {
    out.states.conservativeResize(n, 1);
    return out;
  }

  auto error_norm = [&](const Vec& a, const Vec& b, const Vec& e) {
    double s = 0.0;
    for (Eigen::Index i = 0; i < n; ++i) {
      const double sc = opt.atol + opt.rtol * std::max(std::sqrt(detail::abs2(a[i])), std::sqrt(detail::abs2(b[i])));
      s += detail::abs2(e[i]) / (sc * sc);
    }
    return n ? std::sqrt(s / static_cast<double>(n)) : 0.0;
  };

  const double t_end = grid.back();
  double h = opt.initial_step;
  if (h <= 0.0) {
    const Vec zero = Vec::Zero(n);
    const double d0 = error_norm(y, zero, y), d1n = error_norm(y, zero, k1);
    h = (d0 < 1e-5 || d1n < 1e-5) ? 1e-6 : 0.01 * d0 / d1n;
    h = std::min(h, (t_end - t) * 0.1);
  }
  double err_old = 1e-4;
  std::size_t next = 1;
  bool rejected_last = false;

  while (next < grid.size()) {
    if (out.steps + out.rejected >= opt.max_steps || h < opt.min_step_rel * std::max(1.0, std::abs(t))) {
      out.final_status = SegmentStatus::step_failure;
      break;
    }
    h = std::min(h, t_end - t);
    tmp = y + h * a21 * k1;
    rhs(t + c2 * h, tmp, k2);
    tmp = y + h * (a31 * k1 + a32 * k2);
    rhs(t + c3 * h, tmp, k3);
    tmp = y + h * (a41 * k1 + a42 * k2 + a43 * k3);
    rhs(t + c4 * h, tmp, k4);
    tmp = y + h * (a51 * k1 + a52 * k2 + a53 * k3 + a54 * k4);
    rhs(t + c5 * h, tmp, k5);
    tmp = y + h * (a61 * k1 + a62 * k2 + a63 * k3 + a64 * k4 + a65 * k5);
    rhs(t + h, tmp, k6);
    ynew = y + h * (a71 * k1 + a73 * k3 + a74 * k4 + a75 * k5 + a76 * k6);
    rhs(t + h, ynew, k7);
    err = h * (e1 * k1 + e3 * k3 + e4 * k4 + e5 * k5 + e6 * k6 + e7 * k7);
    double en = error_norm(y, ynew, err);
    bool finite = std::isfinite(en);
    for (Eigen::Index i = 0; finite && i < n; ++i) finite = detail::finite(ynew[i]);
    if (!finite) {
      h *= 0.1;
      rejected_last = true;
      ++out.rejected;
      continue;
    }
    if (en <= 1.0) {
      const double tnew = t + h;
      // dense output on the accepted step
      while (next < grid.size() && grid[next] <= tnew) {
        const double s = (grid[next] - t) / h, s1 = 1.0 - s;
        const Vec dy = ynew - y;
        const Vec b = h * k1 - dy;
        const Vec r4 = dy - h * k7 - b;
        const Vec r5 = h * (d1 * k1 + d3 * k3 + d4 * k4 + d5 * k5 + d6 * k6 + d7 * k7);
        record(grid[next], grid[next] == tnew ? ynew : Vec(y + s * (dy + s1 * (b + s * (r4 + s1 * r5)))));
        ++next;
      }
      t = tnew;
      y = ynew;
      k1 = k7;
      ++out.steps;
      double fac = std::pow(std::max(en, 1e-10), 0.2 - 0.04 * 0.75) * std::pow(err_old, -0.04) / 0.9;
      fac = std::clamp(fac, 0.1, 5.0);
      if (rejected_last) fac = std::max(fac, 1.0);
      h /= fac;
      err_old = std::max(en, 1e-4);
      rejected_last = false;
    } else {
      h /= std::min(5.0, std::pow(en, 0.2) / 0.9);
      rejected_last = true;
      ++out.rejected;
    }
  }
  out.states.conservativeResize(n, static_cast<Eigen::Index>(out.times.size()));
  return out;
}

/// First crossing of g through zero along the trajectory (sign change between neighbouring
/// grid points, or an exact zero after a nonzero value), linearly interpolated.
template <class Scalar, class G>
std::optional<double> detect_event(const Trajectory<Scalar>& traj, G&& g) {
  if (traj.size() == 0) return std::nullopt;
  double prev = g(traj.state(0));
  for (std::size_t i = 1; i < traj.size(); ++i) {
    const double cur = g(traj.state(i));
    if (cur == 0.0 && prev != 0.0) return traj.times[i];
    if ((cur < 0.0 && prev > 0.0) || (cur > 0.0 && prev < 0.0)) {
      const double w = prev / (prev - cur);
      return traj.times[i - 1] + w * (traj.times[i] - traj.times[i - 1]);
    }
    prev = cur;
  }
  return std::nullopt;
}

/// Sampled-series version: first crossing of values through zero.
std::optional<double> first_crossing(const std::vector<double>& times, const std::vector<double>& values);

}  // namespace pdc

#endif  // PDC_ODE_HPP
