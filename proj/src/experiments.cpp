#include "pdc/experiments.hpp"

#include <chrono>
#include <cmath>
#include <limits>
#include <set>
#include <stdexcept>

#include "pdc/cumulant.hpp"
#include "pdc/roots.hpp"
#include "pdc/special_functions.hpp"

namespace pdc {
namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

}  // namespace

std::vector<double> linear_grid(double t0, double t1, int points) {
  if (points < 2 || !(t1 > t0)) throw std::invalid_argument("linear_grid: need t1 > t0 and at least 2 points");
  std::vector<double> g(static_cast<std::size_t>(points));
  for (int i = 0; i < points; ++i) g[static_cast<std::size_t>(i)] = t0 + (t1 - t0) * i / (points - 1);
  return g;
}

std::vector<double> log_grid(double t0, double t1, int points) {
  if (!(t0 > 0.0)) throw std::invalid_argument("log_grid: t0 must be positive");
  std::vector<double> g = linear_grid(std::log(t0), std::log(t1), points);
  for (auto& v : g) v = std::exp(v);
  g.front() = t0;
  g.back() = t1;
  return g;
}

std::vector<double> ExactSeries::tau() const { return column(&StandardRow::tau); }

std::vector<double> ExactSeries::column(double StandardRow::*field) const {
  std::vector<double> out;
  out.reserve(rows.size());
  for (const auto& r : rows) out.push_back(r.*field);
  return out;
}

ExactSeries run_exact(double alpha0, const std::vector<double>& grid, const ExactOptions& opt) {
  const auto start = std::chrono::steady_clock::now();
  ExactSimulation sim(alpha0, opt.sim);
  ExactSeries out;
  out.alpha0 = alpha0;
  out.cutoffs = sim.cutoffs();
  SuperposedState st;
  bool purity_live = opt.pump_purity;
  const double energy = alpha0 * alpha0;
  const SecondOrderSolution frame(alpha0);
  const double tri_end = opt.tripartite_until >= 0.0 ? opt.tripartite_until : kTripartiteSpan * frame.tau_max();
  FrameOptions fo;
  fo.max_retries = 2;
  for (double t : grid) {
    sim.advance_to(t);
    sim.fill(st);
    StandardRow r = standard_row(st, purity_live);
    if (purity_live && r.purity_p < opt.pump_purity_floor) purity_live = false;
    out.norm_error = std::max(out.norm_error, std::abs(st.norm2() - out.cutoffs.mass));
    out.conservation_error = std::max(out.conservation_error, std::abs(r.n_p + r.n_s - energy * out.cutoffs.mass));
    out.rows.push_back(r);
    if (opt.witnesses) {
      out.w4.push_back(w4(st, opt.theta));
      out.w6.push_back(w6(st, opt.theta));
    }
    if (opt.tripartite) {
      double margin = kNaN;
      if (t <= tri_end) {
        const auto p = frame.at(t);
        try {
          margin = tripartite_margin(frame_transform(st, p.alpha, p.eta, fo));
        } catch (const std::runtime_error&) {
          // frame not representable on the padded grid
        }
      }
      out.tripartite.push_back(margin);
    }
  }
  out.stats = sim.stats();
  out.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return out;
}

std::optional<double> exact_crossing(double alpha0, const std::function<double(const SuperposedState&)>& f,
                                     const std::vector<double>& scan_grid, SimulationOptions opt, double xtol) {
  ExactSimulation sim(alpha0, opt);
  SuperposedState st;
  std::optional<ExactSimulation> left;
  double prev = 0.0, prev_t = 0.0;
  for (std::size_t i = 0; i < scan_grid.size(); ++i) {
    ExactSimulation before = sim;
    sim.advance_to(scan_grid[i]);
    sim.fill(st);
    const double v = f(st);
    if (i > 0 && ((v < 0.0) != (prev < 0.0) || v == 0.0)) {
      left.emplace(std::move(before));
      break;
    }
    prev = v;
    prev_t = scan_grid[i];
    if (v == 0.0) return scan_grid[i];
  }
  if (!left) return std::nullopt;
  const double lo = prev_t, hi = sim.time();
  auto g = [&](double t) {
    ExactSimulation trial = *left;
    trial.advance_to(t);
    SuperposedState s;
    trial.fill(s);
    return f(s);
  };
  return bracketed_root(g, lo, hi, xtol);
}

std::optional<double> exact_depletion_time(double alpha0, double delta, SimulationOptions opt) {
  const double a2 = alpha0 * alpha0;
  const double approx = std::asinh(std::sqrt(delta) * alpha0) / alpha0;
  const double target = (1.0 - delta) * a2;
  auto f = [&](const SuperposedState& s) { return moment(s, Monomial::number(Mode::pump)).real() / s.norm2() - target; };
  return exact_crossing(alpha0, f, linear_grid(0.0, 3.0 * approx, 31), opt);
}

CumulantSeries run_cumulant(int order, double alpha0, const std::vector<double>& grid, const OdeOptions& opt) {
  const Monomial ns = Monomial::number(Mode::signal), np = Monomial::number(Mode::pump);
  const Monomial ap = Monomial::lowering(Mode::pump), ap2 = Monomial::lowering(Mode::pump, 2);
  const Monomial pp(2, 2, 0, 0, 0, 0), ss(0, 0, 2, 2, 0, 0);
  const std::vector<Monomial> wanted = {ns, np, ap, ap2, pp, ss};

  const MomentSystem full = generate_system(order);
  std::vector<MomentPoly> expr;
  std::vector<Monomial> targets;
  for (const auto& m : wanted) {
    expr.push_back(express_moment(m, order));
    for (const auto& d : expr.back().moments()) targets.push_back(d);
  }
  targets.push_back(ns);
  const MomentSystem sys = reduce_for_initial_state(full, targets);
  std::vector<CompiledPoly> eval;
  for (auto& e : expr) eval.emplace_back(sys, reduce_expression(sys, e), alpha0);

  CumulantSeries out;
  out.order = order;
  out.variables = sys.size();
  Trajectory<cplx> traj;
  if (sys.size() > 0) {
    traj = integrate_moments(sys, alpha0, grid, opt);
  } else {
    traj.times = grid;
    traj.states.resize(0, static_cast<Eigen::Index>(grid.size()));
    traj.status.assign(grid.size(), SegmentStatus::ok);
  }
  out.status = traj.final_status;
  out.tau = traj.times;
  for (std::size_t i = 0; i < traj.size(); ++i) {
    const VectorXc y = traj.state(i);
    const double vs = eval[0](y).real(), vp = eval[1](y).real();
    const cplx va = eval[2](y), va2 = eval[3](y);
    out.n_s.push_back(vs);
    out.var_p_p.push_back(variance_p(vp, va2, va));
    out.g2_p.push_back(vp < kPopulationFloor ? kNaN : eval[4](y).real() / (vp * vp));
    out.g2_s.push_back(vs < kPopulationFloor ? kNaN : eval[5](y).real() / (vs * vs));
    if (!out.unphysical_onset && i > 0 && vs < 0.0) {
      const double a = out.n_s[i - 1];
      out.unphysical_onset = out.tau[i - 1] + a / (a - vs) * (out.tau[i] - out.tau[i - 1]);
    }
  }
  return out;
}

std::optional<double> relative_deviation_time(const std::vector<double>& tau, const std::vector<double>& exact,
                                              const std::vector<double>& approx, double rel) {
  const std::size_t n = std::min({tau.size(), exact.size(), approx.size()});
  double prev = kNaN, prev_t = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    if (!std::isfinite(exact[i]) || exact[i] == 0.0) continue;
    const double d = std::isfinite(approx[i]) ? std::abs(approx[i] - exact[i]) / std::abs(exact[i]) - rel : INFINITY;
    if (d > 0.0) {
      if (std::isnan(prev) || !std::isfinite(d)) return tau[i];
      return prev_t + (-prev) / (d - prev) * (tau[i] - prev_t);
    }
    prev = d;
    prev_t = tau[i];
  }
  return std::nullopt;
}

std::optional<double> level_crossing(const std::vector<double>& tau, const std::vector<double>& values, double level,
                                     int direction) {
  double prev = kNaN, prev_t = 0.0;
  for (std::size_t i = 0; i < std::min(tau.size(), values.size()); ++i) {
    if (!std::isfinite(values[i])) continue;
    const double d = direction < 0 ? level - values[i] : values[i] - level;  // > 0 once past the level
    if (d > 0.0) {
      if (std::isnan(prev)) return tau[i];
      return prev_t + (-prev) / (d - prev) * (tau[i] - prev_t);
    }
    prev = d;
    prev_t = tau[i];
  }
  return std::nullopt;
}

ExactThresholds exact_thresholds(const ExactSeries& s, double delta) {
  const auto tau = s.tau();
  ExactThresholds t;
  t.squeezing = level_crossing(tau, s.column(&StandardRow::var_p_p), 0.5 * (1.0 - delta), -1);
  const double floor = 1.0 / (s.cutoffs.high + 1.0);
  t.entanglement = level_crossing(tau, s.column(&StandardRow::purity_p), 1.0 - delta * (1.0 - floor), -1);
  t.g2_pump = level_crossing(tau, s.column(&StandardRow::g2_p), 1.0 + delta, +1);
  t.g2_signal = level_crossing(tau, s.column(&StandardRow::g2_s), 2.0 * (1.0 - delta), -1);
  return t;
}

double default_tau_end(double alpha0) { return 1.3 * tau_max(alpha0).exact; }

}  // namespace pdc
