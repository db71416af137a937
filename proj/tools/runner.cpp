#include "runner.hpp"

#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <limits>
#include <ostream>

#include "pdc/experiments.hpp"
#include "pdc/moment_system.hpp"
#include "pdc/parallel.hpp"
#include "pdc/perturbation.hpp"
#include "pdc/roots.hpp"
#include "pdc/special_functions.hpp"
#include "pdc/system_text.hpp"
#include "pdc/version.hpp"

namespace pdc::cli {
namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

std::string tag(double a2) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "a%g", a2);
  return buf;
}

json opt(const std::optional<double>& v) { return v ? json(*v) : json(nullptr); }
double val(const std::optional<double>& v) { return v.value_or(kNaN); }

json fit_json(const std::vector<double>& alpha0, const std::vector<double>& t) {
  std::vector<double> x, y;
  for (std::size_t i = 0; i < t.size(); ++i)
    if (std::isfinite(t[i]) && t[i] > 0.0) x.push_back(alpha0[i]), y.push_back(t[i]);
  if (x.size() < 4) return {{"error", "fewer than 4 usable points"}};
  const PowerLawFit f = powerlaw_fit(x, y);
  return {{"exponent", f.exponent}, {"prefactor", f.prefactor}, {"stderr", f.stderr_exponent}, {"points", x.size()}};
}

/// Runs `point(alpha2, sim_jobs)` for every alpha2. With several workers and several points
/// the points are spread over the pool and each simulation runs single-threaded.
template <class R>
std::vector<R> map_points(const ExperimentConfig& c, const std::function<R(double, int)>& point) {
  const int jobs = resolve_jobs(c.jobs);
  std::vector<R> out(c.alpha2.size());
  if (jobs > 1 && c.alpha2.size() > 1) {
    parallel_for(c.alpha2.size(), jobs, [&](std::size_t i) { out[i] = point(c.alpha2[i], 1); });
  } else {
    for (std::size_t i = 0; i < c.alpha2.size(); ++i) out[i] = point(c.alpha2[i], c.jobs);
  }
  return out;
}

std::vector<double> grid_for(const ExperimentConfig& c, double default_max) {
  return make_grid(c.tau, default_max, c.seed);
}

json intervals(const std::vector<double>& tau, const std::function<bool(std::size_t)>& on) {
  json out = json::array();
  double start = 0.0;
  bool open = false;
  for (std::size_t i = 0; i < tau.size(); ++i) {
    if (on(i) && !open) start = tau[i], open = true;
    if (!on(i) && open) {
      out.push_back({start, tau[i - 1]});
      open = false;
    }
  }
  if (open) out.push_back({start, tau.back()});
  return out;
}

std::vector<double> values(const std::vector<WitnessValue>& w, double WitnessValue::*f) {
  std::vector<double> out;
  for (const auto& x : w) out.push_back(x.*f);
  return out;
}

// --- single-purpose runs -------------------------------------------------------------------------

struct ExactPoint {
  ExactSeries series;
  std::vector<double> grid;
};

ExperimentResult run_simulate(const ExperimentConfig& c) {
  ExperimentResult r;
  auto pts = map_points<ExactPoint>(c, [&](double a2, int jobs) {
    const double a0 = std::sqrt(a2);
    ExactOptions eo;
    eo.sim.jobs = jobs;
    auto g = grid_for(c, default_tau_end(a0));
    return ExactPoint{run_exact(a0, g, eo), g};
  });
  r.summary["points"] = json::array();
  for (std::size_t i = 0; i < pts.size(); ++i) {
    const ExactSeries& s = pts[i].series;
    CsvTable t(s.tau());
    const auto names = standard_columns();
    for (std::size_t col = 1; col < names.size(); ++col) {
      std::vector<double> v;
      for (const auto& row : s.rows) v.push_back(standard_values(row)[col]);
      t.add(names[col], v);
    }
    r.files.push_back({"exact_" + tag(c.alpha2[i]) + ".csv", t.str(), PlotOptions{"exact " + tag(c.alpha2[i])}});
    const auto th = exact_thresholds(s, c.delta);
    r.summary["points"].push_back({{"alpha2", c.alpha2[i]},
                                   {"cutoffs", {s.cutoffs.low, s.cutoffs.high}},
                                   {"window_mass", s.cutoffs.mass},
                                   {"norm_error", s.norm_error},
                                   {"conservation_error", s.conservation_error},
                                   {"signal_maxima", local_maxima(s.tau(), s.column(&StandardRow::n_s))},
                                   {"thresholds",
                                    {{"squeezing", opt(th.squeezing)},
                                     {"entanglement", opt(th.entanglement)},
                                     {"g2_pump", opt(th.g2_pump)},
                                     {"g2_signal", opt(th.g2_signal)}}}});
    r.timings.emplace_back("exact_" + tag(c.alpha2[i]), s.seconds);
  }
  return r;
}

ExperimentResult run_cumulant_only(const ExperimentConfig& c) {
  ExperimentResult r;
  OdeOptions o;
  o.rtol = c.rtol;
  o.atol = c.atol;
  for (int n : c.orders) {
    const MomentSystem full = generate_system(n);
    r.files.push_back({"system_n" + std::to_string(n) + ".txt", export_system(full), std::nullopt});
    r.files.push_back(
        {"system_n" + std::to_string(n) + "_reduced.txt", export_system(reduce_for_initial_state(full)), std::nullopt});
  }
  r.summary["runs"] = json::array();
  for (double a2 : c.alpha2) {
    const double a0 = std::sqrt(a2);
    const auto g = grid_for(c, default_tau_end(a0));
    for (int n : c.orders) {
      const auto t0 = Clock::now();
      const CumulantSeries s = run_cumulant(n, a0, g, o);
      r.timings.emplace_back("cumulant_n" + std::to_string(n) + "_" + tag(a2), seconds_since(t0));
      CsvTable t(s.tau);
      t.add("n_s", s.n_s).add("var_p_p", s.var_p_p).add("g2_p", s.g2_p).add("g2_s", s.g2_s);
      const std::string name = "cumulant_n" + std::to_string(n) + "_" + tag(a2);
      r.files.push_back({name + ".csv", t.str(), PlotOptions{name}});
      r.summary["runs"].push_back({{"alpha2", a2},
                                   {"order", n},
                                   {"variables", s.variables},
                                   {"completed", s.status == SegmentStatus::ok},
                                   {"negative_population_onset", opt(s.unphysical_onset)}});
    }
  }
  return r;
}

ExperimentResult run_analytic(const ExperimentConfig& c) {
  ExperimentResult r;
  const SeriesTable& table = SeriesTable::builtin();
  r.summary["points"] = json::array();
  for (double a2 : c.alpha2) {
    const double a0 = std::sqrt(a2);
    const SecondOrderSolution sol(a0);
    const auto g = grid_for(c, default_tau_end(a0));
    std::vector<double> eta, alpha, ns, np, parametric, thermal;
    for (double t : g) {
      const auto p = sol.at(t);
      eta.push_back(p.eta);
      alpha.push_back(p.alpha);
      ns.push_back(std::sinh(p.eta) * std::sinh(p.eta));
      np.push_back(p.alpha * p.alpha);
      parametric.push_back(std::sinh(a0 * t) * std::sinh(a0 * t));
      thermal.push_back(thermal_purity(p.eta));
    }
    CsvTable t(g);
    t.add("eta", eta).add("alpha", alpha).add("n_s", ns).add("n_p", np).add("parametric_n_s", parametric);
    t.add("thermal_purity", thermal);
    for (const auto& name : table.names()) {
      std::vector<double> v;
      for (double x : g) v.push_back(table.get(name).eval(a0, x));
      t.add("series_" + name, v);
    }
    r.files.push_back({"analytic_" + tag(a2) + ".csv", t.str(), std::nullopt});
    const TauMax tm = tau_max(a0);
    json dep = json::array();
    for (double d : c.deltas) {
      const DepletionTime dt = depletion_time(a0, d);
      dep.push_back({{"delta", d}, {"formula", dt.approx}, {"second_order", dt.exact}});
    }
    const ThresholdTimes th = threshold_times(a0, c.delta);
    r.summary["points"].push_back({{"alpha2", a2},
                                   {"tau_max", {{"second_order", tm.exact}, {"formula", tm.approx}}},
                                   {"period", sol.period()},
                                   {"depletion", dep},
                                   {"thresholds",
                                    {{"delta", c.delta},
                                     {"squeezing_sixth_order", opt(th.squeezing)},
                                     {"squeezing_asymptote", th.squeezing_asymptote},
                                     {"entanglement_eighth_order", opt(th.entanglement)},
                                     {"entanglement_asymptote", th.entanglement_asymptote}}}});
  }
  return r;
}

ExperimentResult run_witness(const ExperimentConfig& c, bool with_purities) {
  ExperimentResult r;
  auto pts = map_points<ExactPoint>(c, [&](double a2, int jobs) {
    const double a0 = std::sqrt(a2);
    ExactOptions eo;
    eo.sim.jobs = jobs;
    eo.witnesses = true;
    eo.tripartite = true;
    eo.theta = c.theta;
    auto g = grid_for(c, default_tau_end(a0));
    return ExactPoint{run_exact(a0, g, eo), g};
  });
  r.summary["points"] = json::array();
  for (std::size_t i = 0; i < pts.size(); ++i) {
    const ExactSeries& s = pts[i].series;
    const double a0 = std::sqrt(c.alpha2[i]);
    const auto tau = s.tau();
    CsvTable t(tau);
    if (with_purities) {
      const SecondOrderSolution sol(a0);
      std::vector<double> thermal;
      for (double x : tau) thermal.push_back(thermal_purity(sol.at(x).eta));
      t.add("purity_p", s.column(&StandardRow::purity_p)).add("purity_s", s.column(&StandardRow::purity_s));
      t.add("thermal_purity", thermal);
    }
    t.add("w4", values(s.w4, &WitnessValue::value)).add("w4_imag", values(s.w4, &WitnessValue::imag_residue));
    t.add("w6", values(s.w6, &WitnessValue::value)).add("w6_imag", values(s.w6, &WitnessValue::imag_residue));
    t.add("tripartite", s.tripartite);
    if (!with_purities) t.add("purity_p", s.column(&StandardRow::purity_p));
    const std::string stem = (with_purities ? "fig4_" : "witness_") + tag(c.alpha2[i]);
    r.files.push_back({stem + ".csv", t.str(), std::nullopt});

    std::optional<double> w6_onset;
    for (std::size_t k = 0; k < tau.size() && !w6_onset; ++k)
      if (s.w6[k].entangled) w6_onset = tau[k];
    const auto th = exact_thresholds(s, c.delta);
    const ThresholdTimes est = threshold_times(a0, c.delta);
    json p = {{"alpha2", c.alpha2[i]},
              {"theta", c.theta},
              {"w4_intervals", intervals(tau, [&](std::size_t k) { return s.w4[k].entangled; })},
              {"w6_intervals", intervals(tau, [&](std::size_t k) { return s.w6[k].entangled; })},
              {"tripartite_intervals", intervals(tau, [&](std::size_t k) { return s.tripartite[k] < -1e-9; })},
              {"w6_onset", opt(w6_onset)},
              {"purity_threshold", opt(th.entanglement)},
              {"purity_threshold_eighth_order", opt(est.entanglement)},
              {"purity_threshold_asymptote", est.entanglement_asymptote}};
    if (w6_onset && th.entanglement) p["w6_onset_ratio"] = *w6_onset / *th.entanglement;
    r.summary["points"].push_back(p);
    r.timings.emplace_back(stem, s.seconds);
  }
  return r;
}

// --- figure analogues ----------------------------------------------------------------------------

struct ComparePoint {
  ExactSeries exact;
  std::vector<CumulantSeries> cumulants;
  double cumulant_seconds = 0.0;
};

ComparePoint compare_point(const ExperimentConfig& c, double a2, int jobs, double default_max) {
  const double a0 = std::sqrt(a2);
  const auto g = grid_for(c, default_max);
  ExactOptions eo;
  eo.sim.jobs = jobs;
  eo.pump_purity = false;
  ComparePoint p;
  p.exact = run_exact(a0, g, eo);
  OdeOptions o;
  o.rtol = c.rtol;
  o.atol = c.atol;
  const auto t0 = Clock::now();
  for (int n : c.orders) p.cumulants.push_back(run_cumulant(n, a0, g, o));
  p.cumulant_seconds = seconds_since(t0);
  return p;
}

const std::vector<std::pair<std::string, double StandardRow::*>>& compared_quantities() {
  static const std::vector<std::pair<std::string, double StandardRow::*>> q = {
      {"n_s", &StandardRow::n_s}, {"var_p_p", &StandardRow::var_p_p}, {"g2_p", &StandardRow::g2_p},
      {"g2_s", &StandardRow::g2_s}};
  return q;
}

const std::vector<double>& cumulant_column(const CumulantSeries& s, const std::string& name) {
  if (name == "n_s") return s.n_s;
  if (name == "var_p_p") return s.var_p_p;
  if (name == "g2_p") return s.g2_p;
  return s.g2_s;
}

ExperimentResult run_fig1(const ExperimentConfig& c) {
  ExperimentResult r;
  auto pts = map_points<ComparePoint>(c, [&](double a2, int jobs) {
    return compare_point(c, a2, jobs, default_tau_end(std::sqrt(a2)));
  });
  r.summary["points"] = json::array();
  for (std::size_t i = 0; i < pts.size(); ++i) {
    const double a0 = std::sqrt(c.alpha2[i]);
    const auto& p = pts[i];
    const auto tau = p.exact.tau();
    const SecondOrderSolution sol(a0);
    std::vector<double> closed;
    for (double x : tau) closed.push_back(sol.signal_population(x));
    CsvTable t(tau);
    for (const auto& [name, field] : compared_quantities()) t.add("exact_" + name, p.exact.column(field));
    t.add("second_order_closed_n_s", closed);
    json times = json::object();
    for (std::size_t k = 0; k < c.orders.size(); ++k) {
      const auto& s = p.cumulants[k];
      const std::string pre = "n" + std::to_string(c.orders[k]) + "_";
      json per = json::object();
      for (const auto& [name, field] : compared_quantities()) {
        t.add(pre + name, cumulant_column(s, name));
        per[name] = opt(relative_deviation_time(tau, p.exact.column(field), cumulant_column(s, name)));
      }
      per["negative_population_onset"] = opt(s.unphysical_onset);
      per["completed"] = s.status == SegmentStatus::ok;
      times[std::to_string(c.orders[k])] = per;
    }
    const std::string stem = "fig1_" + tag(c.alpha2[i]);
    r.files.push_back({stem + ".csv", t.str(), PlotOptions{stem}});
    r.summary["points"].push_back({{"alpha2", c.alpha2[i]}, {"cumulant_times", times}});
    r.timings.emplace_back("exact_" + tag(c.alpha2[i]), p.exact.seconds);
    r.timings.emplace_back("cumulant_" + tag(c.alpha2[i]), p.cumulant_seconds);
  }
  return r;
}

ExperimentResult run_fig2(const ExperimentConfig& c) {
  ExperimentResult r;
  struct Row {
    double a2, delta, exact, formula, second_order;
  };
  auto per_point = map_points<std::vector<Row>>(c, [&](double a2, int jobs) {
    const double a0 = std::sqrt(a2);
    SimulationOptions so;
    so.jobs = jobs;
    std::vector<Row> rows;
    for (double d : c.deltas) {
      const DepletionTime dt = depletion_time(a0, d);
      rows.push_back({a2, d, val(exact_depletion_time(a0, d, so)), dt.approx, dt.exact});
    }
    return rows;
  });
  std::vector<double> tau, a2s, deltas, formula, second, rel;
  r.summary["rows"] = json::array();
  double worst = 0.0;
  for (const auto& rows : per_point)
    for (const Row& row : rows) {
      tau.push_back(row.exact);
      a2s.push_back(row.a2);
      deltas.push_back(row.delta);
      formula.push_back(row.formula);
      second.push_back(row.second_order);
      rel.push_back(std::abs(row.formula - row.exact) / row.exact);
      worst = std::max(worst, rel.back());
      r.summary["rows"].push_back({{"alpha2", row.a2},
                                   {"delta", row.delta},
                                   {"exact", row.exact},
                                   {"formula", row.formula},
                                   {"second_order", row.second_order},
                                   {"relative_error", rel.back()}});
    }
  r.summary["max_relative_error"] = worst;
  CsvTable t(tau);
  t.add("alpha2", a2s).add("delta", deltas).add("formula", formula).add("second_order", second);
  t.add("relative_error", rel);
  r.files.push_back({"fig2_depletion.csv", t.str(), std::nullopt});
  return r;
}

ExperimentResult run_fig3(const ExperimentConfig& c) {
  ExperimentResult r;
  r.summary["points"] = json::array();
  for (double a2 : c.alpha2) {
    const double a0 = std::sqrt(a2);
    std::vector<double> times = c.times;
    if (times.empty()) {
      const double tm = tau_max(a0).exact;
      times = {0.5 * tm, tm};
    }
    std::sort(times.begin(), times.end());
    SimulationOptions so;
    so.jobs = c.jobs;
    ExactSimulation sim(a0, so);
    SuperposedState st;
    std::vector<double> tau, n, pp, ps;
    json snaps = json::array();
    for (double t : times) {
      sim.advance_to(t);
      sim.fill(st);
      const auto pump = photon_statistics(st, Mode::pump);
      const auto signal = photon_statistics(st, Mode::signal);
      const std::size_t len = std::max(pump.size(), signal.size());
      for (std::size_t k = 0; k < len; ++k) {
        tau.push_back(t);
        n.push_back(static_cast<double>(k));
        pp.push_back(k < pump.size() ? pump[k] : 0.0);
        ps.push_back(k < signal.size() ? signal[k] : 0.0);
      }
      const ParitySplit sp = parity_split(pump), ss = parity_split(signal);
      snaps.push_back({{"tau", t},
                       {"n_p", moment(st, Monomial::number(Mode::pump)).real()},
                       {"n_s", moment(st, Monomial::number(Mode::signal)).real()},
                       {"pump_parity", {{"even", sp.even_mass}, {"odd", sp.odd_mass}}},
                       {"signal_parity", {{"even", ss.even_mass}, {"odd", ss.odd_mass}}}});
    }
    CsvTable t(tau);
    t.add("n", n).add("p_pump", pp).add("p_signal", ps);
    r.files.push_back({"fig3_" + tag(a2) + ".csv", t.str(), std::nullopt});
    r.summary["points"].push_back({{"alpha2", a2}, {"snapshots", snaps}});
  }
  return r;
}

ExperimentResult run_fig5(const ExperimentConfig& c) {
  ExperimentResult r;
  const SeriesTable& table = SeriesTable::builtin();
  r.summary["points"] = json::array();
  for (double a2 : c.alpha2) {
    const double a0 = std::sqrt(a2);
    const double td = std::asinh(std::sqrt(c.delta) * a0) / a0;
    const auto g = log_grid(td / 100.0, td, c.tau.points);
    ExactOptions eo;
    eo.sim.jobs = c.jobs;
    const ExactSeries s = run_exact(a0, g, eo);
    const SecondOrderSolution sol(a0);
    struct Residual {
      std::string name, series;
      double StandardRow::*field;
      double reference;  // NaN: second-order closed form
    };
    const std::vector<Residual> res = {{"n_s", "signal_population_excess", &StandardRow::n_s, kNaN},
                                       {"var_p_p", "pump_variance_p", &StandardRow::var_p_p, 0.5},
                                       {"purity_p", "pump_purity", &StandardRow::purity_p, 1.0},
                                       {"g2_s", "g2_signal", &StandardRow::g2_s, 2.0}};
    CsvTable t(g);
    json slopes = json::object();
    for (const auto& q : res) {
      std::vector<double> ref, diff, pert;
      const auto ex = s.column(q.field);
      for (std::size_t k = 0; k < g.size(); ++k) {
        ref.push_back(std::isnan(q.reference) ? sol.signal_population(g[k]) : q.reference);
        diff.push_back(ex[k] - ref.back());
        pert.push_back(table.get(q.series).eval(a0, g[k]) - (std::isnan(q.reference) ? 0.0 : q.reference));
      }
      t.add("residual_" + q.name, diff).add("series_" + q.name, pert);
      const ResidualScaling fit = residual_scaling(g, ex, ref, td / 100.0, td / 10.0);
      slopes[q.name] = {{"slope", fit.fit.exponent}, {"stderr", fit.fit.stderr_exponent}, {"decades", fit.decades}};
    }
    const std::string stem = "fig5_" + tag(a2);
    PlotOptions po{stem, true, true, true};
    r.files.push_back({stem + ".csv", t.str(), po});
    r.summary["points"].push_back(
        {{"alpha2", a2}, {"depletion_time", td}, {"window", {td / 100.0, td / 10.0}}, {"slopes", slopes}});
    r.timings.emplace_back("exact_" + tag(a2), s.seconds);
  }
  return r;
}

/// First crossing of a truncated series through `level`.
std::optional<double> series_crossing(const std::string& name, double a0, double level, int max_power) {
  const Series& s = SeriesTable::builtin().get(name);
  auto f = [&](double t) { return s.eval(a0, t, max_power) - level; };
  return first_root_by_scan(f, 0.0, 1e-4, 10.0, 1.02);
}

ExperimentResult run_fig8(const ExperimentConfig& c) {
  ExperimentResult r;
  auto pts = map_points<ExactPoint>(c, [&](double a2, int jobs) {
    const double a0 = std::sqrt(a2);
    ExactOptions eo;
    eo.sim.jobs = jobs;
    eo.pump_purity_floor = 1.0 - 10.0 * c.delta;
    auto g = grid_for(c, default_tau_end(a0));
    return ExactPoint{run_exact(a0, g, eo), g};
  });
  const double d = c.delta;
  std::vector<double> a0s;
  for (double a2 : c.alpha2) a0s.push_back(std::sqrt(a2));
  struct Quantity {
    std::string name, series;
    double level;
    std::function<std::optional<double>(const ExactThresholds&)> get;
  };
  const std::vector<Quantity> qs = {
      {"sqz", "pump_variance_p", 0.5 * (1.0 - d), [](const ExactThresholds& t) { return t.squeezing; }},
      {"ent", "pump_purity", 1.0 - d, [](const ExactThresholds& t) { return t.entanglement; }},
      {"g2_p", "g2_pump", 1.0 + d, [](const ExactThresholds& t) { return t.g2_pump; }},
      {"g2_s", "g2_signal", 2.0 * (1.0 - d), [](const ExactThresholds& t) { return t.g2_signal; }}};
  std::vector<ExactThresholds> th;
  for (const auto& p : pts) th.push_back(exact_thresholds(p.series, d));
  json fits = json::object();
  for (const auto& q : qs) {
    std::vector<double> tau, six, eight, asym;
    for (std::size_t i = 0; i < pts.size(); ++i) {
      tau.push_back(val(q.get(th[i])));
      six.push_back(val(series_crossing(q.series, a0s[i], q.level, 6)));
      eight.push_back(val(series_crossing(q.series, a0s[i], q.level, 8)));
      const ThresholdTimes est = threshold_times(a0s[i], d);
      asym.push_back(q.name == "sqz" ? est.squeezing_asymptote
                                     : q.name == "ent" ? est.entanglement_asymptote : kNaN);
    }
    CsvTable t(tau);
    t.add("alpha2", c.alpha2).add("sixth_order", six).add("eighth_order", eight).add("asymptote", asym);
    r.files.push_back({"fig8_" + q.name + ".csv", t.str(), std::nullopt});
    fits[q.name] = fit_json(a0s, tau);
  }
  r.summary["delta"] = d;
  r.summary["fits_vs_alpha0"] = fits;
  for (std::size_t i = 0; i < pts.size(); ++i) r.timings.emplace_back("exact_" + tag(c.alpha2[i]), pts[i].series.seconds);
  return r;
}

ExperimentResult run_fig9(const ExperimentConfig& c) {
  ExperimentResult r;
  auto pts = map_points<ExactPoint>(c, [&](double a2, int jobs) {
    const double a0 = std::sqrt(a2);
    ExactOptions eo;
    eo.sim.jobs = jobs;
    eo.pump_purity = false;
    auto g = grid_for(c, 3.5 * tau_max(a0).exact);
    return ExactPoint{run_exact(a0, g, eo), g};
  });
  std::vector<double> first, second, formula, closed, rel;
  r.summary["points"] = json::array();
  for (std::size_t i = 0; i < pts.size(); ++i) {
    const double a0 = std::sqrt(c.alpha2[i]);
    const auto m = local_maxima(pts[i].series.tau(), pts[i].series.column(&StandardRow::n_s), 2);
    first.push_back(m.size() > 0 ? m[0] : kNaN);
    second.push_back(m.size() > 1 ? m[1] : kNaN);
    const TauMax tm = tau_max(a0);
    formula.push_back(tm.approx);
    closed.push_back(tm.exact);
    rel.push_back(std::abs(first.back() - tm.approx) / tm.approx);
    r.summary["points"].push_back({{"alpha2", c.alpha2[i]},
                                   {"first_maximum", first.back()},
                                   {"second_maximum", second.back()},
                                   {"log_formula", tm.approx},
                                   {"second_order_maximum", tm.exact},
                                   {"relative_error", rel.back()}});
    r.timings.emplace_back("exact_" + tag(c.alpha2[i]), pts[i].series.seconds);
  }
  CsvTable t(first);
  t.add("alpha2", c.alpha2).add("second_maximum", second).add("log_formula", formula);
  t.add("second_order_maximum", closed).add("relative_error", rel);
  r.files.push_back({"fig9_maxima.csv", t.str(), std::nullopt});
  return r;
}

ExperimentResult run_fig10(const ExperimentConfig& given) {
  ExperimentResult r;
  // order 1 has no signal population, hence no deviation time
  ExperimentConfig c = given;
  std::erase_if(c.orders, [](int n) { return n < 2; });
  if (c.orders.size() != given.orders.size()) r.summary["skipped_orders"] = json::array({1});
  auto pts = map_points<ComparePoint>(c, [&](double a2, int jobs) {
    return compare_point(c, a2, jobs, default_tau_end(std::sqrt(a2)));
  });
  std::vector<double> a0s;
  for (double a2 : c.alpha2) a0s.push_back(std::sqrt(a2));
  json fits = json::object();
  for (const auto& [name, field] : compared_quantities()) {
    if (name == "g2_s") continue;
    std::vector<double> tau, a2col, order;
    json per_order = json::object();
    for (std::size_t k = 0; k < c.orders.size(); ++k) {
      std::vector<double> times;
      for (std::size_t i = 0; i < pts.size(); ++i) {
        const auto& p = pts[i];
        times.push_back(val(relative_deviation_time(p.exact.tau(), p.exact.column(field),
                                                    cumulant_column(p.cumulants[k], name))));
        tau.push_back(times.back());
        a2col.push_back(c.alpha2[i]);
        order.push_back(c.orders[k]);
      }
      per_order[std::to_string(c.orders[k])] = fit_json(a0s, times);
    }
    CsvTable t(tau);
    t.add("alpha2", a2col).add("order", order);
    r.files.push_back({"fig10_" + name + ".csv", t.str(), std::nullopt});
    fits[name] = per_order;
  }
  r.summary["fits_vs_alpha0"] = fits;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    r.timings.emplace_back("exact_" + tag(c.alpha2[i]), pts[i].exact.seconds);
    r.timings.emplace_back("cumulant_" + tag(c.alpha2[i]), pts[i].cumulant_seconds);
  }
  return r;
}

}  // namespace

ExperimentResult run_experiment(const ExperimentConfig& c) {
  validate(c);
  const auto t0 = Clock::now();
  ExperimentResult r;
  const std::string& e = c.experiment;
  if (e == "simulate") r = run_simulate(c);
  else if (e == "cumulant") r = run_cumulant_only(c);
  else if (e == "analytic") r = run_analytic(c);
  else if (e == "witness") r = run_witness(c, false);
  else if (e == "fig1") r = run_fig1(c);
  else if (e == "fig2") r = run_fig2(c);
  else if (e == "fig3") r = run_fig3(c);
  else if (e == "fig4") r = run_witness(c, true);
  else if (e == "fig5") r = run_fig5(c);
  else if (e == "fig8") r = run_fig8(c);
  else if (e == "fig9") r = run_fig9(c);
  else if (e == "fig10") r = run_fig10(c);
  r.experiment = e;
  r.summary["experiment"] = e;
  r.summary["config_hash"] = config_hash(c);
  r.timings.emplace_back("total", seconds_since(t0));
  return r;
}

RunReport execute(const std::vector<ExperimentConfig>& configs, const std::string& out_dir, std::ostream& log) {
  for (const auto& c : configs) validate(c);
  namespace fs = std::filesystem;
  const auto start = Clock::now();
  RunReport report;
  json outputs = json::array(), experiments = json::array();
  auto write = [&](const fs::path& rel, const std::string& content) {
    const fs::path full = fs::path(out_dir) / rel;
    fs::create_directories(full.parent_path());
    std::ofstream f(full, std::ios::binary);
    f << content;
    if (!f) throw std::runtime_error("cannot write " + full.string());
    outputs.push_back({{"file", rel.generic_string()}, {"bytes", content.size()}, {"fnv1a64", fnv1a_hex(content)}});
  };
  for (const auto& c : configs) {
    json entry = {{"experiment", c.experiment}, {"config", to_json(c)}, {"config_hash", config_hash(c)}};
    try {
      log << "running " << c.experiment << " for alpha2 =";
      for (double a : c.alpha2) log << ' ' << a;
      log << std::endl;
      const ExperimentResult r = run_experiment(c);
      for (const auto& f : r.files) {
        write(fs::path(c.experiment) / f.name, f.content);
        if (c.svg && f.plot) write(fs::path(c.experiment) / (fs::path(f.name).stem().string() + ".svg"),
                                   render_svg(f.content, *f.plot));
      }
      write(fs::path(c.experiment) / "summary.json", r.summary.dump(2) + "\n");
      json timings = json::object();
      for (const auto& [k, v] : r.timings) timings[k] = v;
      entry["status"] = "ok";
      entry["timings_seconds"] = timings;
      log << "  done in " << timings["total"].get<double>() << " s" << std::endl;
    } catch (const std::exception& ex) {
      ++report.failures;
      entry["status"] = "failed";
      entry["error"] = ex.what();
      log << "  FAILED: " << ex.what() << std::endl;
    }
    experiments.push_back(entry);
  }
  report.manifest = {{"toolkit_version", kVersion},
                     {"config_hash", configs.size() == 1 ? json(config_hash(configs[0])) : json(nullptr)},
                     {"experiments", experiments},
                     {"outputs", outputs},
                     {"wall_seconds", seconds_since(start)}};
  fs::create_directories(out_dir);
  std::ofstream(fs::path(out_dir) / "manifest.json") << report.manifest.dump(2) << "\n";
  return report;
}

}  // namespace pdc::cli
