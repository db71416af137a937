#ifndef PDC_EXPERIMENTS_HPP
#define PDC_EXPERIMENTS_HPP

#include <functional>
#include <numbers>
#include <optional>
#include <vector>

#include "pdc/moment_eval.hpp"
#include "pdc/observables.hpp"
#include "pdc/superposed_state.hpp"
#include "pdc/witnesses.hpp"

namespace pdc {

std::vector<double> linear_grid(double t0, double t1, int points);
/// Log-spaced points in [t0, t1], t0 > 0.
std::vector<double> log_grid(double t0, double t1, int points);

struct ExactOptions {
  SimulationOptions sim;
  bool pump_purity = true;
  /// Stop evaluating the pump purity once it drops below this value (NaN afterwards).
  double pump_purity_floor = 0.0;
  bool witnesses = false;
  bool tripartite = false;
  /// Last time at which the transformed-frame margin is evaluated; negative means
  /// kTripartiteSpan times the second-order tau_max. NaN is recorded afterwards.
  double tripartite_until = -1.0;
  double theta = std::numbers::pi / 4;
};

inline constexpr double kTripartiteSpan = 0.6;

struct ExactSeries {
  double alpha0 = 0.0;
  PoissonCutoffs cutoffs;
  std::vector<StandardRow> rows;
  std::vector<WitnessValue> w4, w6;
  std::vector<double> tripartite;  // NaN where the transformed frame could not be resolved
  double norm_error = 0.0;         // max |norm^2 - window mass|
  double conservation_error = 0.0; // max |<N_p> + <N_s> - alpha0^2 mass|
  ExpmStats stats;
  double seconds = 0.0;

  std::vector<double> tau() const;
  std::vector<double> column(double StandardRow::*field) const;
};

ExactSeries run_exact(double alpha0, const std::vector<double>& grid, const ExactOptions& opt = {});

/// First grid time after which f(state) changes sign, refined by root-finding on the exact
/// dynamics (the simulation is re-propagated from the bracket's left end).
std::optional<double> exact_crossing(double alpha0, const std::function<double(const SuperposedState&)>& f,
                                     const std::vector<double>& scan_grid, SimulationOptions opt = {},
                                     double xtol = 1e-9);

/// Time at which <N_p> has dropped by the fraction delta of alpha0^2, from the exact dynamics.
std::optional<double> exact_depletion_time(double alpha0, double delta, SimulationOptions opt = {});

struct CumulantSeries {
  int order = 0;
  std::size_t variables = 0;
  std::vector<double> tau, n_s, var_p_p, g2_p, g2_s;
  std::optional<double> unphysical_onset;  // first tau with <N_s> < 0
  SegmentStatus status = SegmentStatus::ok;
};

/// Integrates the reduced order-n system from the coherent state and evaluates the
/// tracked observables (moments above order n are expanded by the closure).
CumulantSeries run_cumulant(int order, double alpha0, const std::vector<double>& grid, const OdeOptions& opt = {});

/// First time where |approx - exact| > rel |exact|, linearly interpolated; points with
/// exact == 0 or non-finite values are skipped.
std::optional<double> relative_deviation_time(const std::vector<double>& tau, const std::vector<double>& exact,
                                              const std::vector<double>& approx, double rel = 0.01);

/// First time the series drops (direction < 0) or rises (direction > 0) past `level`,
/// interpolated; the first finite sample if the series starts beyond it.
std::optional<double> level_crossing(const std::vector<double>& tau, const std::vector<double>& values, double level,
                                     int direction);

struct ExactThresholds {
  std::optional<double> squeezing;     // Delta^2 P_p below (1 - delta)/2
  std::optional<double> entanglement;  // pump purity below 1 - delta (1 - 1/(n2+1))
  std::optional<double> g2_pump;       // g2_p above 1 + delta
  std::optional<double> g2_signal;     // g2_s below 2 (1 - delta)
};

ExactThresholds exact_thresholds(const ExactSeries& s, double delta = 0.01);

/// Default time span covering the first signal maximum with margin.
double default_tau_end(double alpha0);

}  // namespace pdc

#endif  // PDC_EXPERIMENTS_HPP
