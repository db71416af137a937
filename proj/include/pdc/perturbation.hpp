#ifndef PDC_PERTURBATION_HPP
#define PDC_PERTURBATION_HPP

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "pdc/rational.hpp"

namespace pdc {

/// coeff * alpha0^alpha_power * tau^tau_power
struct SeriesTerm {
  int tau_power;
  int alpha_power;
  Rational coeff;
  friend bool operator==(const SeriesTerm&, const SeriesTerm&) = default;
};

struct Series {
  std::string name;
  std::vector<SeriesTerm> terms;
  /// Value through tau^max_tau_power (all stored terms by default).
  double eval(double alpha0, double tau, int max_tau_power = 1000) const;
  int order() const;
};

/// Short-time expansions about tau = 0 (through tau^8):
///   signal_population_excess  <N_s> - sinh^2(eta)
///   pump_variance_p           Delta^2 P_p
///   g2_pump, g2_signal        zero-delay autocorrelations
///   pump_purity               Tr rho_p^2
///   eta                       the second-order squeezing parameter (through tau^7)
class SeriesTable {
 public:
  static const SeriesTable& builtin();
  /// Parses "name tau_power alpha_power p/q" lines ('#' comments allowed).
  static SeriesTable parse(const std::string& text);
  std::string str() const;

  const Series& get(const std::string& name) const;  // throws std::out_of_range
  std::vector<std::string> names() const;
  const std::map<std::string, Series>& all() const { return series_; }

 private:
  std::map<std::string, Series> series_;
};

/// Value of the named series through tau^max_tau_power.
double eval_series(const std::string& name, double alpha0, double tau, int max_tau_power = 1000);

/// sech(2 r): purity of one arm of a two-mode squeezed vacuum with squeezing r.
double thermal_purity(double r);

struct PowerLawFit {
  double exponent = 0.0;
  double prefactor = 0.0;
  double stderr_exponent = 0.0;
};

/// Ordinary least squares of log y on log x. Needs at least 4 points, all positive.
PowerLawFit powerlaw_fit(const std::vector<double>& x, const std::vector<double>& y);

struct ResidualScaling {
  PowerLawFit fit;
  double decades = 0.0;     // log10 range of the residual actually fitted
  bool sufficient = false;  // residual spans at least `min_decades`
};

/// Fits |exact - reference| against tau, keeping points with tau in [lo, hi].
ResidualScaling residual_scaling(const std::vector<double>& tau, const std::vector<double>& exact,
                                 const std::vector<double>& reference, double lo, double hi, double min_decades = 2.0);

}  // namespace pdc

#endif  // PDC_PERTURBATION_HPP
