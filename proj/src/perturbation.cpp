#include "pdc/perturbation.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace pdc {
namespace {

constexpr const char* kBuiltin = R"(
signal_population_excess 6 4 -7/45
signal_population_excess 8 6 -8/105
signal_population_excess 8 4 11/90
pump_variance_p 0 0 1/2
pump_variance_p 4 2 -1/6
pump_variance_p 6 2 1/18
pump_variance_p 6 4 -1/45
pump_variance_p 8 6 -1/630
pump_variance_p 8 4 2/35
pump_variance_p 8 2 -19/2520
g2_pump 0 0 1
g2_pump 4 0 1/3
g2_pump 6 2 22/45
g2_pump 6 0 2/9
g2_pump 8 4 19/105
g2_pump 8 2 -64/315
g2_pump 8 0 97/630
g2_signal 0 0 2
g2_signal 2 0 -2/3
g2_signal 4 0 1/18
g2_signal 4 2 -8/15
g2_signal 6 4 22/45
g2_signal 6 2 -17/15
g2_signal 6 0 23/135
g2_signal 8 6 -148/675
g2_signal 8 4 43/90
g2_signal 8 2 -473/675
g2_signal 8 0 83/810
pump_purity 0 0 1
pump_purity 6 4 -2/9
pump_purity 8 4 2/9
pump_purity 8 6 -4/45
eta 1 1 1
eta 3 1 -1/6
eta 5 3 -1/30
eta 5 1 1/120
eta 7 5 -1/315
eta 7 3 11/1260
eta 7 1 -1/5040
)";

}  // namespace

double Series::eval(double alpha0, double tau, int max_tau_power) const {
  double sum = 0.0;
  for (const auto& t : terms)
    if (t.tau_power <= max_tau_power)
      sum += t.coeff.to_double() * std::pow(alpha0, t.alpha_power) * std::pow(tau, t.tau_power);
  return sum;
}

int Series::order() const {
  int o = 0;
  for (const auto& t : terms) o = std::max(o, t.tau_power);
  return o;
}

SeriesTable SeriesTable::parse(const std::string& text) {
  SeriesTable table;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (auto h = line.find('#'); h != std::string::npos) line.erase(h);
    std::istringstream ls(line);
    std::string name, coeff;
    int tp = 0, ap = 0;
    if (!(ls >> name)) continue;
    if (!(ls >> tp >> ap >> coeff)) throw std::invalid_argument("SeriesTable: malformed line " + std::to_string(lineno));
    Rational c;
    if (auto slash = coeff.find('/'); slash != std::string::npos)
      c = Rational(std::stoll(coeff.substr(0, slash)), std::stoll(coeff.substr(slash + 1)));
    else
      c = Rational(std::stoll(coeff));
    Series& s = table.series_[name];
    s.name = name;
    s.terms.push_back({tp, ap, c});
  }
  return table;
}

const SeriesTable& SeriesTable::builtin() {
  static const SeriesTable table = parse(kBuiltin);
  return table;
}

std::string SeriesTable::str() const {
  std::ostringstream os;
  for (const auto& [name, s] : series_)
    for (const auto& t : s.terms) os << name << ' ' << t.tau_power << ' ' << t.alpha_power << ' ' << t.coeff.str() << '\n';
  return os.str();
}

const Series& SeriesTable::get(const std::string& name) const {
  auto it = series_.find(name);
  if (it == series_.end()) throw std::out_of_range("unknown series: " + name);
  return it->second;
}

std::vector<std::string> SeriesTable::names() const {
  std::vector<std::string> out;
  for (const auto& [n, s] : series_) out.push_back(n);
  return out;
}

double eval_series(const std::string& name, double alpha0, double tau, int max_tau_power) {
  return SeriesTable::builtin().get(name).eval(alpha0, tau, max_tau_power);
}

double thermal_purity(double r) { return 1.0 / std::cosh(2.0 * r); }

PowerLawFit powerlaw_fit(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size()) throw std::invalid_argument("powerlaw_fit: size mismatch");
  if (x.size() < 4) throw std::invalid_argument("powerlaw_fit: need at least 4 points");
  const auto n = static_cast<double>(x.size());
  double sx = 0, sy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (!(x[i] > 0.0) || !(y[i] > 0.0)) throw std::invalid_argument("powerlaw_fit: data must be positive");
    sx += std::log(x[i]);
    sy += std::log(y[i]);
  }
  const double mx = sx / n, my = sy / n;
  double sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double dx = std::log(x[i]) - mx;
    sxx += dx * dx;
    sxy += dx * (std::log(y[i]) - my);
  }
  if (sxx == 0.0) throw std::invalid_argument("powerlaw_fit: x values must not all coincide");
  PowerLawFit f;
  f.exponent = sxy / sxx;
  const double intercept = my - f.exponent * mx;
  f.prefactor = std::exp(intercept);
  double ss = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double r = std::log(y[i]) - intercept - f.exponent * std::log(x[i]);
    ss += r * r;
  }
  f.stderr_exponent = std::sqrt(ss / (n - 2.0) / sxx);
  return f;
}

ResidualScaling residual_scaling(const std::vector<double>& tau, const std::vector<double>& exact,
                                 const std::vector<double>& reference, double lo, double hi, double min_decades) {
  if (tau.size() != exact.size() || tau.size() != reference.size())
    throw std::invalid_argument("residual_scaling: size mismatch");
  std::vector<double> x, y;
  for (std::size_t i = 0; i < tau.size(); ++i) {
    if (tau[i] < lo || tau[i] > hi) continue;
    const double r = std::abs(exact[i] - reference[i]);
    if (!(r > 0.0)) continue;
    x.push_back(tau[i]);
    y.push_back(r);
  }
  ResidualScaling out;
  if (x.size() < 4) return out;
  out.fit = powerlaw_fit(x, y);
  double ymin = y[0], ymax = y[0];
  for (double v : y) {
    ymin = std::min(ymin, v);
    ymax = std::max(ymax, v);
  }
  out.decades = std::log10(ymax / ymin);
  out.sufficient = out.decades >= min_decades;
  return out;
}

}  // namespace pdc
