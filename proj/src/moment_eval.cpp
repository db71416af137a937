#include "pdc/moment_eval.hpp"

#include <cmath>
#include <stdexcept>

namespace pdc {
CompiledPoly::CompiledPoly(const MomentSystem& sys, const MomentPoly& p, double alpha0) {
  auto resolve = [&](const Monomial& raw) -> std::optional<Factor> {
    if (auto i = sys.index_of(raw)) return Factor{static_cast<int>(*i), false};
    if (auto i = sys.index_of(raw.conj())) return Factor{static_cast<int>(*i), true};
    return std::nullopt;
  };
  auto lookup = [&](const Monomial& raw) -> std::optional<Factor> {
    if (auto f = resolve(raw)) return f;
    const Monomial m = sys.reduced ? reduced_name(raw) : raw;
    if (auto f = resolve(m)) return f;
    for (std::size_t a = 0; a < sys.aliases.size(); ++a) {
      const auto& al = sys.aliases[a];
      if (al.moment != m) continue;
      auto partner = resolve(al.partner);
      if (!partner) throw std::out_of_range("CompiledPoly: alias partner is not a variable");
      const double offset = initial_moment(al.moment, alpha0) + initial_moment(al.partner, alpha0);
      aliases_.push_back({offset, partner->slot, partner->conj});
      return Factor{-static_cast<int>(aliases_.size()), false};
    }
    throw std::out_of_range("CompiledPoly: <" + raw.name() + "> is not covered by the system");
  };

  for (const auto& [prod, c] : p.terms()) {
    std::vector<Factor> fs;
    bool zero = false;
    for (const auto& m : prod) {
      if (sys.zero_moments.count(m.conj_rep()) || (sys.reduced && selection_rule_zero(m))) {
        zero = true;
        break;
      }
      fs.push_back(*lookup(m));
    }
    if (zero) continue;
    start_.push_back(static_cast<int>(factors_.size()));
    coeff_.push_back(c.to_complex());
    factors_.insert(factors_.end(), fs.begin(), fs.end());
  }
  start_.push_back(static_cast<int>(factors_.size()));
}

cplx CompiledPoly::operator()(const VectorXc& y) const {
  cplx sum = 0.0;
  for (std::size_t k = 0; k < coeff_.size(); ++k) {
    cplx t = coeff_[k];
    for (int j = start_[k]; j < start_[k + 1]; ++j) {
      const Factor& f = factors_[static_cast<std::size_t>(j)];
      cplx v;
      if (f.slot >= 0) {
        v = y[f.slot];
      } else {
        const Alias& a = aliases_[static_cast<std::size_t>(-f.slot - 1)];
        const cplx p = a.conj ? std::conj(y[a.partner]) : y[a.partner];
        v = a.offset - p;
      }
      t *= f.conj ? std::conj(v) : v;
    }
    sum += t;
  }
  return sum;
}

CompiledSystem::CompiledSystem(const MomentSystem& sys, double alpha0) {
  rhs_.reserve(sys.size());
  for (const auto& r : sys.rhs) rhs_.emplace_back(sys, r, alpha0);
  const auto init = initial_values(sys, alpha0);
  y0_.resize(static_cast<Eigen::Index>(init.size()));
  for (std::size_t i = 0; i < init.size(); ++i) y0_[static_cast<Eigen::Index>(i)] = init[i];
}

void CompiledSystem::operator()(double, const VectorXc& y, VectorXc& dy) const {
  for (std::size_t i = 0; i < rhs_.size(); ++i) dy[static_cast<Eigen::Index>(i)] = rhs_[i](y);
}

Trajectory<cplx> integrate_moments(const MomentSystem& sys, double alpha0, const std::vector<double>& grid,
                                   const OdeOptions& opt) {
  const CompiledSystem f(sys, alpha0);
  std::function<bool(const VectorXc&)> physical;
  if (auto i = sys.index_of(Monomial::number(Mode::signal))) {
    const auto k = static_cast<Eigen::Index>(*i);
    physical = [k](const VectorXc& y) { return y[k].real() >= 0.0; };
  }
  return integrate<cplx>(f, f.initial_state(), grid, opt, physical);
}

Trajectory<double> integrate_reduced_flow(double alpha0, const std::vector<double>& grid, const OdeOptions& opt) {
  auto f = [](double, const Eigen::VectorXd& y, Eigen::VectorXd& dy) {
    dy[0] = y[1];
    dy[1] = -0.5 * std::sinh(2.0 * y[0]);
  };
  Eigen::VectorXd y0(2);
  y0 << 0.0, alpha0;
  return integrate<double>(f, y0, grid, opt);
}

std::optional<double> first_crossing(const std::vector<double>& times, const std::vector<double>& values) {
  if (times.size() != values.size()) throw std::invalid_argument("first_crossing: size mismatch");
  for (std::size_t i = 1; i < values.size(); ++i) {
    const double a = values[i - 1], b = values[i];
    if (b == 0.0 && a != 0.0) return times[i];
    if ((a < 0.0 && b > 0.0) || (a > 0.0 && b < 0.0))
      return times[i - 1] + a / (a - b) * (times[i] - times[i - 1]);
  }
  return std::nullopt;
}

}  // namespace pdc
