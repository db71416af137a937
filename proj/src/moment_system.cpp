#include "pdc/moment_system.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <map>
#include <stdexcept>

#include "pdc/cumulant.hpp"
#include "pdc/operator_poly.hpp"

namespace pdc {
namespace {

const Monomial kPumpNumber = Monomial::number(Mode::pump);
const Monomial kSignalNumber = Monomial::number(Mode::signal);

MomentPoly zero_out(const MomentPoly& p, const std::set<Monomial>& zeros) {
  MomentPoly out;
  for (const auto& [prod, c] : p.terms()) {
    const bool vanishes = std::any_of(prod.begin(), prod.end(),
                                      [&](const Monomial& m) { return zeros.count(m.conj_rep()) > 0; });
    if (!vanishes) out.add(prod, c);
  }
  return out;
}

}  // namespace

std::optional<std::size_t> MomentSystem::index_of(const Monomial& m) const {
  auto it = std::lower_bound(variables.begin(), variables.end(), m);
  if (it == variables.end() || *it != m) return std::nullopt;
  return static_cast<std::size_t>(it - variables.begin());
}

const MomentPoly& MomentSystem::rhs_of(const Monomial& m) const {
  auto idx = index_of(m);
  if (!idx) throw std::out_of_range("MomentSystem: <" + m.name() + "> is not a variable");
  return rhs[*idx];
}

MomentPoly truncated_rhs(const Monomial& m, int n) { return cumulant_truncate(heisenberg_rhs(m), n); }

MomentSystem generate_system(int n) {
  if (n < 1) throw std::invalid_argument("generate_system: order must be >= 1");
  std::map<Monomial, MomentPoly> found;
  std::deque<Monomial> queue = {Monomial::lowering(Mode::pump), Monomial::lowering(Mode::signal),
                                Monomial::lowering(Mode::idler)};
  while (!queue.empty()) {
    const Monomial v = queue.front().conj_rep();
    queue.pop_front();
    if (found.count(v)) continue;
    MomentPoly r = truncated_rhs(v, n);
    for (const auto& m : r.moments())
      if (!found.count(m.conj_rep())) queue.push_back(m.conj_rep());
    found.emplace(v, std::move(r));
  }
  MomentSystem sys;
  sys.order = n;
  for (auto& [v, r] : found) {
    sys.variables.push_back(v);
    sys.rhs.push_back(std::move(r));
  }
  return sys;
}

Monomial reduced_name(const Monomial& m) {
  const Monomial a = m.conj_rep();
  const Monomial b = m.swap_signal_idler().conj_rep();
  const std::pair<int, int> sa{a.pow[2], a.pow[3]}, sb{b.pow[2], b.pow[3]};
  if (sa != sb) return sa > sb ? a : b;
  return a.pow < b.pow ? a : b;
}

bool selection_rule_zero(const Monomial& m) { return m.pow[3] - m.pow[2] != m.pow[5] - m.pow[4]; }

double initial_moment(const Monomial& m, double alpha0) {
  for (int s = 2; s < 6; ++s)
    if (m.pow[s]) return 0.0;
  return std::pow(alpha0, m.pow[0] + m.pow[1]);
}

std::vector<double> initial_values(const MomentSystem& sys, double alpha0) {
  std::vector<double> out;
  out.reserve(sys.size());
  for (const auto& v : sys.variables) out.push_back(initial_moment(v, alpha0));
  return out;
}

MomentPoly reduce_expression(const MomentSystem& sys, const MomentPoly& p) {
  return p.substitute([&](const Monomial& raw) -> MomentPoly {
    if (sys.zero_moments.count(raw.conj_rep()) || selection_rule_zero(raw)) return {};
    const Monomial m = reduced_name(raw);
    if (sys.zero_moments.count(m)) return {};
    for (const auto& a : sys.aliases)
      if (a.moment == m) return MomentPoly::moment(m);
    if (!sys.index_of(m))
      throw std::out_of_range("reduce_expression: <" + raw.name() + "> is not covered by the reduced system");
    return MomentPoly::moment(m);
  });
}

MomentSystem reduce_for_initial_state(const MomentSystem& sys, const std::vector<Monomial>& targets) {
  // greatest fixed point of: zero at tau = 0 and RHS vanishing on the zero set
  std::set<Monomial> zeros;
  for (const auto& v : sys.variables)
    if (initial_moment(v, 1.0) == 0.0) zeros.insert(v);
  for (bool changed = true; changed;) {
    changed = false;
    for (auto it = zeros.begin(); it != zeros.end();) {
      if (!zero_out(sys.rhs_of(*it), zeros).is_zero()) {
        it = zeros.erase(it);
        changed = true;
      } else {
        ++it;
      }
    }
  }

  std::map<Monomial, MomentPoly> kept;
  for (std::size_t k = 0; k < sys.size(); ++k) {
    const Monomial& v = sys.variables[k];
    if (zeros.count(v) || reduced_name(v) != v) continue;
    kept.emplace(v, zero_out(sys.rhs[k], zeros).rename(reduced_name));
  }

  MomentSystem out;
  out.order = sys.order;
  out.reduced = true;
  out.zero_moments = zeros;
  if (kept.count(kPumpNumber) && kept.count(kSignalNumber)) {
    out.aliases.push_back({kPumpNumber, kSignalNumber});
    kept.erase(kPumpNumber);
  }

  std::vector<Monomial> start = targets;
  if (start.empty()) start.push_back(kSignalNumber);
  std::set<Monomial> relevant;
  std::deque<Monomial> queue;
  for (const auto& t : start) queue.push_back(reduced_name(t));
  while (!queue.empty()) {
    const Monomial m = queue.front();
    queue.pop_front();
    if (relevant.count(m)) continue;
    if (m == kPumpNumber && !out.aliases.empty()) {
      queue.push_back(kSignalNumber);
      continue;
    }
    auto it = kept.find(m);
    if (it == kept.end()) continue;
    relevant.insert(m);
    for (const auto& d : it->second.moments()) queue.push_back(d);
  }
  for (const auto& m : relevant) {
    out.variables.push_back(m);
    out.rhs.push_back(kept.at(m));
  }
  return out;
}

}  // namespace pdc
