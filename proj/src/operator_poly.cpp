#include "pdc/operator_poly.hpp"

#include <algorithm>
#include <vector>

namespace pdc {
namespace {

std::int64_t binom(int n, int k) {
  if (k < 0 || k > n) return 0;
  std::int64_t r = 1;
  for (int j = 1; j <= k; ++j) r = r * (n - k + j) / j;
  return r;
}

struct ModeTerm {
  int create;
  int destroy;
  std::int64_t weight;
};

// (a')^c a^d (a')^e a^f = sum_k k! C(d,k) C(e,k) (a')^(c+e-k) a^(d+f-k)
std::vector<ModeTerm> reorder_mode(int c, int d, int e, int f) {
  std::vector<ModeTerm> out;
  std::int64_t fact = 1;
  for (int k = 0; k <= std::min(d, e); ++k) {
    if (k > 0) fact *= k;
    out.push_back({c + e - k, d + f - k, fact * binom(d, k) * binom(e, k)});
  }
  return out;
}

}  // namespace

OperatorPoly::OperatorPoly(const Monomial& m, Coefficient c) { add(m, c); }

Coefficient OperatorPoly::coeff(const Monomial& m) const {
  auto it = terms_.find(m);
  return it == terms_.end() ? Coefficient{} : it->second;
}

int OperatorPoly::max_order() const {
  int o = -1;
  for (const auto& [m, c] : terms_) o = std::max(o, m.order());
  return o;
}

void OperatorPoly::add(const Monomial& m, const Coefficient& c) {
  if (c.is_zero()) return;
  auto [it, inserted] = terms_.try_emplace(m, c);
  if (!inserted) {
    it->second += c;
    if (it->second.is_zero()) terms_.erase(it);
  }
}

OperatorPoly& OperatorPoly::operator+=(const OperatorPoly& o) {
  for (const auto& [m, c] : o.terms_) add(m, c);
  return *this;
}

OperatorPoly& OperatorPoly::operator-=(const OperatorPoly& o) {
  for (const auto& [m, c] : o.terms_) add(m, -c);
  return *this;
}

OperatorPoly& OperatorPoly::operator*=(const Coefficient& c) {
  if (c.is_zero()) {
    terms_.clear();
    return *this;
  }
  for (auto& [m, v] : terms_) v *= c;
  return *this;
}

OperatorPoly OperatorPoly::adjoint() const {
  OperatorPoly r;
  for (const auto& [m, c] : terms_) r.add(m.conj(), c.conj());
  return r;
}

std::string OperatorPoly::str() const {
  if (terms_.empty()) return "0";
  std::string out;
  for (const auto& [m, c] : terms_) {
    if (!out.empty()) out += " + ";
    out += c.str() + "*" + m.name();
  }
  return out;
}

OperatorPoly normal_order_product(const Monomial& x, const Monomial& y) {
  std::vector<ModeTerm> per_mode[3];
  for (int mode = 0; mode < 3; ++mode)
    per_mode[mode] = reorder_mode(x.pow[2 * mode], x.pow[2 * mode + 1], y.pow[2 * mode], y.pow[2 * mode + 1]);
  OperatorPoly out;
  for (const auto& p : per_mode[0])
    for (const auto& s : per_mode[1])
      for (const auto& i : per_mode[2])
        out.add(Monomial(p.create, p.destroy, s.create, s.destroy, i.create, i.destroy),
                Rational(p.weight * s.weight * i.weight));
  return out;
}

OperatorPoly operator*(const OperatorPoly& x, const OperatorPoly& y) {
  OperatorPoly out;
  for (const auto& [mx, cx] : x.terms())
    for (const auto& [my, cy] : y.terms()) out += normal_order_product(mx, my) * (cx * cy);
  return out;
}

OperatorPoly evolution_generator() {
  OperatorPoly k(Monomial(1, 0, 0, 1, 0, 1), 1);
  k.add(Monomial(0, 1, 1, 0, 1, 0), -1);
  return k;
}

OperatorPoly heisenberg_rhs(const Monomial& m) {
  static const OperatorPoly k = evolution_generator();
  const OperatorPoly a(m);
  return k * a - a * k;
}

}  // namespace pdc
