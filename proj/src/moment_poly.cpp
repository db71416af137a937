#include "pdc/moment_poly.hpp"

#include <algorithm>

namespace pdc {

MomentPoly MomentPoly::constant(const Coefficient& c) {
  MomentPoly p;
  p.add({}, c);
  return p;
}

MomentPoly MomentPoly::moment(const Monomial& m, const Coefficient& c) {
  MomentPoly p;
  p.add({m}, c);
  return p;
}

Coefficient MomentPoly::coeff(const MomentProduct& p) const {
  auto it = terms_.find(p);
  return it == terms_.end() ? Coefficient{} : it->second;
}

void MomentPoly::add(MomentProduct p, const Coefficient& c) {
  if (c.is_zero()) return;
  std::erase_if(p, [](const Monomial& m) { return m.is_identity(); });
  std::sort(p.begin(), p.end());
  auto [it, inserted] = terms_.try_emplace(std::move(p), c);
  if (!inserted) {
    it->second += c;
    if (it->second.is_zero()) terms_.erase(it);
  }
}

MomentPoly& MomentPoly::operator+=(const MomentPoly& o) {
  for (const auto& [p, c] : o.terms_) add(p, c);
  return *this;
}

MomentPoly& MomentPoly::operator-=(const MomentPoly& o) {
  for (const auto& [p, c] : o.terms_) add(p, -c);
  return *this;
}

MomentPoly& MomentPoly::operator*=(const Coefficient& c) {
  if (c.is_zero()) {
    terms_.clear();
    return *this;
  }
  for (auto& [p, v] : terms_) v *= c;
  return *this;
}

MomentPoly operator*(const MomentPoly& a, const MomentPoly& b) {
  MomentPoly out;
  for (const auto& [pa, ca] : a.terms_)
    for (const auto& [pb, cb] : b.terms_) {
      MomentProduct p = pa;
      p.insert(p.end(), pb.begin(), pb.end());
      out.add(std::move(p), ca * cb);
    }
  return out;
}

MomentPoly MomentPoly::conj() const {
  MomentPoly out;
  for (const auto& [p, c] : terms_) {
    MomentProduct q;
    q.reserve(p.size());
    for (const auto& m : p) q.push_back(m.conj());
    out.add(std::move(q), c.conj());
  }
  return out;
}

MomentPoly MomentPoly::substitute(const std::function<MomentPoly(const Monomial&)>& f) const {
  MomentPoly out;
  for (const auto& [p, c] : terms_) {
    MomentPoly term = constant(c);
    for (const auto& m : p) term = term * f(m);
    out += term;
  }
  return out;
}

MomentPoly MomentPoly::rename(const std::function<Monomial(const Monomial&)>& f) const {
  MomentPoly out;
  for (const auto& [p, c] : terms_) {
    MomentProduct q;
    q.reserve(p.size());
    for (const auto& m : p) q.push_back(f(m));
    out.add(std::move(q), c);
  }
  return out;
}

std::set<Monomial> MomentPoly::moments() const {
  std::set<Monomial> out;
  for (const auto& [p, c] : terms_) out.insert(p.begin(), p.end());
  return out;
}

int MomentPoly::max_moment_order() const {
  int o = 0;
  for (const auto& [p, c] : terms_)
    for (const auto& m : p) o = std::max(o, m.order());
  return o;
}

}  // namespace pdc
