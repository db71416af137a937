#ifndef PDC_MOMENT_POLY_HPP
#define PDC_MOMENT_POLY_HPP

#include <functional>
#include <map>
#include <set>
#include <vector>

#include "pdc/monomial.hpp"
#include "pdc/rational.hpp"

namespace pdc {

/// Product of expectation values <m1><m2>..., kept sorted; the identity moment is never stored.
using MomentProduct = std::vector<Monomial>;

struct ProductLess {
  bool operator()(const MomentProduct& a, const MomentProduct& b) const {
    if (a.size() != b.size()) return a.size() < b.size();
    return a < b;
  }
};

/// Polynomial over moments with exact coefficients.
class MomentPoly {
 public:
  using Terms = std::map<MomentProduct, Coefficient, ProductLess>;

  MomentPoly() = default;
  static MomentPoly constant(const Coefficient& c);
  static MomentPoly moment(const Monomial& m, const Coefficient& c = 1);

  const Terms& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  Coefficient coeff(const MomentProduct& p) const;

  void add(MomentProduct p, const Coefficient& c);
  MomentPoly& operator+=(const MomentPoly& o);
  MomentPoly& operator-=(const MomentPoly& o);
  MomentPoly& operator*=(const Coefficient& c);
  friend MomentPoly operator+(MomentPoly a, const MomentPoly& b) { return a += b; }
  friend MomentPoly operator-(MomentPoly a, const MomentPoly& b) { return a -= b; }
  friend MomentPoly operator*(MomentPoly a, const Coefficient& c) { return a *= c; }
  friend MomentPoly operator*(const MomentPoly& a, const MomentPoly& b);
  friend bool operator==(const MomentPoly&, const MomentPoly&) = default;

  /// Complex conjugate: every <m> becomes <m'> and coefficients are conjugated.
  MomentPoly conj() const;
  /// Replaces each moment by the polynomial returned from `f`.
  MomentPoly substitute(const std::function<MomentPoly(const Monomial&)>& f) const;
  /// Renames each moment (cheaper special case of substitute).
  MomentPoly rename(const std::function<Monomial(const Monomial&)>& f) const;

  std::set<Monomial> moments() const;
  int max_moment_order() const;

 private:
  Terms terms_;
};

}  // namespace pdc

#endif  // PDC_MOMENT_POLY_HPP
