#ifndef PDC_OPERATOR_POLY_HPP
#define PDC_OPERATOR_POLY_HPP

#include <map>
#include <string>

#include "pdc/monomial.hpp"
#include "pdc/rational.hpp"

namespace pdc {

/// Linear combination of normal-ordered monomials with exact coefficients.
/// Zero coefficients are never stored.
class OperatorPoly {
 public:
  using Terms = std::map<Monomial, Coefficient>;

  OperatorPoly() = default;
  OperatorPoly(const Monomial& m, Coefficient c = 1);  // NOLINT(google-explicit-constructor)

  const Terms& terms() const { return terms_; }
  bool empty() const { return terms_.empty(); }
  std::size_t size() const { return terms_.size(); }
  Coefficient coeff(const Monomial& m) const;
  int max_order() const;

  void add(const Monomial& m, const Coefficient& c);
  OperatorPoly& operator+=(const OperatorPoly& o);
  OperatorPoly& operator-=(const OperatorPoly& o);
  OperatorPoly& operator*=(const Coefficient& c);

  friend OperatorPoly operator+(OperatorPoly a, const OperatorPoly& b) { return a += b; }
  friend OperatorPoly operator-(OperatorPoly a, const OperatorPoly& b) { return a -= b; }
  friend OperatorPoly operator*(OperatorPoly a, const Coefficient& c) { return a *= c; }
  friend bool operator==(const OperatorPoly&, const OperatorPoly&) = default;

  /// Hermitian adjoint.
  OperatorPoly adjoint() const;
  std::string str() const;

 private:
  Terms terms_;
};

/// Normal-ordered expansion of x*y using [a, a'] = 1 per mode.
OperatorPoly normal_order_product(const Monomial& x, const Monomial& y);
OperatorPoly operator*(const OperatorPoly& x, const OperatorPoly& y);

/// The reduced Hamiltonian generator K with dA/dtau = [K, A], i.e. K = ap' as ai - ap as' ai'.
OperatorPoly evolution_generator();

/// Normal-ordered P with d<m>/dtau = <P>.
OperatorPoly heisenberg_rhs(const Monomial& m);

}  // namespace pdc

#endif  // PDC_OPERATOR_POLY_HPP
