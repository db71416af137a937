#ifndef PDC_MOMENT_SYSTEM_HPP
#define PDC_MOMENT_SYSTEM_HPP

#include <optional>
#include <set>
#include <vector>

#include "pdc/moment_poly.hpp"

namespace pdc {

/// <moment> = <moment>(0) + <partner>(0) - <partner>, from conservation of N_p + N_s.
struct ConservationAlias {
  Monomial moment;
  Monomial partner;
};

/// Closed system d<v_k>/dtau = rhs[k] over expectation values.
/// Variables are conjugate-pair representatives; a moment m in an RHS that is not a
/// variable is either the conjugate of one, a zero moment, or an aliased moment.
struct MomentSystem {
  int order = 0;
  std::vector<Monomial> variables;
  std::vector<MomentPoly> rhs;

  bool reduced = false;
  std::set<Monomial> zero_moments;  // conjugate-pair representatives known to vanish
  std::vector<ConservationAlias> aliases;

  std::size_t size() const { return variables.size(); }
  std::optional<std::size_t> index_of(const Monomial& m) const;
  const MomentPoly& rhs_of(const Monomial& m) const;
};

/// Closed system at cumulant order n reached from <ap>, <as>, <ai>.
MomentSystem generate_system(int n);

/// Truncated equation of motion of an arbitrary moment at order n (moment order <= n).
MomentPoly truncated_rhs(const Monomial& m, int n);

/// Prunes `sys` for the initial state |alpha0>|0>|0> with real alpha0 > 0: zero-set
/// elimination, realness, signal/idler symmetry, the N_p + N_s alias, and finally
/// relevance closure from `targets` (defaults to <as' as>).
MomentSystem reduce_for_initial_state(const MomentSystem& sys, const std::vector<Monomial>& targets = {});

/// Canonical moment under the symmetries applied by reduce_for_initial_state.
Monomial reduced_name(const Monomial& m);

/// Rewrites `p` (any moments) with the zero set, realness and symmetry of a reduced system.
/// Aliased and zero moments are substituted; throws if a moment is not covered by `sys`.
MomentPoly reduce_expression(const MomentSystem& sys, const MomentPoly& p);

/// <m>(0) for the coherent pump with real amplitude alpha0 and empty signal/idler.
double initial_moment(const Monomial& m, double alpha0);
std::vector<double> initial_values(const MomentSystem& sys, double alpha0);

/// True if <m> vanishes for every state built from |n-k>|k>|k> components: the net
/// signal and idler annihilation counts differ.
bool selection_rule_zero(const Monomial& m);

}  // namespace pdc

#endif  // PDC_MOMENT_SYSTEM_HPP
