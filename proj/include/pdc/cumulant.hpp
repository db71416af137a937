#ifndef PDC_CUMULANT_HPP
#define PDC_CUMULANT_HPP

#include "pdc/moment_poly.hpp"
#include "pdc/operator_poly.hpp"

namespace pdc {

/// <m> written through lower-order moments by setting the cumulant of order m.order() to zero.
/// Sum over all set partitions of the operator string except the single block,
/// each weighted by (|P|-1)! (-1)^|P|.
MomentPoly cumulant_expand(const Monomial& m);

/// Expectation of `p` with order n+1 moments replaced through cumulant_expand.
/// Throws std::invalid_argument if `p` contains a moment of order > n+1 or n < 1.
MomentPoly cumulant_truncate(const OperatorPoly& p, int n);

/// <m> for a moment of any order, expanded recursively until only orders <= n remain.
MomentPoly express_moment(const Monomial& m, int n);

}  // namespace pdc

#endif  // PDC_CUMULANT_HPP
