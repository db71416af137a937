#ifndef PDC_MOMENT_EVAL_HPP
#define PDC_MOMENT_EVAL_HPP

#include <Eigen/Core>
#include <complex>
#include <vector>

#include "pdc/moment_system.hpp"
#include "pdc/ode.hpp"

namespace pdc {

using cplx = std::complex<double>;
using VectorXc = Eigen::VectorXcd;

/// A MomentPoly flattened into (coefficient, factor list) form over the state vector of a
/// MomentSystem. Each factor is a variable, its conjugate, or a conservation alias.
class CompiledPoly {
 public:
  CompiledPoly() = default;
  CompiledPoly(const MomentSystem& sys, const MomentPoly& p, double alpha0);

  cplx operator()(const VectorXc& y) const;

 private:
  struct Factor {
    int slot;   // >= 0: variable index; < 0: alias -(slot+1)
    bool conj;
  };
  struct Alias {
    cplx offset;
    int partner;
    bool conj;
  };
  std::vector<cplx> coeff_;
  std::vector<int> start_;  // term k uses factors_[start_[k], start_[k+1])
  std::vector<Factor> factors_;
  std::vector<Alias> aliases_;
};

/// Right-hand side of a MomentSystem ready for the integrator.
class CompiledSystem {
 public:
  CompiledSystem(const MomentSystem& sys, double alpha0);
  void operator()(double tau, const VectorXc& y, VectorXc& dy) const;
  std::size_t size() const { return rhs_.size(); }
  VectorXc initial_state() const { return y0_; }

 private:
  std::vector<CompiledPoly> rhs_;
  VectorXc y0_;
};

/// Integrates `sys` from the coherent initial state on `grid`. Grid points where the
/// signal population (if it is a variable) is negative are flagged unphysical.
Trajectory<cplx> integrate_moments(const MomentSystem& sys, double alpha0, const std::vector<double>& grid,
                                   const OdeOptions& opt = {});

/// The order-two-limit flow alpha' = -sinh(2 eta)/2, eta' = alpha as an ODE, state (eta, alpha).
Trajectory<double> integrate_reduced_flow(double alpha0, const std::vector<double>& grid, const OdeOptions& opt = {});

}  // namespace pdc

#endif  // PDC_MOMENT_EVAL_HPP
