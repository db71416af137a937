#ifndef PDC_SPECIAL_FUNCTIONS_HPP
#define PDC_SPECIAL_FUNCTIONS_HPP

#include <optional>

namespace pdc {

struct JacobiTriple {
  double sn;
  double cn;
  double dn;
};

/// sn, cn, dn of real argument u and real parameter m (any sign, any size).
JacobiTriple jacobi_elliptic(double u, double m);
/// Same, with the complementary parameter 1 - m given separately for 0 <= m <= 1
/// so that values close to m = 1 keep full relative accuracy.
JacobiTriple jacobi_elliptic(double u, double m, double m1);

/// Complete elliptic integral of the first kind K(m) for m < 1, via AGM; m1 = 1 - m.
double ellint_k(double m);
double ellint_k_complement(double m1);
/// Real part of K(m) for m > 1 by the reciprocal-modulus relation Re K(m) = K(1/m)/sqrt(m).
double ellint_k_real_part(double m);

/// The Gaussian-limit pump/twin dynamics alpha' = -sinh(2 eta)/2, eta' = alpha with
/// alpha(0) = alpha0, eta(0) = 0.
class SecondOrderSolution {
 public:
  explicit SecondOrderSolution(double alpha0);

  struct Point {
    double eta;
    double alpha;
    bool beyond_first_period;
  };

  double alpha0() const { return alpha0_; }
  Point at(double tau) const;
  double signal_population(double tau) const;
  /// First zero of alpha, i.e. the first maximum of sinh^2(eta).
  double tau_max() const;
  double period() const { return 4.0 * quarter_period_ / rate_; }

 private:
  double alpha0_;
  double param_;       // alpha0^2 / (alpha0^2 + 1)
  double param_c_;     // 1 / (alpha0^2 + 1)
  double rate_;        // sqrt(alpha0^2 + 1)
  double quarter_period_;
};

struct TauMax {
  double exact;
  double approx;
};

struct DepletionTime {
  double approx;
  double exact;
};

struct ThresholdTimes {
  std::optional<double> squeezing;     // smallest positive root of the sixth-order condition
  std::optional<double> entanglement;  // smallest positive root of the eighth-order condition
  double squeezing_asymptote;
  double entanglement_asymptote;
};

/// (eta, alpha) at tau; same as sol.at(tau).
inline SecondOrderSolution::Point eta_alpha(const SecondOrderSolution& sol, double tau) { return sol.at(tau); }

TauMax tau_max(double alpha0);
/// Time at which alpha^2 has dropped to (1 - delta) alpha0^2.
DepletionTime depletion_time(double alpha0, double delta);
ThresholdTimes threshold_times(double alpha0, double delta = 0.01);

}  // namespace pdc

#endif  // PDC_SPECIAL_FUNCTIONS_HPP
