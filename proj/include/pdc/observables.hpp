#ifndef PDC_OBSERVABLES_HPP
#define PDC_OBSERVABLES_HPP

#include <Eigen/Core>
#include <complex>
#include <optional>
#include <string>
#include <vector>

#include "pdc/monomial.hpp"
#include "pdc/superposed_state.hpp"

namespace pdc {

/// <(ap')^c ap^d (as')^e as^f (ai')^g ai^h> contracted directly on beta.
/// Throws std::out_of_range if a non-banded state has amplitude that the shift moves off the grid.
std::complex<double> moment(const SuperposedState& s, const Monomial& req);

struct CovarianceMatrix6 {
  Eigen::Matrix<double, 6, 6> v;     // over (Xp, Pp, Xs, Ps, Xi, Pi)
  Eigen::Matrix<double, 6, 1> mean;
};

CovarianceMatrix6 covariance(const SuperposedState& s);
/// Smallest eigenvalue of V + i Omega / 2 (nonnegative for physical states).
double uncertainty_margin(const CovarianceMatrix6& c);

struct ReducedDensity {
  Mode mode = Mode::pump;
  Eigen::MatrixXcd matrix;    // pump: full matrix
  Eigen::VectorXd diagonal;   // signal: diagonal in the Fock basis
  double trace() const;
};

ReducedDensity reduced_density(const SuperposedState& s, Mode mode);
double purity(const ReducedDensity& rho);
/// Tr rho_p^2 through the twin-side Gram matrix, skipping columns whose squared norm is
/// below `column_floor`.
double pump_purity(const SuperposedState& s, double column_floor = 1e-30);
/// 1 - Tr rho_p^2 of the normalised state, free of the cancellation in 1 - pump_purity.
/// Quadratic in the number of kept columns.
double pump_impurity(const SuperposedState& s, double column_floor = 1e-30);
/// standard_row switches to pump_impurity when the purity is within this of one.
inline constexpr double kImpurityRefine = 1e-6;
double signal_purity(const SuperposedState& s);

/// Fock-number distribution of the pump or signal mode.
std::vector<double> photon_statistics(const SuperposedState& s, Mode mode);

struct ParitySplit {
  std::vector<double> even;  // P(0), P(2), ...
  std::vector<double> odd;   // P(1), P(3), ...
  double even_mass = 0.0;
  double odd_mass = 0.0;
};
ParitySplit parity_split(const std::vector<double>& probabilities);

inline constexpr double kPopulationFloor = 1e-14;

/// One time slice of the quantities tracked throughout: populations, amplitudes,
/// pump quadrature variances, g2 of pump and signal (NaN when the population is below
/// kPopulationFloor), and optionally the two purities.
struct StandardRow {
  double tau = 0.0;
  double n_p = 0.0;
  double n_s = 0.0;
  std::complex<double> a_p;
  std::complex<double> a_p2;
  std::complex<double> a_s_a_i;
  double var_x_p = 0.0;
  double var_p_p = 0.0;
  double g2_p = 0.0;
  double g2_s = 0.0;
  double purity_p = 0.0;
  double purity_s = 0.0;
};

StandardRow standard_row(const SuperposedState& s, bool with_pump_purity = true);
std::vector<StandardRow> standard_series(const std::vector<SuperposedState>& states, bool with_pump_purity = true);
std::vector<std::string> standard_columns();
std::vector<double> standard_values(const StandardRow& r);

/// Pump variances from <ap' ap>, <ap^2>, <ap>.
double variance_x(double n, std::complex<double> a2, std::complex<double> a);
double variance_p(double n, std::complex<double> a2, std::complex<double> a);

/// First `count` interior local maxima of a sampled series, refined by 3-point quadratic
/// interpolation. Fewer are returned if the series has fewer.
std::vector<double> local_maxima(const std::vector<double>& times, const std::vector<double>& values, int count = 2);

}  // namespace pdc

#endif  // PDC_OBSERVABLES_HPP
