#ifndef PDC_WITNESSES_HPP
#define PDC_WITNESSES_HPP

#include <Eigen/Core>
#include <array>
#include <complex>
#include <numbers>
#include <vector>

#include "pdc/superposed_state.hpp"

namespace pdc {

/// Exponents (j1, j2, j3, j4) labelling one row/column of the moment matrix.
using PptIndex = std::array<int, 4>;

/// <(a')^k2 a^k1 (a')^j1 a^j2 (b')^j4 b^j3 (b')^k3 b^k4> with a the pump and
/// b = cos(theta) a_s + sin(theta) a_i.
std::complex<double> ppt_entry(const SuperposedState& s, const PptIndex& j, const PptIndex& k, double theta);
Eigen::MatrixXcd ppt_matrix(const SuperposedState& s, const std::vector<PptIndex>& index, double theta);

struct WitnessValue {
  double value = 0.0;          // real part of the determinant
  double imag_residue = 0.0;   // |imaginary part|
  double scale = 0.0;          // largest |entry|
  bool entangled = false;      // value < -max(1e-9, 1e-12 scale)
};

WitnessValue determinant_witness(const Eigen::MatrixXcd& m);

/// Fourth-order minor: rows (0,1,0,1), (1,0,0,1), (1,0,1,0).
WitnessValue w4(const SuperposedState& s, double theta = std::numbers::pi / 4);
/// Sixth-order minor: rows (0,0,0,0), (1,0,2,0), (0,1,0,2).
WitnessValue w6(const SuperposedState& s, double theta = std::numbers::pi / 4);

std::vector<PptIndex> w4_index();
std::vector<PptIndex> w6_index();

/// sqrt(<N_p><N_s N_i>) - |<a_p a_s a_i>|; negative means a violation.
double tripartite_margin(const SuperposedState& transformed);

struct WitnessReport {
  double theta = std::numbers::pi / 4;
  std::vector<double> tau;
  std::vector<WitnessValue> w4;
  std::vector<WitnessValue> w6;
  std::vector<double> tripartite;  // NaN where not computed
};

/// |alpha>_p (x) two-mode squeezed vacuum with squeezing eta, truncated where
/// probabilities fall below `threshold`. A product across pump | signal-idler.
SuperposedState gaussian_product_state(double alpha, double eta, double threshold = 1e-24);

}  // namespace pdc

#endif  // PDC_WITNESSES_HPP
