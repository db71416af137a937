#include "pdc/witnesses.hpp"

#include <Eigen/LU>
#include <cmath>

#include "pdc/observables.hpp"
#include "pdc/operator_poly.hpp"

namespace pdc {
namespace {

using cplx = std::complex<double>;

double binomial(int n, int k) {
  double r = 1.0;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

// <P (b')^e b^f> with b = c a_s + s a_i and P a pump monomial.
cplx pump_b_moment(const SuperposedState& st, const Monomial& pump, int e, int f, double c, double s) {
  cplx sum = 0.0;
  for (int i = 0; i <= e; ++i)
    for (int j = 0; j <= f; ++j) {
      const double w = binomial(e, i) * binomial(f, j) * std::pow(c, i + j) * std::pow(s, e - i + f - j);
      if (w == 0.0) continue;
      const Monomial m(pump.pow[0], pump.pow[1], i, j, e - i, f - j);
      sum += w * moment(st, m);
    }
  return sum;
}

}  // namespace

cplx ppt_entry(const SuperposedState& s, const PptIndex& j, const PptIndex& k, double theta) {
  const OperatorPoly pump = normal_order_product(Monomial(k[1], k[0], 0, 0, 0, 0), Monomial(j[0], j[1], 0, 0, 0, 0));
  const OperatorPoly twin = normal_order_product(Monomial(0, 0, j[3], j[2], 0, 0), Monomial(0, 0, k[2], k[3], 0, 0));
  const double c = std::cos(theta), sn = std::sin(theta);
  cplx sum = 0.0;
  for (const auto& [pm, pc] : pump.terms())
    for (const auto& [bm, bc] : twin.terms())
      sum += pc.to_complex() * bc.to_complex() * pump_b_moment(s, pm, bm.pow[2], bm.pow[3], c, sn);
  return sum;
}

Eigen::MatrixXcd ppt_matrix(const SuperposedState& s, const std::vector<PptIndex>& index, double theta) {
  const auto n = static_cast<Eigen::Index>(index.size());
  Eigen::MatrixXcd m(n, n);
  for (Eigen::Index r = 0; r < n; ++r)
    for (Eigen::Index c = 0; c < n; ++c)
      m(r, c) = ppt_entry(s, index[static_cast<std::size_t>(r)], index[static_cast<std::size_t>(c)], theta);
  return m;
}

WitnessValue determinant_witness(const Eigen::MatrixXcd& m) {
  WitnessValue w;
  const cplx d = m.determinant();
  w.value = d.real();
  w.imag_residue = std::abs(d.imag());
  w.scale = m.cwiseAbs().maxCoeff();
  w.entangled = w.value < -std::max(1e-9, 1e-12 * w.scale);
  return w;
}

std::vector<PptIndex> w4_index() { return {{0, 1, 0, 1}, {1, 0, 0, 1}, {1, 0, 1, 0}}; }
std::vector<PptIndex> w6_index() { return {{0, 0, 0, 0}, {1, 0, 2, 0}, {0, 1, 0, 2}}; }

WitnessValue w4(const SuperposedState& s, double theta) { return determinant_witness(ppt_matrix(s, w4_index(), theta)); }
WitnessValue w6(const SuperposedState& s, double theta) { return determinant_witness(ppt_matrix(s, w6_index(), theta)); }

double tripartite_margin(const SuperposedState& t) {
  const double np = moment(t, Monomial::number(Mode::pump)).real();
  const double nsni = moment(t, Monomial(0, 0, 1, 1, 1, 1)).real();
  const double amp = std::abs(moment(t, Monomial(0, 1, 0, 1, 0, 1)));
  return std::sqrt(std::max(0.0, np * nsni)) - amp;
}

SuperposedState gaussian_product_state(double alpha, double eta, double threshold) {
  const double mean = alpha * alpha;
  int rows = 1;
  if (mean > 0.0) {
    const PoissonCutoffs c = poisson_cutoffs(std::abs(alpha), threshold);
    rows = c.high + 1;
  }
  const double t = std::tanh(std::abs(eta));
  int cols = 1;
  if (t > 0.0) cols = static_cast<int>(std::ceil(std::log(threshold) / (2.0 * std::log(t)))) + 1;
  Eigen::VectorXcd pump(rows);
  for (int m = 0; m < rows; ++m) {
    const double logp = mean == 0.0 ? (m == 0 ? 0.0 : -INFINITY)
                                    : -mean + 2.0 * m * std::log(std::abs(alpha)) - std::lgamma(m + 1.0);
    pump[m] = std::exp(0.5 * logp) * (alpha < 0.0 && m % 2 ? -1.0 : 1.0);
  }
  Eigen::VectorXcd twin(cols);
  const double sign = eta < 0.0 ? -1.0 : 1.0;
  for (int k = 0; k < cols; ++k) twin[k] = std::pow(sign * t, k) / std::cosh(eta);
  SuperposedState s;
  s.alpha0 = alpha;
  s.n1 = 0;
  s.n2 = rows + cols;
  s.banded = false;
  s.beta = pump * twin.transpose();
  return s;
}

}  // namespace pdc
