#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "oracle.hpp"
#include "pdc/experiments.hpp"
#include "pdc/witnesses.hpp"

using namespace pdc;
using cplx = std::complex<double>;

namespace {

/// Product state cut to `keep` pump and twin levels so the oracle sees exactly the same vector,
/// stored with `pad` empty rows and columns.
SuperposedState cut_product(double alpha, double r, int keep, int pad) {
  SuperposedState s = gaussian_product_state(alpha, r);
  Eigen::MatrixXcd b = Eigen::MatrixXcd::Zero(keep + pad, keep + pad);
  b.topLeftCorner(keep, keep) = s.beta.topLeftCorner(keep, keep);
  s.beta = b;
  s.n2 = 2 * (keep + pad);
  return s;
}

}  // namespace

TEST_CASE("moment-matrix entries follow their operator ordering") {
  const int d = 16;
  const oracle::TruncatedModes fock(d);
  const SuperposedState s = cut_product(0.8, 0.35, 12, 4);
  CHECK_THROWS_AS(ppt_entry(cut_product(2.0, 0.35, 4, 0), {1, 0, 0, 0}, {0, 0, 0, 0}, 0.3), std::out_of_range);
  Eigen::VectorXcd psi = Eigen::VectorXcd::Zero(fock.size());
  for (Eigen::Index p = 0; p < s.rows(); ++p)
    for (Eigen::Index k = 0; k < s.cols(); ++k) psi[(p * d + k) * d + k] = s.beta(p, k);

  std::mt19937_64 rng(8);
  std::uniform_int_distribution<int> pick(0, 1);
  for (double theta : {std::numbers::pi / 4, 0.3}) {
    const oracle::SpMat b = oracle::SpMat(fock.lower[1] * std::cos(theta) + fock.lower[2] * std::sin(theta));
    const oracle::SpMat bd = oracle::SpMat(b.adjoint());
    auto power = [&](const oracle::SpMat& x, int n) {
      oracle::SpMat out = fock.identity();
      for (int i = 0; i < n; ++i) out = oracle::SpMat(out * x);
      return out;
    };
    for (int trial = 0; trial < 25; ++trial) {
      PptIndex j{}, k{};
      for (auto& x : j) x = pick(rng) + pick(rng);
      for (auto& x : k) x = pick(rng);
      const oracle::SpMat op = power(fock.raise[0], k[1]) * power(fock.lower[0], k[0]) * power(fock.raise[0], j[0]) *
                               power(fock.lower[0], j[1]) * power(bd, j[3]) * power(b, j[2]) * power(bd, k[2]) *
                               power(b, k[3]);
      const cplx ref = psi.dot(op * psi);
      INFO("theta=" << theta << " trial=" << trial);
      CHECK(std::abs(ppt_entry(s, j, k, theta) - ref) < 1e-12 * std::max(1.0, std::abs(ref)));
    }
  }
}

TEST_CASE("witness index sets and matrix shape") {
  CHECK(w4_index() == std::vector<PptIndex>{{0, 1, 0, 1}, {1, 0, 0, 1}, {1, 0, 1, 0}});
  CHECK(w6_index() == std::vector<PptIndex>{{0, 0, 0, 0}, {1, 0, 2, 0}, {0, 1, 0, 2}});
  ExactSimulation sim(5.0);
  sim.advance_to(0.2);
  const Eigen::MatrixXcd m = ppt_matrix(sim.state(), w6_index(), std::numbers::pi / 4);
  CHECK(m.rows() == 3);
  CHECK((m - m.adjoint()).cwiseAbs().maxCoeff() < 1e-10 * m.cwiseAbs().maxCoeff());
}

TEST_CASE("determinant witness") {
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(3, 3);
  m.diagonal() << 1.0, -2.0, 3.0;
  const WitnessValue w = determinant_witness(m);
  CHECK(w.value == doctest::Approx(-6.0));
  CHECK(w.scale == doctest::Approx(3.0));
  CHECK(w.entangled);
  CHECK_FALSE(determinant_witness(Eigen::MatrixXcd::Identity(3, 3)).entangled);
  // a negative value within the noise floor does not count
  Eigen::MatrixXcd tiny = Eigen::MatrixXcd::Identity(2, 2);
  tiny(1, 1) = -1e-12;
  CHECK_FALSE(determinant_witness(tiny).entangled);
}

TEST_CASE("product states satisfy every witness") {
  std::mt19937_64 rng(21);
  std::uniform_real_distribution<double> amp(0.0, 4.0), sq(0.0, 1.2);
  for (int trial = 0; trial < 12; ++trial) {
    const double a = amp(rng), r = sq(rng);
    const SuperposedState s = gaussian_product_state(a, r);
    INFO("alpha=" << a << " r=" << r);
    CHECK(w4(s).value >= -1e-9);
    CHECK(w6(s).value >= -1e-9);
    CHECK_FALSE(w4(s).entangled);
    CHECK_FALSE(w6(s).entangled);
    CHECK(tripartite_margin(frame_transform(s, a, r)) >= -1e-9);
  }
}

TEST_CASE("the exact dynamics becomes detectably entangled") {
  ExactSimulation sim(5.0);
  sim.advance_to(0.45);
  const SuperposedState s = sim.state();
  const WitnessValue v = w6(s);
  CHECK(v.entangled);
  CHECK(v.imag_residue < 1e-8 * v.scale);
  // early on the state is close to a product and the minor is not negative
  ExactSimulation early(5.0);
  early.advance_to(0.02);
  CHECK_FALSE(w6(early.state()).entangled);
}
