#include <doctest.h>

#include <Eigen/Eigenvalues>
#include <cmath>
#include <numbers>
#include <random>

#include "oracle.hpp"
#include "pdc/cumulant.hpp"
#include "pdc/moment_eval.hpp"
#include "pdc/moment_system.hpp"
#include "pdc/observables.hpp"
#include "pdc/operator_poly.hpp"
#include "pdc/special_functions.hpp"
#include "pdc/superposed_state.hpp"
#include "pdc/witnesses.hpp"

using namespace pdc;

namespace {

Rational random_rational(std::mt19937_64& rng) {
  std::uniform_int_distribution<int> num(-40, 40), den(1, 30);
  return {num(rng), den(rng)};
}

Coefficient random_coefficient(std::mt19937_64& rng) { return {random_rational(rng), random_rational(rng)}; }

OperatorPoly random_poly(std::mt19937_64& rng, int terms, int max_order) {
  OperatorPoly p;
  for (int i = 0; i < terms; ++i) p.add(oracle::random_monomial(rng, 1, max_order), random_coefficient(rng));
  return p;
}

std::vector<Monomial> monomials_up_to(int order) {
  std::vector<Monomial> out;
  std::array<int, 6> p{};
  auto rec = [&](auto&& self, int slot, int left) -> void {
    if (slot == 6) {
      out.emplace_back(p[0], p[1], p[2], p[3], p[4], p[5]);
      return;
    }
    for (int k = 0; k <= left; ++k) {
      p[static_cast<std::size_t>(slot)] = k;
      self(self, slot + 1, left - k);
    }
  };
  rec(rec, 0, order);
  return out;
}

std::vector<double> random_times(std::mt19937_64& rng, int count, double t_end) {
  std::uniform_real_distribution<double> u(0.0, t_end);
  std::vector<double> t(static_cast<std::size_t>(count));
  for (auto& x : t) x = u(rng);
  std::sort(t.begin(), t.end());
  return t;
}

}  // namespace

TEST_CASE("rational field axioms") {
  std::mt19937_64 rng(1);
  for (int trial = 0; trial < 200; ++trial) {
    const Rational a = random_rational(rng), b = random_rational(rng), c = random_rational(rng);
    CHECK(a + b == b + a);
    CHECK(a * b == b * a);
    CHECK((a + b) + c == a + (b + c));
    CHECK((a * b) * c == a * (b * c));
    CHECK(a * (b + c) == a * b + a * c);
    CHECK(a - a == Rational(0));
    if (!a.is_zero()) CHECK(a / a == Rational(1));
    CHECK(a.den() > 0);
    const Coefficient x = random_coefficient(rng), y = random_coefficient(rng);
    CHECK((x * y).conj() == x.conj() * y.conj());
  }
}

TEST_CASE("operator products are associative and respect the adjoint") {
  std::mt19937_64 rng(2);
  for (int trial = 0; trial < 40; ++trial) {
    const OperatorPoly x = random_poly(rng, 3, 3), y = random_poly(rng, 3, 3), z = random_poly(rng, 2, 2);
    CHECK((x * y) * z == x * (y * z));
    CHECK((x * y).adjoint() == y.adjoint() * x.adjoint());
    CHECK(x.adjoint().adjoint() == x);
    const OperatorPoly xy = x * y;
    for (const auto& [m, c] : xy.terms()) CHECK_FALSE(c.is_zero());
  }
}

TEST_CASE("normal ordering agrees with dense Fock matrices up to order four") {
  const int d = 9, limit = 4;
  const oracle::TruncatedModes fock(d);
  const auto block = fock.low_block(limit);
  const auto all = monomials_up_to(4);
  int checked = 0;
  for (const auto& x : all)
    for (const auto& y : all) {
      if (x.order() + y.order() > 4) continue;
      const double err = oracle::block_difference(oracle::SpMat(fock.of(x) * fock.of(y)),
                                                  fock.of(normal_order_product(x, y)), block);
      if (err > 1e-9) FAIL_CHECK("<" << x.name() << "> * <" << y.name() << "> differs by " << err);
      ++checked;
    }
  CHECK(checked > 1000);
}

TEST_CASE("moment polynomials and monomials conjugate as involutions") {
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 50; ++trial) {
    const Monomial m = oracle::random_monomial(rng, 2, 5);
    CHECK(m.conj().conj() == m);
    CHECK(m.conj_rep() == m.conj().conj_rep());
    CHECK(m.swap_signal_idler().swap_signal_idler() == m);
    const MomentPoly p = truncated_rhs(m, std::max(2, m.order()));
    CHECK(p.conj().conj() == p);
  }
}

TEST_CASE("equations of motion commute with conjugation") {
  std::mt19937_64 rng(4);
  for (int trial = 0; trial < 40; ++trial) {
    const Monomial m = oracle::random_monomial(rng, 2, 4);
    CHECK(heisenberg_rhs(m.conj()) == heisenberg_rhs(m).adjoint());
  }
  for (int n : {1, 2, 3}) {
    const MomentSystem sys = generate_system(n);
    for (std::size_t k = 0; k < sys.size(); ++k) {
      const Monomial& v = sys.variables[k];
      INFO("order " << n << " <" << v.name() << ">");
      CHECK(truncated_rhs(v.conj(), n) == sys.rhs[k].conj());
    }
  }
}

TEST_CASE("the generated systems conserve pump plus signal photons identically") {
  const Monomial np = Monomial::number(Mode::pump), ns = Monomial::number(Mode::signal), ni = Monomial::number(Mode::idler);
  for (int n : {2, 3, 4, 5}) {
    INFO("order " << n);
    CHECK((truncated_rhs(np, n) + truncated_rhs(ns, n)).is_zero());
    CHECK((truncated_rhs(np, n) + truncated_rhs(ni, n)).is_zero());
  }
  for (int n : {2, 3}) {
    const MomentSystem sys = generate_system(n);
    REQUIRE(sys.index_of(np).has_value());
    REQUIRE(sys.index_of(ns).has_value());
    CHECK((sys.rhs_of(np) + sys.rhs_of(ns)).is_zero());
  }
}

TEST_CASE("cumulant closure at order two is exact for random Gaussian states") {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> amp(0.0, 0.8), phase(-3.0, 3.0), sq(0.0, 0.4);
  for (int st_trial = 0; st_trial < 4; ++st_trial) {
    const auto st = oracle::FullState::gaussian(std::polar(amp(rng), phase(rng)), sq(rng), phase(rng), 32);
    for (int trial = 0; trial < 12; ++trial) {
      const Monomial m = oracle::random_monomial(rng, 2, 4);
      if (m.order() < 3) continue;
      std::complex<double> closed;
      const MomentPoly expanded = express_moment(m, 2);
      for (const auto& [prod, c] : expanded.terms()) {
        std::complex<double> v = c.to_complex();
        for (const auto& f : prod) v *= st.expectation(f);
        closed += v;
      }
      INFO("<" << m.name() << ">");
      CHECK(std::abs(st.expectation(m) - closed) < 1e-10);
    }
  }
}

TEST_CASE("Jacobi identities on random arguments") {
  std::mt19937_64 rng(6);
  std::uniform_real_distribution<double> u(-20.0, 20.0), m01(0.0, 1.0), wide(-30.0, 30.0);
  for (int trial = 0; trial < 300; ++trial) {
    const double x = u(rng), m = trial % 2 ? m01(rng) : wide(rng);
    const JacobiTriple j = jacobi_elliptic(x, m);
    INFO("u=" << x << " m=" << m);
    CHECK(std::abs(j.sn * j.sn + j.cn * j.cn - 1.0) < 1e-12);
    CHECK(std::abs(j.dn * j.dn + m * j.sn * j.sn - 1.0) < 1e-12 * std::max(1.0, std::abs(m)));
  }
}

TEST_CASE("second-order solution is monotone before tau_max and conserves its energy") {
  for (double a2 : {1.0, 25.0, 100.0, 1600.0}) {
    const double a0 = std::sqrt(a2);
    const SecondOrderSolution sol(a0);
    const double tm = sol.tau_max();
    INFO("alpha0^2=" << a2);
    CHECK(std::abs(sol.at(tm).alpha) < 1e-9);
    double prev_eta = -1.0, prev_alpha = 2 * a0;
    for (int i = 0; i <= 300; ++i) {
      const double t = 3.0 * tm * i / 300;
      const auto p = sol.at(t);
      CHECK(std::abs(p.alpha * p.alpha + std::pow(std::sinh(p.eta), 2) - a2) < 1e-9 * std::max(1.0, a2));
      if (t < tm * (1 - 1e-9)) {
        CHECK(p.eta > prev_eta);
        CHECK(p.alpha < prev_alpha);
        prev_eta = p.eta;
        prev_alpha = p.alpha;
      }
    }
  }
}

TEST_CASE("depletion times grow with the allowed depletion") {
  for (double a2 : {25.0, 400.0}) {
    double prev = 0.0;
    for (double delta : {0.001, 0.01, 0.1, 0.5}) {
      const DepletionTime d = depletion_time(std::sqrt(a2), delta);
      CHECK(d.exact > prev);
      CHECK(d.approx > 0.0);
      prev = d.exact;
    }
  }
}

TEST_CASE("moment integration conserves pump plus signal at every order") {
  const double a0 = 5.0;
  const double tm = SecondOrderSolution(a0).tau_max();
  std::vector<double> grid;
  for (int i = 0; i <= 40; ++i) grid.push_back(tm * i / 40);
  OdeOptions opt;
  for (int n : {2, 3, 4}) {
    const MomentSystem sys = generate_system(n);
    const auto traj = integrate_moments(sys, a0, grid, opt);
    const auto ip = *sys.index_of(Monomial::number(Mode::pump));
    const auto is = *sys.index_of(Monomial::number(Mode::signal));
    double drift = 0.0;
    for (std::size_t k = 0; k < traj.size(); ++k) {
      const auto y = traj.state(k);
      drift = std::max(drift, std::abs((y[static_cast<Eigen::Index>(ip)] + y[static_cast<Eigen::Index>(is)]).real() - 25.0));
    }
    INFO("order " << n << " reached " << traj.size());
    CHECK(drift < 10 * opt.rtol * 25.0);
  }
}

TEST_CASE("sector evolution is orthogonal and matches dense exponentials") {
  std::mt19937_64 rng(7);
  std::uniform_int_distribution<int> pick_n(0, 64);
  std::uniform_real_distribution<double> pick_t(0.0, 3.0);
  for (int trial = 0; trial < 30; ++trial) {
    const int n = pick_n(rng);
    const auto grid = random_times(rng, 3, 3.0);
    const SkewTridiagonal g = sector_generator(n);
    Eigen::VectorXd c0 = Eigen::VectorXd::Zero(n + 1);
    c0[0] = 1.0;
    const auto out = evolve_sector(n, c0, grid);
    // exp(tG) through the Hermitian matrix iG
    const Eigen::MatrixXcd herm = std::complex<double>(0, 1) * g.dense().cast<std::complex<double>>();
    const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> eig(herm);
    for (std::size_t k = 0; k < grid.size(); ++k) {
      const Eigen::VectorXcd phase = (eig.eigenvalues() * std::complex<double>(0, -grid[k])).array().exp();
      const Eigen::VectorXcd ref = eig.eigenvectors() * phase.asDiagonal() * eig.eigenvectors().adjoint() * c0;
      INFO("N=" << n << " tau=" << grid[k]);
      CHECK(std::abs(out[k].norm() - 1.0) < 1e-10);
      CHECK((out[k].cast<std::complex<double>>() - ref).cwiseAbs().maxCoeff() < 1e-9);
    }
  }
}

TEST_CASE("exact states obey conservation, selection rules and gauge covariance") {
  std::mt19937_64 rng(8);
  for (double a2 : {25.0, 100.0}) {
    const double a0 = std::sqrt(a2);
    ExactSimulation sim(a0);
    std::uniform_real_distribution<double> gauge(-3.0, 3.0);
    for (double tau : random_times(rng, 10, 3 * tau_max(a0).exact)) {
      sim.advance_to(tau);
      const SuperposedState s = sim.state();
      INFO("alpha0^2=" << a2 << " tau=" << tau);
      const double norm = s.norm2();
      CHECK(std::abs(norm - sim.cutoffs().mass) < 1e-10);
      const double np = moment(s, Monomial::number(Mode::pump)).real() / norm;
      const double ns = moment(s, Monomial::number(Mode::signal)).real() / norm;
      const double ni = moment(s, Monomial::number(Mode::idler)).real() / norm;
      CHECK(std::abs(np + ns - a2) < 1e-8 * a2);
      CHECK(std::abs(ns - ni) < 1e-8 * a2);

      for (int c = 0; c <= 1; ++c)
        for (int d = 0; d <= 2; ++d)
          for (int l = 0; l <= 2; ++l)
            for (int m = 0; m <= 2; ++m) {
              if (l == m) continue;
              CHECK(std::abs(moment(s, Monomial(c, d, 0, l, 0, m))) < 1e-10);
              CHECK(std::abs(moment(s, Monomial(c, d, l, 0, m, 0))) < 1e-10);
            }

      const double phi0 = gauge(rng), theta = gauge(rng);
      const SuperposedState g = apply_gauge(s, phi0, theta);
      for (int trial = 0; trial < 8; ++trial) {
        const Monomial m = oracle::random_monomial(rng, 2, 4);
        const std::complex<double> base = moment(s, m);
        const double arg = phi0 * (m.pow[1] - m.pow[0]) + (theta + phi0) * (m.pow[3] - m.pow[2]);
        INFO("<" << m.name() << ">");
        CHECK(std::abs(moment(g, m) - base * std::polar(1.0, arg)) < 1e-10 * std::max(1.0, std::abs(base)));
      }

      const CovarianceMatrix6 cov = covariance(s);
      CHECK(cov.v.block<2, 4>(0, 2).cwiseAbs().maxCoeff() < 1e-10 * a2);
    }
  }
}

TEST_CASE("pump reduced density is a state") {
  std::mt19937_64 rng(9);
  for (double a2 : {25.0, 400.0}) {
    ExactSimulation sim(std::sqrt(a2));
    for (double tau : random_times(rng, 3, 2 * tau_max(std::sqrt(a2)).exact)) {
      sim.advance_to(tau);
      const SuperposedState s = sim.state();
      const ReducedDensity rho = reduced_density(s, Mode::pump);
      const Eigen::MatrixXcd m = rho.matrix / rho.trace();
      INFO("alpha0^2=" << a2 << " tau=" << tau);
      CHECK((m - m.adjoint()).cwiseAbs().maxCoeff() < 1e-12);
      CHECK(Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd>(m, Eigen::EigenvaluesOnly).eigenvalues().minCoeff() > -1e-10);
      CHECK(std::abs(rho.trace() / s.norm2() - 1.0) < 1e-10);
      CHECK(uncertainty_margin(covariance(s)) > -1e-9);
    }
  }
}

TEST_CASE("witnesses are real and gauge invariant along the dynamics") {
  std::mt19937_64 rng(10);
  std::uniform_real_distribution<double> gauge(-3.0, 3.0);
  const double a0 = 5.0;
  ExactSimulation sim(a0);
  for (double tau : random_times(rng, 10, 2 * tau_max(a0).exact)) {
    sim.advance_to(tau);
    const SuperposedState s = sim.state();
    const SuperposedState g = apply_gauge(s, gauge(rng), gauge(rng));
    INFO("tau=" << tau);
    for (auto f : {&w4, &w6}) {
      const WitnessValue a = f(s, std::numbers::pi / 4), b = f(g, std::numbers::pi / 4);
      CHECK(a.imag_residue <= 1e-9 * std::max(1.0, std::pow(a.scale, 3)));
      CHECK(std::abs(a.value - b.value) <= 1e-9 * std::max(1.0, std::pow(a.scale, 3)));
      CHECK(a.entangled == b.entangled);
    }
  }
}

TEST_CASE("witnesses never flag random product states") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> amp(-4.0, 4.0), sq(-1.0, 1.0), th(0.0, std::numbers::pi);
  for (int trial = 0; trial < 30; ++trial) {
    const double a = amp(rng), r = sq(rng), theta = th(rng);
    const SuperposedState s = gaussian_product_state(a, r);
    INFO("alpha=" << a << " r=" << r << " theta=" << theta);
    CHECK(w4(s, theta).value >= -1e-9);
    CHECK(w6(s, theta).value >= -1e-9);
    CHECK(tripartite_margin(frame_transform(s, a, r)) >= -1e-9);
  }
}
