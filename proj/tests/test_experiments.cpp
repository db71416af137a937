#include <doctest.h>

#include <cmath>

#include "pdc/experiments.hpp"
#include "pdc/special_functions.hpp"

using namespace pdc;

TEST_CASE("grids") {
  const auto lin = linear_grid(0.0, 1.0, 5);
  CHECK(lin == std::vector<double>{0.0, 0.25, 0.5, 0.75, 1.0});
  const auto lg = log_grid(1e-3, 1e-1, 3);
  REQUIRE(lg.size() == 3);
  CHECK(lg[0] == 1e-3);
  CHECK(lg[1] == doctest::Approx(1e-2).epsilon(1e-14));
  CHECK(lg[2] == 1e-1);
  CHECK_THROWS(linear_grid(0.0, 1.0, 1));
  CHECK_THROWS(log_grid(0.0, 1.0, 4));
}

TEST_CASE("exact run bookkeeping") {
  const double a0 = 5.0;
  const auto grid = linear_grid(0.0, default_tau_end(a0), 60);
  CHECK(default_tau_end(a0) == doctest::Approx(1.3 * tau_max(a0).exact));
  const ExactSeries s = run_exact(a0, grid);
  CHECK(s.rows.size() == grid.size());
  CHECK(s.tau() == grid);
  CHECK(s.norm_error < 1e-13);
  CHECK(s.conservation_error < 1e-10 * 25.0);
  const auto ns = s.column(&StandardRow::n_s);
  CHECK(ns.front() == 0.0);
  CHECK(ns[30] == doctest::Approx(s.rows[30].n_s));
  CHECK(s.w4.empty());
  CHECK(s.stats.matvecs > 0);
}

TEST_CASE("root-found crossings of the exact dynamics") {
  const double a0 = 5.0;
  auto f = [](const SuperposedState& st) { return standard_row(st, false).n_s - 1.0; };
  const auto t = exact_crossing(a0, f, linear_grid(0.0, 0.4, 9));
  REQUIRE(t.has_value());
  ExactSimulation sim(a0);
  sim.advance_to(*t);
  CHECK(standard_row(sim.state(), false).n_s == doctest::Approx(1.0).epsilon(1e-7));
  CHECK_FALSE(exact_crossing(a0, f, linear_grid(0.0, 0.01, 3)).has_value());

  const auto d = exact_depletion_time(a0, 0.01);
  REQUIRE(d.has_value());
  ExactSimulation at(a0);
  at.advance_to(*d);
  const double np = standard_row(at.state(), false).n_p / at.state().norm2();
  CHECK(np == doctest::Approx(0.99 * 25.0).epsilon(1e-8));
  CHECK(std::abs(*d / depletion_time(a0, 0.01).approx - 1.0) < 0.05);
}

TEST_CASE("cumulant runs") {
  const double a0 = 5.0;
  const auto grid = linear_grid(0.0, 0.5, 51);
  const CumulantSeries two = run_cumulant(2, a0, grid);
  CHECK(two.order == 2);
  CHECK(two.status == SegmentStatus::ok);
  REQUIRE(two.tau.size() == grid.size());
  const SecondOrderSolution sol(a0);
  for (std::size_t i = 0; i < grid.size(); i += 10)
    CHECK(two.n_s[i] == doctest::Approx(sol.signal_population(grid[i])).epsilon(1e-8).scale(1e-12));

  // the mean-field order stays in the coherent state
  const CumulantSeries one = run_cumulant(1, a0, grid);
  CHECK(one.variables == 1);
  CHECK(one.n_s.back() == 0.0);

  // higher orders follow the exact dynamics more closely at early times
  const ExactSeries exact = run_exact(a0, grid);
  const auto ns = exact.column(&StandardRow::n_s);
  std::vector<std::size_t> vars;
  double prev = 0.0;
  for (int order : {2, 3, 4}) {
    const CumulantSeries c = run_cumulant(order, a0, grid);
    vars.push_back(c.variables);
    const auto t = relative_deviation_time(grid, ns, c.n_s);
    REQUIRE(t.has_value());
    CHECK(*t > prev);
    prev = *t;
  }
  CHECK(vars == std::vector<std::size_t>{4, 8, 19});
}

TEST_CASE("deviation and level crossings") {
  const auto t = linear_grid(0.0, 1.0, 11);
  std::vector<double> exact, approx;
  for (double x : t) {
    exact.push_back(2.0 + x);
    approx.push_back((2.0 + x) * (1.0 + 0.02 * x));
  }
  const auto d = relative_deviation_time(t, exact, approx);
  REQUIRE(d.has_value());
  CHECK(*d == doctest::Approx(0.5).epsilon(1e-12));
  CHECK_FALSE(relative_deviation_time(t, exact, exact).has_value());
  std::vector<double> with_zero = exact;
  with_zero[0] = 0.0;
  CHECK(relative_deviation_time(t, with_zero, approx).has_value());

  CHECK(*level_crossing(t, exact, 2.25, +1) == doctest::Approx(0.25).epsilon(1e-12));
  CHECK(*level_crossing(t, exact, 2.25, -1) == 0.0);
  CHECK_FALSE(level_crossing(t, exact, 1.5, -1).has_value());
  std::vector<double> late = exact;
  late[0] = late[1] = std::nan("");
  CHECK(*level_crossing(t, late, 2.25, -1) == doctest::Approx(0.2));
  CHECK_FALSE(level_crossing(t, exact, 5.0, +1).has_value());
}

TEST_CASE("threshold times from the exact series agree with root-finding") {
  const double a0 = 10.0, delta = 0.01;
  const auto grid = linear_grid(0.0, 0.3, 301);
  const ExactSeries s = run_exact(a0, grid);
  const ExactThresholds th = exact_thresholds(s, delta);
  REQUIRE(th.squeezing.has_value());
  REQUIRE(th.entanglement.has_value());
  REQUIRE(th.g2_pump.has_value());
  REQUIRE(th.g2_signal.has_value());
  const auto coarse = linear_grid(0.0, 0.3, 31);
  auto refine = [&](const std::function<double(const StandardRow&)>& g) {
    return exact_crossing(a0, [&](const SuperposedState& st) { return g(standard_row(st)); }, coarse);
  };
  const double n2 = s.cutoffs.high;
  const auto sq = refine([&](const StandardRow& r) { return r.var_p_p - 0.5 * (1 - delta); });
  const auto en = refine([&](const StandardRow& r) { return r.purity_p - (1 - delta * (1 - 1 / (n2 + 1))); });
  const auto gp = refine([&](const StandardRow& r) { return r.g2_p - (1 + delta); });
  const auto gs = refine([&](const StandardRow& r) { return r.g2_s - 2 * (1 - delta); });
  CHECK(*th.squeezing == doctest::Approx(*sq).epsilon(1e-4));
  CHECK(*th.entanglement == doctest::Approx(*en).epsilon(1e-4));
  CHECK(*th.g2_pump == doctest::Approx(*gp).epsilon(1e-4));
  CHECK(*th.g2_signal == doctest::Approx(*gs).epsilon(1e-4));
  // ordering seen at this amplitude
  CHECK(*th.g2_signal < *th.entanglement);
  CHECK(*th.entanglement < *th.squeezing);
  CHECK(*th.squeezing < *th.g2_pump);
}
