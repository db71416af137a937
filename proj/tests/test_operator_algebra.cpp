#include <doctest.h>

#include <fstream>
#include <random>
#include <sstream>
#include <stdexcept>

#include "oracle.hpp"
#include "pdc/cumulant.hpp"
#include "pdc/moment_system.hpp"
#include "pdc/operator_poly.hpp"
#include "pdc/rational.hpp"
#include "pdc/system_text.hpp"

using namespace pdc;

namespace {

const Monomial kAp = Monomial::lowering(Mode::pump);
const Monomial kAs = Monomial::lowering(Mode::signal);
const Monomial kAi = Monomial::lowering(Mode::idler);
const Monomial kApD = Monomial::raising(Mode::pump);
const Monomial kAsD = Monomial::raising(Mode::signal);
const Monomial kAiD = Monomial::raising(Mode::idler);

std::string read_file(const std::string& name) {
  std::ifstream in(std::string(PDC_GOLDEN_DIR) + "/" + name);
  REQUIRE(in.good());
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::complex<double> evaluate(const MomentPoly& p, const oracle::FullState& st) {
  std::complex<double> total;
  for (const auto& [prod, c] : p.terms()) {
    std::complex<double> v = c.to_complex();
    for (const auto& m : prod) v *= st.expectation(m);
    total += v;
  }
  return total;
}

void check_same_system(const MomentSystem& expected, const MomentSystem& actual) {
  REQUIRE(expected.size() == actual.size());
  for (const auto& v : expected.variables) {
    INFO("variable <" << v.name() << ">");
    REQUIRE(actual.index_of(v).has_value());
    CHECK(format_poly(actual.rhs_of(v)) == format_poly(expected.rhs_of(v)));
    CHECK(actual.rhs_of(v) == expected.rhs_of(v));
  }
}

}  // namespace

TEST_CASE("rational arithmetic is exact and normalised") {
  CHECK(Rational(6, -4) == Rational(-3, 2));
  CHECK(Rational(6, -4).den() == 2);
  CHECK(Rational(1, 3) + Rational(1, 6) == Rational(1, 2));
  CHECK(Rational(2, 3) * Rational(9, 4) == Rational(3, 2));
  CHECK(Rational(1, 2) / Rational(-1, 4) == Rational(-2));
  CHECK(Rational(1, 3) < Rational(1, 2));
  CHECK(Rational(-7, 3).str() == "-7/3");
  CHECK(Rational(4).str() == "4");
  CHECK(Rational(0, 5).is_zero());
  CHECK_THROWS_AS(Rational(1, 0), std::domain_error);
  const Rational big(INT64_MAX / 2);
  CHECK_THROWS_AS(big * Rational(3), std::overflow_error);
  CHECK_THROWS_AS(Rational(INT64_MAX) + Rational(1), std::overflow_error);

  const Coefficient i(0, 1);
  CHECK(i * i == Coefficient(-1));
  CHECK(Coefficient(Rational(1, 2), 3).str() == "(1/2+3i)");
  CHECK(Coefficient(1, -2).conj() == Coefficient(1, 2));
}

TEST_CASE("monomial naming, conjugation and ordering") {
  const Monomial m(1, 2, 0, 1, 3, 0);
  CHECK(m.name() == "ap' ap^2 as ai'^3");
  CHECK(Monomial::parse(m.name()) == m);
  CHECK(Monomial::parse("1").is_identity());
  CHECK(m.order() == 7);
  CHECK(m.conj() == Monomial(2, 1, 1, 0, 0, 3));
  CHECK(m.conj().conj() == m);
  CHECK(m.conj_rep() == m.conj().conj_rep());
  CHECK(Monomial(1, 1, 2, 2, 0, 0).is_balanced());
  CHECK_FALSE(m.is_balanced());
  CHECK(Monomial(0, 0, 1, 0, 0, 1).swap_signal_idler() == Monomial(0, 0, 0, 1, 1, 0));
  CHECK(kAp < Monomial(0, 2, 0, 0, 0, 0));  // graded: order first
  CHECK(kAs * kAi == Monomial(0, 0, 0, 1, 0, 1));
  CHECK_THROWS_AS(kAp * kApD, std::logic_error);
  CHECK_THROWS_AS(Monomial::parse("ap ap'"), std::invalid_argument);
  CHECK_THROWS_AS(Monomial::parse("aq"), std::invalid_argument);
  CHECK_THROWS_AS(Monomial::parse("ap^0"), std::invalid_argument);
}

TEST_CASE("operator polynomials drop zero terms") {
  OperatorPoly p(kAp, 3);
  p.add(kAp, -3);
  CHECK(p.empty());
  OperatorPoly q = OperatorPoly(Monomial(1, 0, 0, 1, 0, 0), Coefficient(2, 1));
  CHECK(q.adjoint().coeff(Monomial(0, 1, 1, 0, 0, 0)) == Coefficient(2, -1));
  CHECK(q.adjoint().adjoint() == q);
}

TEST_CASE("canonical commutator") {
  const OperatorPoly aad = normal_order_product(kAp, kApD);
  OperatorPoly expect(Monomial::number(Mode::pump));
  expect.add(Monomial{}, 1);
  CHECK(aad == expect);
  // a^2 a'^2 = a'^2 a^2 + 4 a' a + 2
  const OperatorPoly sq = normal_order_product(Monomial::lowering(Mode::signal, 2), Monomial::raising(Mode::signal, 2));
  CHECK(sq.coeff(Monomial(0, 0, 2, 2, 0, 0)) == Coefficient(1));
  CHECK(sq.coeff(Monomial(0, 0, 1, 1, 0, 0)) == Coefficient(4));
  CHECK(sq.coeff(Monomial{}) == Coefficient(2));
  CHECK(sq.size() == 3);
}

TEST_CASE("normal ordering agrees with truncated Fock matrices") {
  const oracle::TruncatedModes fock(8);
  const auto block = fock.low_block(3);
  std::mt19937_64 rng(20240611);
  for (int trial = 0; trial < 40; ++trial) {
    const Monomial x = oracle::random_monomial(rng, 2, 5);
    const Monomial y = oracle::random_monomial(rng, 2, 5);
    INFO(x.name() << " * " << y.name());
    const oracle::SpMat lhs = fock.of(x) * fock.of(y);
    CHECK(oracle::block_difference(lhs, fock.of(normal_order_product(x, y)), block) < 1e-9);
  }
}

TEST_CASE("Heisenberg right-hand side is the commutator with the generator") {
  OperatorPoly k(Monomial(1, 0, 0, 1, 0, 1));
  k.add(Monomial(0, 1, 1, 0, 1, 0), -1);
  CHECK(evolution_generator() == k);

  const oracle::TruncatedModes fock(8);
  const auto block = fock.low_block(4);
  const oracle::SpMat km = fock.of(k);
  std::mt19937_64 rng(77);
  for (int trial = 0; trial < 25; ++trial) {
    const Monomial m = oracle::random_monomial(rng, 2, 4);
    INFO("<" << m.name() << ">");
    const oracle::SpMat mm = fock.of(m);
    const oracle::SpMat comm = km * mm - mm * km;
    CHECK(oracle::block_difference(comm, fock.of(heisenberg_rhs(m)), block) < 1e-9);
  }
  // d<ap>/dtau = -<as ai>
  CHECK(heisenberg_rhs(kAp) == OperatorPoly(Monomial(0, 0, 0, 1, 0, 1), -1));
}

TEST_CASE("cumulant expansion formulas") {
  auto mom = [](const Monomial& m) { return MomentPoly::moment(m); };
  // second order: <AB> = <A><B>
  CHECK(cumulant_expand(Monomial(0, 0, 0, 1, 0, 1)) == mom(kAs) * mom(kAi));
  // third order, distinct operators
  const MomentPoly third = mom(Monomial(1, 0, 0, 1, 0, 0)) * mom(kAi) + mom(Monomial(1, 0, 0, 0, 0, 1)) * mom(kAs) +
                           mom(Monomial(0, 0, 0, 1, 0, 1)) * mom(kApD) - mom(kApD) * mom(kAs) * mom(kAi) * Coefficient(2);
  CHECK(cumulant_expand(Monomial(1, 0, 0, 1, 0, 1)) == third);
  // third order with a repeated operator
  const MomentPoly rep = mom(Monomial(2, 0, 0, 0, 0, 0)) * mom(kAp) +
                         mom(Monomial(1, 1, 0, 0, 0, 0)) * mom(kApD) * Coefficient(2) -
                         mom(kApD) * mom(kApD) * mom(kAp) * Coefficient(2);
  CHECK(cumulant_expand(Monomial(2, 1, 0, 0, 0, 0)) == rep);
}

TEST_CASE("order-2 closure is exact on Gaussian states") {
  const auto st = oracle::FullState::gaussian(std::polar(0.6, 0.4), 0.3, -0.7, 34);
  CHECK(st.norm2() == doctest::Approx(1.0).epsilon(1e-12));
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 30; ++trial) {
    const Monomial m = oracle::random_monomial(rng, 2, 5);
    if (m.order() < 3) continue;
    INFO("<" << m.name() << ">");
    const auto exact = st.expectation(m);
    const auto closed = evaluate(express_moment(m, 2), st);
    CHECK(std::abs(exact - closed) < 1e-11);
  }
}

TEST_CASE("cumulant truncation rejects out-of-range input") {
  CHECK_THROWS_AS(cumulant_truncate(OperatorPoly(kAp), 0), std::invalid_argument);
  CHECK_THROWS_AS(cumulant_truncate(OperatorPoly(Monomial(2, 2, 0, 0, 0, 0)), 2), std::invalid_argument);
  CHECK_NOTHROW(cumulant_truncate(OperatorPoly(Monomial(2, 1, 0, 0, 0, 0)), 2));
}

TEST_CASE("system sizes") {
  const MomentSystem two = generate_system(2);
  const MomentSystem three = generate_system(3);
  CHECK(two.size() == 15);
  CHECK(three.size() == 43);
  CHECK(reduce_for_initial_state(two).size() == 3);
  CHECK(reduce_for_initial_state(three).size() == 7);
  for (const auto& v : three.variables) CHECK(v.is_conj_rep());
}

TEST_CASE("golden order-2 system") {
  const MomentSystem golden = parse_system(read_file("order2_system.txt"));
  check_same_system(golden, generate_system(2));
}

TEST_CASE("golden reduced systems") {
  check_same_system(parse_system(read_file("order2_reduced.txt")), reduce_for_initial_state(generate_system(2)));
  check_same_system(parse_system(read_file("order3_reduced.txt")), reduce_for_initial_state(generate_system(3)));
}

TEST_CASE("system text round trip") {
  for (int n : {2, 3, 4}) {
    const MomentSystem sys = generate_system(n);
    const std::string text = export_system(sys);
    const MomentSystem back = parse_system(text);
    check_same_system(sys, back);
    CHECK(export_system(parse_system(export_system(back))) == export_system(back));
  }
  const MomentPoly p = parse_poly("(1/2+3i)*<as> - 2*<ap><as ai> + <ap' ap>^2");
  CHECK(parse_poly(format_poly(p)) == p);
  CHECK(p.coeff({kAs}) == Coefficient(Rational(1, 2), 3));
  CHECK(p.coeff({Monomial(1, 1, 0, 0, 0, 0), Monomial(1, 1, 0, 0, 0, 0)}) == Coefficient(1));
  CHECK_THROWS(parse_poly("2*<ap"));
  CHECK_THROWS(parse_system("d<ap>/dtau = <as ai"));
}

TEST_CASE("initial moments and selection rule") {
  CHECK(initial_moment(Monomial(2, 3, 0, 0, 0, 0), 1.5) == doctest::Approx(std::pow(1.5, 5)));
  CHECK(initial_moment(Monomial{}, 3.0) == 1.0);
  CHECK(initial_moment(Monomial(0, 1, 1, 1, 0, 0), 3.0) == 0.0);
  CHECK(selection_rule_zero(kAs));
  CHECK(selection_rule_zero(Monomial(0, 0, 1, 0, 0, 1)));
  CHECK_FALSE(selection_rule_zero(Monomial(0, 0, 0, 1, 0, 1)));
  CHECK_FALSE(selection_rule_zero(Monomial(0, 1, 1, 1, 0, 0)));
  CHECK(reduced_name(Monomial(0, 0, 0, 0, 1, 1)) == Monomial(0, 0, 1, 1, 0, 0));
  CHECK(reduced_name(kApD) == kAp);
}

TEST_CASE("reduced expressions resolve aliases and zero moments") {
  const MomentSystem red = reduce_for_initial_state(generate_system(2));
  // <ap' ap> stays as the conservation alias of <as' as>; <as> vanishes
  REQUIRE(red.aliases.size() == 1);
  CHECK(red.aliases[0].moment == Monomial::number(Mode::pump));
  CHECK(red.aliases[0].partner == Monomial::number(Mode::signal));
  const MomentPoly np = reduce_expression(red, MomentPoly::moment(Monomial::number(Mode::pump)));
  CHECK(np == MomentPoly::moment(Monomial::number(Mode::pump)));
  const MomentPoly mixed = reduce_expression(red, MomentPoly::moment(Monomial(0, 0, 0, 0, 1, 1)) * MomentPoly::moment(kApD));
  CHECK(mixed == MomentPoly::moment(Monomial::number(Mode::signal)) * MomentPoly::moment(kAp));
  CHECK_THROWS_AS(reduce_expression(red, MomentPoly::moment(Monomial(0, 3, 0, 0, 0, 0))), std::out_of_range);
  CHECK(reduce_expression(red, MomentPoly::moment(kAs)).is_zero());
}
