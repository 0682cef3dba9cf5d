#include <cmath>
#include <vector>

#include "doctest.h"
#include "unibound/abstract.hpp"

using namespace unibound;

namespace {

RealMatrix m2(double a, double b, double c, double d) {
  RealMatrix m(2, 2);
  m << a, b, c, d;
  return m;
}

OperatorTriple<double> two_by_two() {
  return {m2(1, 0, 0, 2), {m2(0, 1, 1, 0)}, {m2(0, 1, -1, 0)}};
}

}  // namespace

TEST_CASE("commutator examples") {
  const RealMatrix c = commutator(m2(1, 0, 0, 2), m2(0, 1, 1, 0));
  CHECK(c.isApprox(m2(0, -1, 1, 0)));
  const RealMatrix X = m2(1, 2, 3, 4);
  CHECK(commutator(X, X).isZero());
  CHECK(commutator(RealMatrix::Identity(2, 2), X).isZero());
  CHECK_THROWS_AS(commutator(X, RealMatrix::Identity(3, 3)), Error);
}

TEST_CASE("2x2 equality instance") {
  const auto r = verify_theorem(two_by_two(), 1, FunctionCouple::const_power(0.0, 2.0));
  CHECK(r.pass);
  CHECK(r.status == TheoremStatus::pass);
  CHECK(std::abs(r.lhs - 4.0) <= 1e-14);
  CHECK(std::abs(r.rhs - 4.0) <= 1e-14);
}

TEST_CASE("T = 0 gives 0 <= 0") {
  auto t = two_by_two();
  t.Ts[0].setZero();
  const auto r = verify_theorem(t, 1, FunctionCouple::equal_power(1.5, 2.0));
  CHECK(r.pass);
  CHECK(r.lhs == 0.0);
  CHECK(r.rhs == 0.0);
}

TEST_CASE("flipping the sign of T keeps the left side") {
  auto t = two_by_two();
  const auto r1 = verify_theorem(t, 1, FunctionCouple::const_power(1.0, 2.0));
  t.Ts[0] = -t.Ts[0];
  const auto r2 = verify_theorem(t, 1, FunctionCouple::const_power(1.0, 2.0));
  CHECK(r1.lhs == doctest::Approx(r2.lhs).epsilon(1e-14));
  CHECK(r1.rhs == doctest::Approx(r2.rhs).epsilon(1e-14));
}

TEST_CASE("corollary 2x2") {
  const std::vector<RealMatrix> Bs{m2(0, 1, 1, 0)};
  const auto r = verify_corollary(m2(1, 0, 0, 2), Bs, 1, FunctionCouple::const_power(0.0, 2.0));
  CHECK(r.pass);
  CHECK(r.lhs == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(r.rhs == doctest::Approx(1.0).epsilon(1e-14));

  const std::vector<RealMatrix> id{RealMatrix::Identity(2, 2)};
  const auto z = verify_corollary(m2(1, 0, 0, 2), id, 1, FunctionCouple::const_power(0.0, 2.0));
  CHECK(z.pass);
  CHECK(z.lhs == 0.0);
  CHECK(z.rhs == 0.0);
}

TEST_CASE("random instances pass") {
  const auto t = random_instance(8, 3, 42, Ensemble::dense_gaussian);
  const auto s = analyze_triple(t);
  for (Index k = 1; k < 8; ++k) {
    const auto r = evaluate_theorem(s, k, FunctionCouple::equal_power(2.0, 1.0));
    CHECK(r.pass);
    CHECK(r.quad_coeff >= -1e-9 * r.quad_scale);
  }
  const auto u = random_instance(10, 2, 5, Ensemble::dense_gaussian);
  const auto c = analyze_corollary(u.A, u.Bs);
  CHECK(c.identity_residual <= 1e-12 * std::max(1.0, c.identity_scale));
  for (Index k = 1; k < 10; ++k) CHECK(evaluate_theorem(c, k, FunctionCouple::linear_power(1.0, 1.0)).pass);
}

TEST_CASE("corollary with f = g = 1") {
  // (sum q_i)^2 <= sum q_i * sum ||[A,B]u_i||^2 / (z - lambda_i)
  const auto t = random_instance(6, 2, 3, Ensemble::dense_gaussian);
  const auto s = analyze_corollary(t.A, t.Bs);
  const Index k = 3;
  const double z = s.lambda(k);
  double q = 0.0, w = 0.0;
  for (Index i = 0; i < k; ++i) {
    q += s.quad(i);
    w += s.tnorm(i) / (z - s.lambda(i));
  }
  const auto r = evaluate_theorem(s, k, FunctionCouple::const_power(0.0, 1.0));
  CHECK(r.lhs == doctest::Approx(q * q).epsilon(1e-12));
  CHECK(r.rhs == doctest::Approx(q * w).epsilon(1e-12));
  CHECK(r.pass);
}

TEST_CASE("theorem errors") {
  const RealMatrix A = RealMatrix::Identity(2, 2);
  OperatorTriple<double> t{A, {m2(0, 1, 1, 0)}, {m2(0, 1, -1, 0)}};
  try {
    verify_theorem(t, 1, FunctionCouple::const_power(0.0, 1.0));
    FAIL("expected hypothesis error");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::hypothesis);
  }
  auto bad = two_by_two();
  bad.Ts[0] = m2(0, 1, 1, 0);
  CHECK_THROWS_AS(verify_theorem(bad, 1, FunctionCouple::const_power(0.0, 1.0)), Error);
  CHECK_THROWS_AS(verify_theorem(two_by_two(), 1, FunctionCouple::const_power(0.0, 1.0), 5.0), Error);
}

TEST_CASE("moment inequality") {
  RealVector u(2);
  u << 1, 1;
  u /= std::sqrt(2.0);
  RealMatrix Q = RealMatrix::Zero(2, 2);
  Q(0, 0) = 1;
  Q(1, 1) = 4;
  CHECK(moment_inequality_check(Q, u, 1, 2) == doctest::Approx(std::sqrt(8.5) - 2.5).epsilon(1e-14));
  CHECK(moment_inequality_check(Q, u, 0, 3) == doctest::Approx(0.0));
  CHECK(moment_inequality_check(RealMatrix::Identity(2, 2), u, 2, 5) == doctest::Approx(0.0));
  CHECK_THROWS_AS(moment_inequality_check(m2(1, 0, 0, -1), u, 1, 2), Error);
  CHECK_THROWS_AS(moment_inequality_check(Q, u, 3, 2), Error);
}

TEST_CASE("random instances are deterministic") {
  const auto a = random_instance(7, 2, 11, Ensemble::sparse);
  const auto b = random_instance(7, 2, 11, Ensemble::sparse);
  CHECK(a.A == b.A);
  for (std::size_t p = 0; p < a.Bs.size(); ++p) {
    CHECK(a.Bs[p] == b.Bs[p]);
    CHECK(a.Ts[p] == b.Ts[p]);
  }
  const auto c = random_instance(7, 2, 12, Ensemble::sparse);
  CHECK_FALSE(a.A == c.A);
}

TEST_CASE("commuting diagnostic has vanishing commutators") {
  const auto t = random_instance(6, 2, 1, Ensemble::commuting_diagnostic);
  for (const auto& B : t.Bs) CHECK(commutator(t.A, B).norm() <= 1e-10 * t.A.norm() * B.norm());
}

TEST_CASE("suite is independent of worker count") {
  AbstractSuiteConfig cfg;
  cfg.trials = 40;
  cfg.dim = 6;
  cfg.nops = 2;
  cfg.seed = 7;
  cfg.couples = {parse_couple_spec("equal-power:2"), parse_couple_spec("const-power:0")};
  AbstractSummary s1, s4;
  const auto r1 = run_abstract_suite(cfg, s1);
  cfg.workers = 4;
  const auto r4 = run_abstract_suite(cfg, s4);
  CHECK(s1.failures == 0);
  CHECK(s1.checks == s4.checks);
  CHECK(s1.worst_slack == s4.worst_slack);
  REQUIRE(r1.size() == r4.size());
  for (std::size_t i = 0; i < r1.size(); ++i) {
    CHECK(r1[i].trial == r4[i].trial);
    CHECK(r1[i].report.lhs == r4[i].report.lhs);
    CHECK(r1[i].report.rhs == r4[i].report.rhs);
  }
}
