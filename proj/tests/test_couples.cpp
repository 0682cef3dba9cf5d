#include <cmath>
#include <vector>

#include "doctest.h"
#include "unibound/couples.hpp"

using namespace unibound;

TEST_CASE("couple evaluation") {
  auto v = FunctionCouple::const_power(0.0, 10.0).evaluate(3.0);
  CHECK(v.f == 1.0);
  CHECK(v.g == 1.0);

  v = FunctionCouple::equal_power(2.0, 10.0).evaluate(4.0);
  CHECK(v.f == doctest::Approx(36.0).epsilon(1e-15));
  CHECK(v.g == doctest::Approx(36.0).epsilon(1e-15));

  v = FunctionCouple::linear_power(0.5, 1.0).evaluate(0.75);
  CHECK(v.f == doctest::Approx(0.25).epsilon(1e-15));
  CHECK(v.g == doctest::Approx(0.5).epsilon(1e-15));

  CHECK_THROWS_AS(FunctionCouple::equal_power(2.0, 1.0).evaluate(1.0), Error);
  CHECK_THROWS_AS(FunctionCouple::equal_power(2.0, 1.0).evaluate(-0.1), Error);
}

TEST_CASE("divided differences match direct quotients away from the diagonal") {
  const auto c = FunctionCouple::neg_power(-0.5, 1.5, 2.0);
  const double x = 0.3, y = 1.1;
  const auto a = c.evaluate(x), b = c.evaluate(y);
  const auto d = c.divided_difference(x, y);
  CHECK(d.f == doctest::Approx((a.f - b.f) / (x - y)).epsilon(1e-13));
  CHECK(d.g == doctest::Approx((a.g - b.g) / (x - y)).epsilon(1e-13));
}

TEST_CASE("pairwise membership") {
  const std::vector<double> two{0.2, 0.8};
  auto r = check_membership(FunctionCouple::const_power(1.0, 1.0), two);
  CHECK(r.pass);
  CHECK(r.worst < 0.0);

  auto tab = FunctionCouple::tabulated({{0.2, 0.8, 1.0}, {0.8, 0.2, 1.0}}, 1.0);
  r = check_membership(tab, two);
  CHECK_FALSE(r.pass);
  CHECK(r.worst == doctest::Approx(1.0).epsilon(1e-14));
  REQUIRE(r.witness.has_value());
  CHECK(r.witness->first == 0.2);
  CHECK(r.witness->second == 0.8);

  const std::vector<double> three{0.1, 0.5, 0.9};
  CHECK(check_membership(FunctionCouple::equal_power(2.0, 1.0), three).pass);
}

TEST_CASE("certified families pass on dense samples") {
  std::vector<double> xs;
  for (int i = 1; i < 64; ++i) xs.push_back(i / 64.0 * 3.0);
  for (double a : {0.0, 0.5, 2.0, 7.0}) CHECK(check_membership(FunctionCouple::const_power(a, 3.0), xs).pass);
  for (double b : {0.5, 1.0, 3.0}) CHECK(check_membership(FunctionCouple::linear_power(b, 3.0), xs).pass);
  for (double d : {0.25, 1.0, 2.0}) CHECK(check_membership(FunctionCouple::equal_power(d, 3.0), xs).pass);
  CHECK(check_membership(FunctionCouple::neg_power(-1.0, 1.0, 3.0), xs).pass);
  CHECK(check_membership(FunctionCouple::neg_power(-0.5, 2.0, 3.0), xs).pass);
}

TEST_CASE("equal-power beyond 2 fails") {
  std::vector<double> xs;
  for (int i = 1; i < 64; ++i) xs.push_back(i / 64.0);
  const auto r = check_membership(FunctionCouple::equal_power(3.0, 1.0), xs);
  CHECK_FALSE(r.pass);
  CHECK(r.witness.has_value());
}

TEST_CASE("necessary differentiable condition") {
  const std::vector<double> half{0.5};
  auto r = check_necessary_differentiable(FunctionCouple::const_power(2.0, 1.0), half);
  CHECK(r.pass);
  // f' = 0; (-2/0.5)(-2/0.5) = 16
  CHECK(r.worst == doctest::Approx(16.0).epsilon(1e-14));

  r = check_necessary_differentiable(FunctionCouple::neg_power(-1.0, 1.0, 1.0), half);
  CHECK(r.pass);
  CHECK(r.worst == doctest::Approx(8.0 - 4.0).epsilon(1e-14));

  auto tab = FunctionCouple::tabulated({{0.5, 1.0, 1.0}}, 1.0);
  try {
    check_necessary_differentiable(tab, half);
    FAIL("expected unsupported");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::unsupported);
  }
}

TEST_CASE("couple spec parsing") {
  auto s = parse_couple_spec("const-power:1@10");
  CHECK(s.family == CoupleFamily::const_power);
  REQUIRE(s.params.size() == 1);
  CHECK(s.params[0] == 1.0);
  CHECK(s.lambda == 10.0);

  s = parse_couple_spec("neg-power:-0.5,2");
  CHECK(s.family == CoupleFamily::neg_power);
  CHECK(s.params.size() == 2);
  CHECK_FALSE(s.lambda.has_value());

  s = parse_couple_spec("tabulated:some/file.csv@2");
  CHECK(s.family == CoupleFamily::tabulated);
  CHECK(s.table_path == "some/file.csv");

  CHECK_THROWS_AS(parse_couple_spec("foo:@"), Error);
  CHECK_THROWS_AS(parse_couple_spec("equal-power"), Error);
  CHECK_THROWS_AS(parse_couple_spec("equal-power:x@1"), Error);
  CHECK_THROWS_AS(parse_couple_spec("neg-power:1@1"), Error);

  const auto c = make_couple(parse_couple_spec("equal-power:2"), 10.0);
  CHECK(c.lambda() == 10.0);
  CHECK(c.spec() == "equal-power:2@10");
  CHECK(make_couple(parse_couple_spec(c.spec())).spec() == c.spec());
}

TEST_CASE("scaling keeps membership") {
  std::vector<double> xs{0.1, 0.4, 0.7, 0.95};
  const auto c = FunctionCouple::linear_power(1.0, 1.0).scaled(3.0, 0.25);
  CHECK(check_membership(c, xs).pass);
  CHECK(c.evaluate(0.5).f == doctest::Approx(1.5));
}
