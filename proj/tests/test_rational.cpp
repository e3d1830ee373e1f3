#include "doctest.h"

#include "carpet/interval.hpp"
#include "carpet/rational.hpp"

using namespace carpet;

TEST_CASE("fraction arithmetic and comparison") {
  BigRat a(1, 3), b(2, 5);
  CHECK((a + b).str() == "11/15");
  CHECK((a - b).str() == "-1/15");
  CHECK((a * b).str() == "2/15");
  CHECK((a / b).str() == "5/6");
  CHECK(a < b);
  CHECK(BigRat(4, 6) == BigRat(2, 3));
  CHECK(BigRat(-3, -9) == BigRat(1, 3));
  CHECK(BigRat(1, -2) < BigRat(0));
}

TEST_CASE("parse and print round trip") {
  CHECK(BigRat::parse("7/4").str() == "7/4");
  CHECK(BigRat::parse("-6/4").str() == "-3/2");
  CHECK(BigRat::parse("12").str() == "12");
  CHECK_THROWS_AS(BigRat::parse("x/y"), Error);
  CHECK_THROWS_AS(BigRat::parse("1/0"), Error);
}

TEST_CASE("floor and ceil with negatives") {
  CHECK(BigRat(7, 2).floor() == 3);
  CHECK(BigRat(-7, 2).floor() == -4);
  CHECK(BigRat(7, 2).ceil() == 4);
  CHECK(BigRat(-7, 2).ceil() == -3);
  CHECK(BigRat(6, 3).floor() == 2);
  CHECK(BigRat(-6, 3).floor() == -2);
}

TEST_CASE("integer nth roots") {
  CHECK(nth_root_floor(BigInt(0), 3) == 0);
  CHECK(nth_root_floor(BigInt(1), 7) == 1);
  CHECK(nth_root_floor(BigInt(26), 3) == 2);
  CHECK(nth_root_floor(BigInt(27), 3) == 3);
  CHECK(nth_root_floor(BigInt(28), 3) == 3);
  BigInt big = ipow(BigInt(12345), 10);
  CHECK(nth_root_floor(big, 10) == 12345);
  CHECK(nth_root_floor(big - 1, 10) == 12344);
}

TEST_CASE("power enclosures are certified and narrow") {
  // 3^(3/10): irrational; enclosure must bracket and have width 2^-bits.
  RatInterval e = pow_enclosure(BigInt(3), BigRat(3, 10), 64);
  CHECK(e.width() == pow2_inv(64));
  CHECK(cmp_power_vs_rational(BigInt(3), BigRat(3, 10), e.lo) > 0);
  CHECK(cmp_power_vs_rational(BigInt(3), BigRat(3, 10), e.hi) < 0);

  // Exact cases collapse to points.
  CHECK(pow_enclosure(BigInt(9), BigRat(1, 2), 64).is_point());
  CHECK(pow_enclosure(BigInt(9), BigRat(1, 2), 64).lo == BigRat(3));
  CHECK(pow_enclosure(BigInt(8), BigRat(-2, 3), 64).lo == BigRat(1, 4));
  CHECK(pow_enclosure(BigInt(5), BigRat(0), 64).lo == BigRat(1));

  // Negative exponent enclosure brackets too.
  RatInterval n = pow_enclosure(BigInt(3), BigRat(-3, 10), 96);
  CHECK(n.lo > BigRat(0));
  CHECK(cmp_power_vs_rational(BigInt(3), BigRat(-3, 10), n.lo) > 0);
  CHECK(cmp_power_vs_rational(BigInt(3), BigRat(-3, 10), n.hi) < 0);
  CHECK(n.width() <= pow2_inv(95));
}

TEST_CASE("interval arithmetic respects monotone bounds") {
  RatInterval a(BigRat(1, 2), BigRat(2, 3));
  RatInterval b(BigRat(-1, 3), BigRat(1, 4));
  RatInterval s = a + b;
  CHECK(s.lo == BigRat(1, 6));
  CHECK(s.hi == BigRat(11, 12));
  RatInterval p = a * b;
  CHECK(p.lo == BigRat(-2, 9));
  CHECK(p.hi == BigRat(1, 6));
  CHECK(a.reciprocal().lo == BigRat(3, 2));
  CHECK(a.reciprocal().hi == BigRat(2));
}

TEST_CASE("deterministic decimal rendering") {
  CHECK(to_decimal_string(BigRat(1, 3), 6) == "0.333333");
  CHECK(to_decimal_string(BigRat(-1, 8), 6) == "-0.125");
  CHECK(to_decimal_string(BigRat(5), 4) == "5");
  CHECK(to_decimal_string(BigRat(0), 4) == "0");
}
