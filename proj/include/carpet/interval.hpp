#pragma once

#include <cstdint>

#include "carpet/rational.hpp"

namespace carpet {

// Closed rational interval enclosing an (often irrational) real value.
// Width is controlled by the producer; consumers decide strict inequalities
// against the conservative side and narrow on demand.
struct RatInterval {
  BigRat lo, hi;

  RatInterval() = default;
  RatInterval(BigRat point) : lo(point), hi(std::move(point)) {}  // NOLINT
  RatInterval(BigRat l, BigRat h) : lo(std::move(l)), hi(std::move(h)) {
    if (lo > hi) fail(Errc::InternalError, "inverted interval");
  }

  bool is_point() const { return lo == hi; }
  BigRat width() const { return hi - lo; }
  BigRat mid() const { return (lo + hi) / BigRat(2); }

  bool contains(const BigRat& v) const { return lo <= v && v <= hi; }

  // Tri-valued comparison against a rational: -1 surely below, +1 surely
  // above, 0 when the enclosure straddles v.
  int cmp(const BigRat& v) const {
    if (hi < v) return -1;
    if (lo > v) return 1;
    return 0;
  }

  friend RatInterval operator+(const RatInterval& a, const RatInterval& b) {
    return RatInterval(a.lo + b.lo, a.hi + b.hi);
  }
  friend RatInterval operator-(const RatInterval& a, const RatInterval& b) {
    return RatInterval(a.lo - b.hi, a.hi - b.lo);
  }
  friend RatInterval operator*(const RatInterval& a, const RatInterval& b) {
    BigRat p1 = a.lo * b.lo, p2 = a.lo * b.hi, p3 = a.hi * b.lo, p4 = a.hi * b.hi;
    return RatInterval(rat_min(rat_min(p1, p2), rat_min(p3, p4)),
                       rat_max(rat_max(p1, p2), rat_max(p3, p4)));
  }
  friend RatInterval operator*(const RatInterval& a, const BigRat& s) {
    return s >= BigRat(0) ? RatInterval(a.lo * s, a.hi * s) : RatInterval(a.hi * s, a.lo * s);
  }
  friend RatInterval operator+(const RatInterval& a, const BigRat& s) {
    return RatInterval(a.lo + s, a.hi + s);
  }
  friend RatInterval operator-(const BigRat& s, const RatInterval& a) {
    return RatInterval(s - a.hi, s - a.lo);
  }

  RatInterval reciprocal() const {
    if (lo.sign() <= 0) fail(Errc::PreconditionViolated, "reciprocal of non-positive interval");
    return RatInterval(BigRat(1) / hi, BigRat(1) / lo);
  }

  RatInterval reduced() const { return RatInterval(lo.reduced(), hi.reduced()); }
};

// Enclosure of base^(p/q) for integer base >= 1 and exponent p/q in (-1, 1],
// dyadic endpoints with denominator 2^bits. Detects exactly-rational powers
// (base a perfect q-th power) and returns a point interval in that case.
inline RatInterval pow_enclosure(const BigInt& base, const BigRat& exponent, unsigned bits) {
  if (base < 1) fail(Errc::PreconditionViolated, "pow_enclosure base < 1");
  BigRat e = exponent.reduced();
  if (e.is_zero() || base == 1) return RatInterval(BigRat(1));
  const bool negative = e.sign() < 0;
  const BigInt pn = negative ? BigInt(-e.num()) : e.num();
  const std::uint64_t p = pn.convert_to<std::uint64_t>();
  const std::uint64_t q = e.den().convert_to<std::uint64_t>();

  if (q == 1) {
    BigInt v = ipow(base, p);
    return negative ? RatInterval(BigRat(BigInt(1), v)) : RatInterval(BigRat(v));
  }
  BigInt root = nth_root_floor(base, q);
  if (ipow(root, q) == base) {
    BigInt v = ipow(root, p);
    return negative ? RatInterval(BigRat(BigInt(1), v)) : RatInterval(BigRat(v));
  }

  const BigInt denom = BigInt(1) << bits;
  if (!negative) {
    // floor(2^bits * base^(p/q)) via the q-th root of base^p * 2^(q*bits).
    BigInt a = ipow(base, p) << static_cast<unsigned>(q * bits);
    BigInt r = nth_root_floor(a, q);
    return RatInterval(BigRat(r, denom), BigRat(r + 1, denom));
  }
  BigInt bp = ipow(base, p);
  BigInt scale = BigInt(1) << static_cast<unsigned>(q * bits);
  BigInt a = scale / bp;
  BigInt r = nth_root_floor(a, q);
  BigInt u = r + 1;
  while (ipow(u, q) * bp < scale) ++u;
  return RatInterval(BigRat(r, denom), BigRat(u, denom));
}

// Exact sign of base^exponent - c for integer base >= 1, rational exponent
// and rational c. Decidable because base^(p/q) >= c  <=>  base^p >= c^q.
inline int cmp_power_vs_rational(const BigInt& base, const BigRat& exponent, const BigRat& c) {
  if (base < 1) fail(Errc::PreconditionViolated, "cmp_power base < 1");
  if (c.sign() <= 0) return 1;  // base^e > 0
  BigRat e = exponent.reduced();
  const bool negative = e.sign() < 0;
  const std::uint64_t p = (negative ? BigInt(-e.num()) : e.num()).convert_to<std::uint64_t>();
  const std::uint64_t q = e.den().convert_to<std::uint64_t>();
  // base^(p/q) <=> c  <=>  base^p <=> c^q      (p, q >= 0)
  // base^(-p/q) <=> c <=>  1 <=> c^q * base^p
  BigRat cq = rat_pow(c, q);
  if (!negative) return BigRat(ipow(base, p)).cmp(cq);
  return BigRat(1).cmp(cq * BigRat(ipow(base, p)));
}

}  // namespace carpet
