#include "carpet/direction.hpp"

#include <set>

#include "carpet/errors.hpp"

namespace carpet {

RationalDirection RationalDirection::from_vector(BigInt a, BigInt b) {
  if (a == 0 && b == 0) fail(Errc::PreconditionViolated, "zero direction vector");
  BigInt g = boost::multiprecision::gcd(a < 0 ? BigInt(-a) : a, b < 0 ? BigInt(-b) : b);
  a /= g;
  b /= g;
  RationalDirection d;
  d.v1 = a;
  d.v2 = b;
  BigInt absa = a < 0 ? -a : a, absb = b < 0 ? -b : b;
  d.swapped = absb > absa;
  BigInt u1 = d.swapped ? b : a;
  BigInt u2 = d.swapped ? a : b;
  d.negated = u1 < 0;
  d.q = d.negated ? -u1 : u1;
  d.p = d.negated ? -u2 : u2;
  return d;
}

RatInterval inv_sqrt_enclosure(const BigInt& s, unsigned bits) {
  if (s < 1) fail(Errc::PreconditionViolated, "inv_sqrt of non-positive integer");
  BigInt r0 = boost::multiprecision::sqrt(s);
  if (r0 * r0 == s) return RatInterval(BigRat(BigInt(1), r0));
  BigInt scaled = s << (2 * bits);
  BigInt r = boost::multiprecision::sqrt(scaled);  // r <= 2^bits sqrt(s) < r+1
  BigInt two_b = BigInt(1) << bits;
  return RatInterval(BigRat(two_b, r + 1), BigRat(two_b, r));
}

std::pair<RatInterval, RatInterval> RationalDirection::unit_enclosure(unsigned bits) const {
  RatInterval inv = inv_sqrt_enclosure(v1 * v1 + v2 * v2, bits);
  return {inv * BigRat(v1), inv * BigRat(v2)};
}

UnitVecEnclosure UnitVecEnclosure::from_rational(const Vec2R& v, unsigned bits) {
  BigRat s = v.norm_sq();
  if (s.sign() <= 0) fail(Errc::PreconditionViolated, "cannot normalize zero vector");
  // 1/|v| = sqrt(d/n) for s = n/d, enclosed as sqrt(n d)/n.
  BigRat sr = s.reduced();
  BigInt prod = sr.num() * sr.den();
  BigInt r0 = boost::multiprecision::sqrt(prod);
  RatInterval inv_norm;
  if (r0 * r0 == prod) {
    inv_norm = RatInterval(BigRat(r0, sr.num()).reduced());
  } else {
    BigInt scaled = prod << (2 * bits);
    BigInt r = boost::multiprecision::sqrt(scaled);
    BigInt two_b = BigInt(1) << bits;
    inv_norm = RatInterval(BigRat(r, two_b) / BigRat(sr.num()),
                           BigRat(r + 1, two_b) / BigRat(sr.num()));
  }
  UnitVecEnclosure e;
  e.x = inv_norm * v.x;
  e.y = inv_norm * v.y;
  return e;
}

UnitVecEnclosure UnitVecEnclosure::exact(const Vec2R& unit) {
  if (unit.norm_sq() != BigRat(1)) fail(Errc::PreconditionViolated, "vector is not exactly unit");
  UnitVecEnclosure e;
  e.x = RatInterval(unit.x);
  e.y = RatInterval(unit.y);
  return e;
}

namespace {

// Ascending Farey sequence of order n on [0, 1].
std::vector<std::pair<BigInt, BigInt>> farey_sequence(std::int64_t n) {
  std::vector<std::pair<BigInt, BigInt>> out;
  BigInt a = 0, b = 1, c = 1, d = n;
  out.emplace_back(a, b);
  while (c <= n) {
    BigInt k = (n + b) / d;
    BigInt a2 = c, b2 = d;
    c = k * c - a;
    d = k * d - b;
    a = a2;
    b = b2;
    out.emplace_back(a, b);
  }
  return out;
}

}  // namespace

std::vector<RationalDirection> rational_direction_net(const BigRat& eps) {
  if (eps.sign() <= 0 || eps > BigRat(2))
    fail(Errc::PreconditionViolated, "net resolution must lie in (0, 2]");
  BigInt order = (BigRat(4) / eps).ceil();
  if (order < 1) order = 1;
  auto slopes = farey_sequence(order.convert_to<std::int64_t>());

  std::vector<RationalDirection> net;
  std::set<std::pair<BigInt, BigInt>> seen;
  auto push = [&](const BigInt& a, const BigInt& b) {
    if (a == 0 && b == 0) return;
    RationalDirection d = RationalDirection::from_vector(a, b);
    if (seen.insert({d.v1, d.v2}).second) net.push_back(d);
  };
  for (const auto& [p, q] : slopes) {
    push(q, p);
    push(q, -p);
    push(-q, p);
    push(-q, -p);
    push(p, q);
    push(p, -q);
    push(-p, q);
    push(-p, -q);
  }
  return net;
}

}  // namespace carpet
