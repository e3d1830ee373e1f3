#include "doctest.h"

#include <cmath>
#include <vector>

#include "carpet/prng.hpp"
#include "carpet/segment.hpp"

using namespace carpet;

namespace {

MembershipCertificate integer_base(const Schedule& s, const Index& i, long long ax, long long ay,
                                   std::int64_t depth) {
  auto res = member_depth(s, {BigRat(ax), BigRat(ay)}, i, depth);
  REQUIRE(res.is_member());
  return *res.certificate;
}

// Brute-force check that the full line x + (0, lambda) + R (q, p) misses all
// level-m squares: scans every centre whose shifted criterion could fire.
bool line_misses_level(const Schedule& s, const Index& j, std::int64_t m, const Vec2R& x,
                       const BigInt& q, const BigInt& p, const BigRat& lambda) {
  // |(x2 + lambda - c2) - (p/q)(x1 - c1)| >= j_m d_m blocks intersection.
  const BigRat d_prev = s.precision(m - 1);
  const BigRat slope = BigRat(p) / BigRat(q);
  BigInt a0 = (x.x / d_prev).floor();
  for (BigInt a = a0 - 3; a <= a0 + 3; ++a) {
    // For fixed column a, the nearest rows sit around the line height.
    BigRat cx = d_prev * BigRat(2 * a + 1, 2);
    BigRat height = x.y + lambda + slope * (cx - x.x);
    BigInt b0 = (height / d_prev).floor();
    for (BigInt b = b0 - 3; b <= b0 + 3; ++b) {
      BigRat cy = d_prev * BigRat(2 * b + 1, 2);
      BigRat expr = ((x.y + lambda - cy) - slope * (x.x - cx)).abs();
      // If expr < j_m d_m the line may hit the square: exact power compare.
      if (j.value_cmp(s, m, expr * BigRat(s.lattice_denominator(m))) > 0) return false;
    }
  }
  return true;
}

}  // namespace

TEST_CASE("psi enclosure matches the closed form") {
  Schedule s;
  Index i = Index::power("3/5"), j = Index::power("3/10");
  RatInterval psi = psi_enclosure(s, i, j);
  // psi = 1 - 3^(-3/10): check both bounds against the exact power compare.
  CHECK(cmp_power_vs_rational(BigInt(3), BigRat(-3, 10), BigRat(1) - psi.lo) < 0);
  CHECK(cmp_power_vs_rational(BigInt(3), BigRat(-3, 10), BigRat(1) - psi.hi) > 0);
  // Brute force: the supremum of j_m/i_m over m = 1..1000 is attained at m=1.
  RatInterval m1 = pow_enclosure(s.level_value(1), j.theta() - i.theta(), 96);
  for (std::int64_t m = 2; m <= 1000; ++m) {
    RatInterval r = pow_enclosure(s.level_value(m), j.theta() - i.theta(), 96);
    CHECK(r.lo <= m1.hi);
  }
  CHECK_THROWS_AS(psi_enclosure(s, i, i), Error);
  // Monotone: smaller exponent gap drives psi toward zero.
  RatInterval tight = psi_enclosure(s, Index::power("31/100"), Index::power("3/10"));
  CHECK(tight.hi < psi.lo);
  CHECK(tight.lo.sign() > 0);
}

TEST_CASE("delta0 levels and monotonicity in the slope denominator") {
  Schedule s;
  Index i = Index::power("9/10"), j = Index::power("1/10");
  auto d1 = delta0(s, i, j, BigRat(1), BigInt(1));
  auto d7 = delta0(s, i, j, BigRat(1), BigInt(7));
  CHECK(d7.delta0 <= d1.delta0);
  CHECK(d7.k0 >= d1.k0);

  // Independent oracle: scan levels with exact rationals until both
  // displayed conditions hold, using the certified lower psi bound.
  RatInterval psi = psi_enclosure(s, i, j);
  BigRat cap = BigRat(1) * psi.lo / BigRat(16);
  auto cond = [&](std::int64_t m) {
    bool a = cmp_power_vs_rational(s.level_value(m), j.theta() - i.theta(), cap) <= 0;
    bool b = j.value_cmp(s, m, BigRat(s.level_value(m)) / BigRat(5)) <= 0;
    return a && b;
  };
  std::int64_t k0 = 1;
  while (!cond(k0)) ++k0;
  CHECK(k0 == d1.k0);

  // delta0 < i_1 d_1 psi / 4 always (rho is strictly decreasing, k0 >= 1).
  RatInterval rho1 = i.value_enclosure(s, 1, 128) * psi * (s.precision(1) / BigRat(4));
  CHECK(d1.delta0 < rho1.hi);
  CHECK(d1.delta0.sign() > 0);
}

TEST_CASE("safe shift interval branches") {
  Schedule s(Schedule::Rule::Geometric);
  Index j = Index::power("1/4");
  const std::int64_t m = 4;
  const BigRat w = (j.value_enclosure(s, m, 96).hi * s.precision(m)).reduced();
  const BigInt q = 1, p = 0;

  // Slope 0 through the origin: progression gamma = d_{m-1}/2 + d_{m-1} Z is
  // far from small shifts, so the first branch returns [a, a + w].
  Vec2R x{BigRat(0), BigRat(0)};
  ShiftInterval I{BigRat(0), BigRat(4) * w};
  ShiftInterval got = safe_shift_interval(s, I, m, x, q, p, w);
  CHECK(got.lo == BigRat(0));
  CHECK(got.hi == w);

  // Base point sitting exactly on a bad shift at a: second branch puts the
  // interval at [a + 2w, a + 3w].
  Vec2R bad{BigRat(0), s.precision(m - 1) / BigRat(2)};  // gamma = 0
  ShiftInterval got2 = safe_shift_interval(s, I, m, bad, q, p, w);
  CHECK(got2.lo == BigRat(2) * w);
  CHECK(got2.hi == BigRat(3) * w);

  CHECK_THROWS_AS(safe_shift_interval(s, ShiftInterval{BigRat(0), BigRat(3) * w}, m, x, q, p, w),
                  Error);
}

TEST_CASE("safe shift intervals are sound on random instances") {
  Schedule s(Schedule::Rule::Geometric);
  Index j = Index::power("3/10");
  CounterRng rng(314);
  int instances = 0;
  while (instances < 60) {
    std::int64_t m = 3 + static_cast<std::int64_t>(rng.next_below(3));
    auto qs = static_cast<long long>(1 + rng.next_below(4));
    auto ps = static_cast<long long>(rng.next_below(2 * qs + 1)) - qs;
    BigInt g = boost::multiprecision::gcd(BigInt(ps < 0 ? -ps : ps), BigInt(qs));
    BigInt q = BigInt(qs) / g, p = BigInt(ps) / g;
    BigRat w = (j.value_enclosure(s, m, 96).hi * s.precision(m)).reduced();
    if (s.precision(m - 1) / BigRat(q) < BigRat(5) * w) continue;
    Vec2R x{BigRat(static_cast<long long>(rng.next_below(2000)) - 1000, 999),
            BigRat(static_cast<long long>(rng.next_below(2000)) - 1000, 997)};
    BigRat a(static_cast<long long>(rng.next_below(200)) - 100, 50000);
    ShiftInterval I{a, a + BigRat(4) * w};
    ShiftInterval got = safe_shift_interval(s, I, m, x, q, p, w);
    CHECK(got.lo >= I.lo);
    CHECK(got.hi <= I.hi);
    CHECK(got.hi - got.lo == w);
    // Dense sampling of shifts plus the exact line criterion.
    for (int t = 0; t <= 16; ++t) {
      BigRat lam = got.lo + (got.hi - got.lo) * BigRat(t, 16);
      CHECK(line_misses_level(s, j, m, x, q, p, lam));
    }
    ++instances;
  }
}

TEST_CASE("find segment end to end") {
  Schedule s(Schedule::Rule::Geometric);
  Index i = Index::power("3/5"), j = Index::power("3/10");
  MembershipCertificate base = integer_base(s, i, 0, 0, 40);
  RationalDirection dir = RationalDirection::from_vector(1, 0);
  BigRat eps(1, 2);
  auto d0 = delta0(s, i, j, eps, dir.q);
  BigRat delta = (d0.delta0 * BigRat(9, 10)).reduced();

  SegmentCertificate cert = find_segment_extra(base, j, eps, dir, delta, 6);
  CHECK(cert.depth == cert.k + 6);
  CHECK(cert.k >= cert.k0);

  // The certificate passes the independent oracle at its depth.
  CHECK(verify_segment_avoidance(cert).ok);
  CHECK(check_segment_certificate(cert));

  // Base-distance bound, exactly.
  Vec2R gap = cert.start - base.point;
  CHECK(gap.norm_sq() <= eps * eps * delta * delta);
  // The shift obeys the first-chain bound 0 <= lambda <= 4 j_{k+1} d_{k+1}.
  CHECK(cert.shift.sign() >= 0);
  CHECK(cert.shift <= BigRat(4) * cert.chain.front().width);

  // Length control: T^2 (p^2+q^2) within the documented stretch.
  BigRat t2s = cert.param_len * cert.param_len * BigRat(dir.norm_sq());
  CHECK(t2s >= delta * delta);
  CHECK(t2s <= delta * delta * rat_pow(BigRat((BigInt(1) << 20) + 1, BigInt(1) << 20), 2));

  // Too-long requests fail.
  CHECK_THROWS_AS(find_segment_extra(base, j, eps, dir, d0.delta0, 6), Error);
  // Depth below k+1 fails.
  CHECK_THROWS_AS(find_segment(base, j, eps, dir, delta, cert.k), Error);
}

TEST_CASE("refine extends the chain and preserves the bounds") {
  Schedule s(Schedule::Rule::Geometric);
  Index i = Index::power("1/2"), j = Index::power("1/5");
  MembershipCertificate base = integer_base(s, i, 1, -2, 40);
  RationalDirection dir = RationalDirection::from_vector(2, 1);
  BigRat eps(1, 3);
  BigRat delta = (delta0(s, i, j, eps, dir.q).delta0 * BigRat(4, 5)).reduced();
  SegmentCertificate cert = find_segment_extra(base, j, eps, dir, delta, 3);

  SegmentCertificate deeper = refine(cert, cert.depth + 1);
  // New interval width matches the next level and the shift stays nested.
  CHECK(deeper.chain.size() == cert.chain.size() + 1);
  CHECK(deeper.chain.back().width < cert.chain.back().width);
  CHECK(deeper.shift >= cert.chain.back().lo);
  CHECK(deeper.shift <= cert.chain.back().hi);
  Vec2R gap = deeper.start - base.point;
  CHECK(gap.norm_sq() <= eps * eps * delta * delta);

  // Determinism: one hop twice equals two hops at once.
  SegmentCertificate two_then_one = refine(refine(cert, cert.depth + 2), cert.depth + 3);
  SegmentCertificate direct = refine(cert, cert.depth + 3);
  CHECK(two_then_one.shift == direct.shift);
  CHECK(two_then_one.chain.back().lo == direct.chain.back().lo);

  CHECK(verify_segment_avoidance(direct).ok);
  CHECK_THROWS_AS(refine(cert, cert.depth), Error);
}

TEST_CASE("avoidance oracle spot checks") {
  Schedule s;
  Index j = Index::power("1/2");
  // A degenerate segment at an integer point is clear at any depth.
  AvoidanceReport r0 =
      verify_segment_avoidance(s, {BigRat(3), BigRat(4)}, {BigRat(3), BigRat(4)}, j, 25);
  CHECK(r0.ok);
  // A segment through the first removed centre fails at level 1.
  AvoidanceReport r1 = verify_segment_avoidance(s, {BigRat(1, 4), BigRat(1, 4)},
                                                {BigRat(3, 4), BigRat(3, 4)}, j, 5);
  CHECK_FALSE(r1.ok);
  CHECK(r1.first_violation->level == 1);
}

TEST_CASE("direction nets cover the circle") {
  auto axes = rational_direction_net(BigRat(2));
  REQUIRE(axes.size() >= 4);
  bool has[4] = {false, false, false, false};
  for (const auto& d : axes) {
    if (d.v1 == 1 && d.v2 == 0) has[0] = true;
    if (d.v1 == -1 && d.v2 == 0) has[1] = true;
    if (d.v1 == 0 && d.v2 == 1) has[2] = true;
    if (d.v1 == 0 && d.v2 == -1) has[3] = true;
  }
  CHECK(has[0]);
  CHECK(has[1]);
  CHECK(has[2]);
  CHECK(has[3]);

  auto net = rational_direction_net(BigRat(1, 2));
  for (const auto& d : net) {
    BigInt g = boost::multiprecision::gcd(d.v1 < 0 ? BigInt(-d.v1) : d.v1,
                                          d.v2 < 0 ? BigInt(-d.v2) : d.v2);
    CHECK(g == 1);
    CHECK(d.q >= (d.p < 0 ? -d.p : d.p));
    CHECK(d.q >= 1);
  }
  // Sampled covering radius below 1/2.
  for (int k = 0; k < 10000; ++k) {
    double angle = 2.0 * 3.14159265358979323846 * k / 10000.0;
    double ex = std::cos(angle), ey = std::sin(angle);
    double best = 10;
    for (const auto& d : net) {
      double n = std::sqrt(d.v1.convert_to<double>() * d.v1.convert_to<double>() +
                           d.v2.convert_to<double>() * d.v2.convert_to<double>());
      double ux = d.v1.convert_to<double>() / n, uy = d.v2.convert_to<double>() / n;
      double dist = std::sqrt((ux - ex) * (ux - ex) + (uy - ey) * (uy - ey));
      best = std::min(best, dist);
    }
    CHECK(best < 0.5);
  }
}

TEST_CASE("any-direction segments certify the direction gap") {
  Schedule s(Schedule::Rule::Geometric);
  Index i = Index::power("3/5"), j = Index::power("3/10");
  MembershipCertificate base = integer_base(s, i, 0, 0, 40);

  // A direction already in the net is achieved exactly.
  UnitVecEnclosure diag = UnitVecEnclosure::from_rational({BigRat(1), BigRat(1)}, 96);
  BigRat eps(3, 10);
  BigRat delta = (delta1(s, i, j, eps) * BigRat(1, 2)).reduced();
  AnyDirectionResult r = find_segment_any_direction(base, j, eps, diag, delta);
  CHECK(r.achieved.v1 == 1);
  CHECK(r.achieved.v2 == 1);
  CHECK(r.direction_gap_sq_hi <= eps * eps);
  CHECK(verify_segment_avoidance(r.segment).ok);

  // An irrational direction ~ (cos 1, sin 1) picks a net member within eps.
  UnitVecEnclosure e =
      UnitVecEnclosure::from_rational({BigRat(540302, 1000000), BigRat(841471, 1000000)}, 96);
  AnyDirectionResult r2 = find_segment_any_direction(base, j, eps, e, delta);
  CHECK(r2.direction_gap_sq_hi <= eps * eps);
  Vec2R gap = r2.segment.start - base.point;
  CHECK(gap.norm_sq() <= eps * eps * delta * delta);
}

TEST_CASE("near-point segments meet the triangle budget") {
  Schedule s(Schedule::Rule::Geometric);
  Index i = Index::power("7/10"), j = Index::power("1/5");
  MembershipCertificate base = integer_base(s, i, 0, 0, 60);
  BigRat eps(1, 2);
  BigRat d2 = delta2(s, i, j, eps);
  BigRat delta = (d2 * BigRat(3, 4)).reduced();

  CounterRng rng(2718);
  for (int t = 0; t < 4; ++t) {
    // Random target u strictly inside B(base, delta).
    BigRat fx(static_cast<long long>(rng.next_below(1601)) - 800, 1000);
    BigRat fy(static_cast<long long>(rng.next_below(1601)) - 800, 1000);
    Vec2R u{base.point.x + delta * fx * BigRat(1, 2), base.point.y + delta * fy * BigRat(1, 2)};
    UnitVecEnclosure e = UnitVecEnclosure::from_rational({BigRat(3), BigRat(-1)}, 96);
    NearPointResult res = find_segment_near_point(base, u, j, eps, e, delta);

    // Final containment and the exact accuracy bound.
    CHECK(verify_segment_avoidance(res.segment).ok);
    Vec2R gap = res.u_prime - u;
    CHECK(gap.norm_sq() <= eps * eps * delta * delta);
    CHECK(res.direction_gap_sq_hi <= eps * eps / BigRat(9));

    // Oracle re-check of the three summands: stage-1 base move, rotation of
    // the connecting direction, stage-2 move.
    BigRat third = eps * delta / BigRat(3);
    Vec2R s1gap = res.stage1.start - base.point;
    CHECK(s1gap.norm_sq() <= third * third);
    Vec2R s2gap = res.u_prime - res.waypoint;
    CHECK(s2gap.norm_sq() <= third * third);
    // Stage-1 stays in the middle index's set.
    CHECK(verify_segment_avoidance(res.stage1).ok);
    CHECK(member_depth(s, res.waypoint, res.mid, res.stage1.depth).is_member());
  }

  // u = base reduces to the any-direction construction.
  UnitVecEnclosure e = UnitVecEnclosure::from_rational({BigRat(0), BigRat(1)}, 96);
  NearPointResult same = find_segment_near_point(base, base.point, j, eps, e, delta);
  CHECK(same.u_prime == same.segment.start);
  CHECK(verify_segment_avoidance(same.segment).ok);

  // Lengths at or past delta2 are rejected.
  CHECK_THROWS_AS(find_segment_near_point(base, base.point, j, eps, e, d2), Error);
}
