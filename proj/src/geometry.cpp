#include "carpet/geometry.hpp"

#include <cmath>

#include "carpet/errors.hpp"
#include "carpet/prng.hpp"

namespace carpet {

namespace {

// Nearest element n + 1/2 of the half-integer grid to u, tie at u == n going
// to the larger candidate. Returns n.
BigInt nearest_half_integer_base(const BigRat& u) { return u.floor(); }

RatInterval halfwidth_enclosure(const Schedule& sched, const Index& index, std::int64_t r,
                                unsigned bits) {
  return index.value_enclosure(sched, r, bits) * (sched.precision(r) / BigRat(2));
}

}  // namespace

LatticeNearest lattice_nearest(const Schedule& sched, const Vec2R& x, std::int64_t r) {
  if (r < 1) fail(Errc::PreconditionViolated, "lattice level must be >= 1");
  const BigRat d_prev = sched.precision(r - 1);
  const BigInt& p_prev = sched.lattice_denominator(r - 1);
  const BigRat ux = x.x * BigRat(p_prev);
  const BigRat uy = x.y * BigRat(p_prev);
  const BigInt nx = nearest_half_integer_base(ux);
  const BigInt ny = nearest_half_integer_base(uy);
  Vec2R center{d_prev * BigRat(2 * nx + 1, 2), d_prev * BigRat(2 * ny + 1, 2)};
  BigRat dx = (x.x - center.x).abs();
  BigRat dy = (x.y - center.y).abs();
  return {center.reduced(), rat_max(dx, dy).reduced()};
}

MembershipResult member_depth(const Schedule& sched, const Vec2R& x, const Index& index,
                              std::int64_t depth) {
  if (depth < 1) fail(Errc::PreconditionViolated, "depth must be >= 1");
  index.validate(sched);
  MembershipResult out;
  MembershipCertificate cert{x, index, sched, depth, {}};
  cert.slacks.reserve(static_cast<std::size_t>(depth));
  for (std::int64_t r = 1; r <= depth; ++r) {
    LatticeNearest near = lattice_nearest(sched, x, r);
    // Member at level r iff dist >= i_r d_r / 2, i.e. 2 dist P_r >= i_r.
    const BigRat scaled = BigRat(2) * near.linf_distance * BigRat(sched.lattice_denominator(r));
    const int cmp = index.value_cmp(sched, r, scaled);
    if (cmp > 0) {
      out.violation = ObstacleSquare{r, near.center, halfwidth_enclosure(sched, index, r, 128)};
      return out;
    }
    RatInterval half = halfwidth_enclosure(sched, index, r, 128);
    RatInterval slack = RatInterval(near.linf_distance) - half;
    if (slack.lo.sign() < 0) slack.lo = BigRat(0);  // verdict is exact; clamp enclosure
    cert.slacks.push_back({r, slack.reduced()});
  }
  out.certificate = std::move(cert);
  return out;
}

bool check_membership_certificate(const MembershipCertificate& cert) {
  MembershipResult replay = member_depth(cert.schedule, cert.point, cert.index, cert.depth);
  if (!replay.is_member()) return false;
  if (cert.slacks.size() != replay.certificate->slacks.size()) return false;
  for (std::size_t k = 0; k < cert.slacks.size(); ++k) {
    const auto& a = cert.slacks[k];
    const auto& b = replay.certificate->slacks[k];
    if (a.level != b.level) return false;
    if (a.slack.lo.sign() < 0) return false;
    // Enclosures from the same data must overlap.
    if (a.slack.hi < b.slack.lo || b.slack.hi < a.slack.lo) return false;
  }
  return true;
}

std::vector<ObstacleSquare> squares_in_window(const Schedule& sched, const Window& window,
                                              const Index& index, std::int64_t depth,
                                              std::size_t cap) {
  if (!window.valid()) fail(Errc::PreconditionViolated, "empty window");
  if (depth < 0) fail(Errc::PreconditionViolated, "negative depth");
  index.validate(sched);

  // Cap check on the expected total before enumerating anything.
  BigInt expected = 0;
  for (std::int64_t r = 1; r <= depth; ++r) {
    const BigInt& p_prev = sched.lattice_denominator(r - 1);
    BigInt nx = ((window.x2 - window.x1) * BigRat(p_prev)).floor() + 3;
    BigInt ny = ((window.y2 - window.y1) * BigRat(p_prev)).floor() + 3;
    expected += nx * ny;
    if (expected > cap)
      fail(Errc::WindowTooDeep, "expected square count exceeds cap of " + std::to_string(cap));
  }

  std::vector<ObstacleSquare> out;
  for (std::int64_t r = 1; r <= depth; ++r) {
    const BigRat d_prev = sched.precision(r - 1);
    const BigInt& p_r = sched.lattice_denominator(r);
    RatInterval half = halfwidth_enclosure(sched, index, r, 128);

    // Closure meets the window iff h >= gap for the four per-axis gaps;
    // decided exactly as i_r >= 2 gap P_r.
    auto meets = [&](const Vec2R& c) {
      const BigRat gaps[4] = {window.x1 - c.x, c.x - window.x2, window.y1 - c.y,
                              c.y - window.y2};
      for (const BigRat& g : gaps) {
        if (g.sign() <= 0) continue;
        if (index.value_cmp(sched, r, BigRat(2) * g * BigRat(p_r)) < 0) return false;
      }
      return true;
    };

    BigInt a_lo = ((window.x1 - half.hi) / d_prev - BigRat(1, 2)).floor() - 1;
    BigInt a_hi = ((window.x2 + half.hi) / d_prev - BigRat(1, 2)).ceil() + 1;
    BigInt b_lo = ((window.y1 - half.hi) / d_prev - BigRat(1, 2)).floor() - 1;
    BigInt b_hi = ((window.y2 + half.hi) / d_prev - BigRat(1, 2)).ceil() + 1;
    for (BigInt a = a_lo; a <= a_hi; ++a) {
      for (BigInt b = b_lo; b <= b_hi; ++b) {
        Vec2R c{d_prev * BigRat(2 * a + 1, 2), d_prev * BigRat(2 * b + 1, 2)};
        c = c.reduced();
        if (!meets(c)) continue;
        out.push_back(ObstacleSquare{r, c, half.reduced()});
        if (out.size() > cap)
          fail(Errc::WindowTooDeep, "square count exceeds cap of " + std::to_string(cap));
      }
    }
  }
  return out;
}

BigRat measure_bound(const Schedule& sched, std::int64_t depth) {
  if (depth < 1) fail(Errc::PreconditionViolated, "depth must be >= 1");
  BigRat prod(1);
  for (std::int64_t m = 1; m <= depth; ++m) {
    BigInt n = sched.level_value(m);
    prod *= BigRat(n * n - 1, n * n);
  }
  return prod.reduced();
}

MonteCarloArea monte_carlo_area(const Schedule& sched, const Index& index, std::int64_t depth,
                                std::uint64_t samples, std::uint64_t seed) {
  if (samples < 1) fail(Errc::PreconditionViolated, "need at least one sample");
  if (depth < 1) fail(Errc::PreconditionViolated, "depth must be >= 1");
  index.validate(sched);

  const BigInt two53 = BigInt(1) << 53;
  struct LevelData {
    BigInt p_prev;
    BigInt n_r;
    RatInterval value_enc;  // enclosure of i_r
  };
  std::vector<LevelData> levels;
  for (std::int64_t r = 1; r <= depth; ++r)
    levels.push_back({sched.lattice_denominator(r - 1), sched.level_value(r),
                      index.value_enclosure(sched, r, 128)});

  std::uint64_t hits = 0;
  for (std::uint64_t k = 0; k < samples; ++k) {
    BigInt px(counter_rng(seed, 2 * k) >> 11);
    BigInt py(counter_rng(seed, 2 * k + 1) >> 11);
    bool member = true;
    for (std::int64_t r = 1; r <= depth && member; ++r) {
      const LevelData& L = levels[static_cast<std::size_t>(r - 1)];
      // Work scaled by P_{r-1}: u = x * P_{r-1} with denominator 2^53.
      BigRat ux(px * L.p_prev, two53), uy(py * L.p_prev, two53);
      BigRat fx = (ux - BigRat(2 * ux.floor() + 1, 2)).abs();
      BigRat fy = (uy - BigRat(2 * uy.floor() + 1, 2)).abs();
      // Member at level r iff 2 max(fx,fy) N_r >= i_r.
      BigRat t = BigRat(2) * rat_max(fx, fy) * BigRat(L.n_r);
      int c = RatInterval(L.value_enc).cmp(t);
      if (c < 0) continue;            // i_r surely below t: member
      if (c > 0) { member = false; continue; }  // surely above: violation
      member = index.value_cmp(sched, r, t) <= 0;
    }
    if (member) ++hits;
  }

  MonteCarloArea out;
  out.hits = hits;
  out.samples = samples;
  out.estimate = static_cast<double>(hits) / static_cast<double>(samples);
  out.sigma3 =
      3.0 * std::sqrt(out.estimate * (1.0 - out.estimate) / static_cast<double>(samples));
  return out;
}

}  // namespace carpet
