#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "carpet/direction.hpp"
#include "carpet/geometry.hpp"
#include "carpet/index.hpp"
#include "carpet/interval.hpp"
#include "carpet/schedule.hpp"

namespace carpet {

// One step of the nested shift-interval chain: a closed interval of safe
// vertical shifts for one level, of width `width` (a certified rational
// upper bound on j_m d_m, relative slack <= 2^-64).
struct NestedInterval {
  std::int64_t level = 0;
  BigRat lo, hi;
  BigRat width;
};

// A constructed segment {start + t * (v1, v2) : t in [0, param_len]} whose
// closure avoids every removed square of the target index up to `depth`.
// Levels <= k are covered by the slack of the base point's membership;
// levels k+1..depth by the recorded interval chain. Refinable in depth.
struct SegmentCertificate {
  Schedule schedule;
  Index index_from, index_to;  // index_from strictly before index_to
  Vec2R base;                  // the membership point the segment was grown from
  BigRat eps, delta;
  RationalDirection dir;
  BigRat param_len;  // T; T^2 (p^2+q^2) within [delta^2, delta^2 (1+2^-20)^2]
  std::int64_t k0 = 0, k = 0, depth = 0;
  BigRat shift;  // lambda, vertical shift in the normalized frame
  Vec2R start;   // base + shift mapped back to the original frame
  std::vector<NestedInterval> chain;  // levels k+1..depth, nested

  Vec2R end() const {
    return {start.x + param_len * BigRat(dir.v1), start.y + param_len * BigRat(dir.v2)};
  }
};

// Enclosure of 1 - sup_m j_m/i_m for a strictly ordered pair; positive.
RatInterval psi_enclosure(const Schedule& sched, const Index& i, const Index& j,
                          unsigned bits = 128);

struct Delta0Result {
  BigRat delta0;     // certified positive lower bound of rho_{k0}
  std::int64_t k0;   // first level where both tail ratio conditions hold
};

// Largest admissible segment length scale for the pair (i, j), accuracy eps
// in (0, 1], and normalized slope denominator q >= 1.
Delta0Result delta0(const Schedule& sched, const Index& i, const Index& j, const BigRat& eps,
                    const BigInt& slope_den);

struct SegmentLevels {
  std::int64_t k0 = 0;
  std::int64_t k = 0;  // rho_k >= delta certified, k >= k0
  BigRat delta0;
};

SegmentLevels segment_levels(const Schedule& sched, const Index& i, const Index& j,
                             const BigRat& eps, const BigInt& slope_den, const BigRat& delta);

struct ShiftInterval {
  BigRat lo, hi;
};

// Closed subinterval of I of length `width` whose every shift keeps the full
// line x + (0, lambda) + R(q, p) away from the open level-m squares of the
// target index. Requires |I| >= 4*width and d_{m-1} >= 5 q * width.
ShiftInterval safe_shift_interval(const Schedule& sched, const ShiftInterval& interval,
                                  std::int64_t m, const Vec2R& frame_point, const BigInt& q,
                                  const BigInt& p, const BigRat& width);

// Builds a segment of length delta (up to the documented 2^-20 stretch on
// the long side) from the certified base point, avoiding the target set's
// squares through `depth` levels. `depth` is absolute and must be >= k+1.
SegmentCertificate find_segment(const MembershipCertificate& base, const Index& index_to,
                                const BigRat& eps, const RationalDirection& dir,
                                const BigRat& delta, std::int64_t depth);

// Same, with depth k + extra chosen after k is known.
SegmentCertificate find_segment_extra(const MembershipCertificate& base, const Index& index_to,
                                      const BigRat& eps, const RationalDirection& dir,
                                      const BigRat& delta, std::int64_t extra = 6);

// Extends the interval chain; the new shift stays inside every recorded
// interval, so the base-distance bound is preserved.
SegmentCertificate refine(const SegmentCertificate& cert, std::int64_t new_depth);

struct AvoidanceReport {
  bool ok = false;
  std::optional<ObstacleSquare> first_violation;
};

// Independent oracle: exact sup-norm distance from the closed segment [a, b]
// to each nearby lattice centre, compared against the open square halfwidth.
// Shares no logic with the shift-interval construction.
AvoidanceReport verify_segment_avoidance(const Schedule& sched, const Vec2R& a, const Vec2R& b,
                                         const Index& index_to, std::int64_t depth);

AvoidanceReport verify_segment_avoidance(const SegmentCertificate& cert);

// Replays a certificate: chain consistency, shift containment, length and
// base-distance bounds, then the avoidance oracle.
bool check_segment_certificate(const SegmentCertificate& cert);

// min over the eps-net (distinct slope denominators suffice: delta0 depends
// on the direction only through q and is nonincreasing in it).
BigRat delta1(const Schedule& sched, const Index& i, const Index& j, const BigRat& eps);

struct AnyDirectionResult {
  SegmentCertificate segment;
  RationalDirection achieved;     // net direction within eps of the request
  BigRat direction_gap_sq_hi;     // certified upper bound on |e' - e|^2
};

AnyDirectionResult find_segment_any_direction(const MembershipCertificate& base,
                                              const Index& index_to, const BigRat& eps,
                                              const UnitVecEnclosure& e, const BigRat& delta,
                                              std::int64_t extra = 6);

BigRat delta2(const Schedule& sched, const Index& i, const Index& j, const BigRat& eps);

struct NearPointResult {
  SegmentCertificate segment;  // segment near u inside the target set
  RationalDirection achieved;
  BigRat direction_gap_sq_hi;
  Vec2R u;
  Vec2R u_prime;               // segment start
  SegmentCertificate stage1;   // segment through the base in the middle index
  Vec2R waypoint;              // stage-2 base point, on stage1
  Index mid;
};

// Two-stage construction through the midpoint index: a segment near the base
// toward u, then a segment from a waypoint near u in the requested direction.
NearPointResult find_segment_near_point(const MembershipCertificate& base, const Vec2R& u,
                                        const Index& index_to, const BigRat& eps,
                                        const UnitVecEnclosure& e, const BigRat& delta,
                                        std::int64_t extra = 6);

}  // namespace carpet
