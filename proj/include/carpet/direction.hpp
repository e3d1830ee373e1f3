#pragma once

#include <utility>
#include <vector>

#include "carpet/geometry.hpp"
#include "carpet/interval.hpp"
#include "carpet/rational.hpp"

namespace carpet {

// A direction of rational slope, held as a reduced integer vector together
// with the symmetry taking it into the normalized frame where the vector is
// (q, p) with q >= |p| >= 0, q >= 1 (slope in [-1, 1], positive run).
//
// The frame map composes an optional coordinate swap with an optional
// negation; both preserve the obstacle lattices, and the composite is an
// involution, so one function serves both directions of the change of frame.
struct RationalDirection {
  BigInt v1, v2;  // reduced original vector, gcd 1, not both zero
  BigInt q, p;    // normalized: q >= |p|, q >= 1
  bool swapped = false;
  bool negated = false;

  static RationalDirection from_vector(BigInt a, BigInt b);

  BigInt norm_sq() const { return q * q + p * p; }

  Vec2R to_frame(const Vec2R& z) const { return apply(z); }
  Vec2R from_frame(const Vec2R& z) const { return apply(z); }

  // Enclosure of the original-frame unit vector v/|v|.
  std::pair<RatInterval, RatInterval> unit_enclosure(unsigned bits = 64) const;

  bool same_ray(const RationalDirection& o) const { return v1 == o.v1 && v2 == o.v2; }

 private:
  Vec2R apply(const Vec2R& z) const {
    Vec2R w = swapped ? Vec2R{z.y, z.x} : z;
    return negated ? Vec2R{-w.x, -w.y} : w;
  }
};

// Unit vector known only through a rational interval enclosure per
// component. Inputs may be exact (point intervals) or approximate.
struct UnitVecEnclosure {
  RatInterval x, y;

  // Normalizes a rational vector; the result encloses v/|v|.
  static UnitVecEnclosure from_rational(const Vec2R& v, unsigned bits = 64);
  static UnitVecEnclosure exact(const Vec2R& unit);  // requires |unit| == 1 exactly

  // Enclosure of the squared distance to another enclosed unit vector.
  RatInterval dist_sq(const UnitVecEnclosure& o) const {
    RatInterval dx = x - o.x, dy = y - o.y;
    return dx * dx + dy * dy;
  }
};

// Enclosure of 1/sqrt(s) for integer s >= 1; point interval when s is a
// perfect square.
RatInterval inv_sqrt_enclosure(const BigInt& s, unsigned bits);

// Deterministic finite net of rational-slope unit directions covering the
// circle within eps (0 < eps <= 2): slopes from the Farey sequence of order
// ceil(4/eps) folded through the eight symmetries, enumeration order fixed.
std::vector<RationalDirection> rational_direction_net(const BigRat& eps);

}  // namespace carpet
