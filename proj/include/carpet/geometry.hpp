#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "carpet/index.hpp"
#include "carpet/interval.hpp"
#include "carpet/rational.hpp"
#include "carpet/schedule.hpp"

namespace carpet {

struct Vec2R {
  BigRat x, y;

  Vec2R() = default;
  Vec2R(BigRat px, BigRat py) : x(std::move(px)), y(std::move(py)) {}

  friend Vec2R operator+(const Vec2R& a, const Vec2R& b) { return {a.x + b.x, a.y + b.y}; }
  friend Vec2R operator-(const Vec2R& a, const Vec2R& b) { return {a.x - b.x, a.y - b.y}; }
  friend Vec2R operator*(const BigRat& s, const Vec2R& v) { return {s * v.x, s * v.y}; }
  friend bool operator==(const Vec2R& a, const Vec2R& b) { return a.x == b.x && a.y == b.y; }

  BigRat norm_sq() const { return x * x + y * y; }
  Vec2R reduced() const { return {x.reduced(), y.reduced()}; }
};

inline BigRat dot(const Vec2R& a, const Vec2R& b) { return a.x * b.x + a.y * b.y; }
inline BigRat cross(const Vec2R& a, const Vec2R& b) { return a.x * b.y - a.y * b.x; }
inline Vec2R perp(const Vec2R& a) { return {-a.y, a.x}; }

// One removed open square: level r, centre on the level-r lattice, halfwidth
// i_r d_r / 2 enclosed (a point interval when i_r is rational).
struct ObstacleSquare {
  std::int64_t level = 0;
  Vec2R center;
  RatInterval halfwidth;
};

struct LatticeNearest {
  Vec2R center;
  BigRat linf_distance;
};

// Nearest level-r lattice centre under the sup norm, per-coordinate rounding
// with exact midpoint ties resolved toward the larger coordinate.
LatticeNearest lattice_nearest(const Schedule& sched, const Vec2R& x, std::int64_t r);

struct LevelSlack {
  std::int64_t level = 0;
  RatInterval slack;  // linf distance to lattice minus halfwidth, >= 0 when member
};

struct MembershipCertificate {
  Vec2R point;
  Index index;
  Schedule schedule;
  std::int64_t depth = 0;
  std::vector<LevelSlack> slacks;
};

struct MembershipResult {
  std::optional<MembershipCertificate> certificate;
  std::optional<ObstacleSquare> violation;  // lowest violated level

  bool is_member() const { return certificate.has_value(); }
};

// Depth-M membership test. Removed squares are open, so boundary points are
// members; every comparison resolves exactly (strictly positive rational
// distance versus an algebraic halfwidth).
MembershipResult member_depth(const Schedule& sched, const Vec2R& x, const Index& index,
                              std::int64_t depth);

// Replays member_depth and validates the recorded slack enclosures.
bool check_membership_certificate(const MembershipCertificate& cert);

struct Window {
  BigRat x1, y1, x2, y2;  // x1 <= x2, y1 <= y2

  bool valid() const { return x1 <= x2 && y1 <= y2; }
};

// All level <= depth squares whose closure meets the window, sorted by
// (level, centre lexicographic). Throws WINDOW-TOO-DEEP past the cap.
std::vector<ObstacleSquare> squares_in_window(const Schedule& sched, const Window& window,
                                              const Index& index, std::int64_t depth,
                                              std::size_t cap = 100000);

// Product over m <= depth of (1 - 1/N_m^2): exact upper bound for the area
// of the depth-M set within the unit square, for every admissible index.
BigRat measure_bound(const Schedule& sched, std::int64_t depth);

struct MonteCarloArea {
  double estimate = 0.0;
  double sigma3 = 0.0;  // three binomial standard deviations
  std::uint64_t hits = 0;
  std::uint64_t samples = 0;
};

// Fraction of counter-seeded uniform samples of the unit square passing the
// depth-M membership test; bit-reproducible for a fixed (seed, n).
MonteCarloArea monte_carlo_area(const Schedule& sched, const Index& index, std::int64_t depth,
                                std::uint64_t samples, std::uint64_t seed);

}  // namespace carpet
