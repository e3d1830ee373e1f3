#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "carpet/rational.hpp"

namespace carpet {

// N_r for the default rule: 2*ceil(sqrt(r)) + 1. Odd, nondecreasing,
// unbounded, and sum 1/N_r^2 diverges (~ log R / 4).
std::int64_t schedule_default(std::int64_t r);

// Lattice refinement schedule: level r splits each cell into N_r x N_r.
// d_r = 1/(N_1...N_r) exactly, cached as the integer product P_r = 1/d_r.
//
// Rules:
//   "2ceilsqrt+1"  slow growth, divergent sum of 1/N^2 (the default),
//   "geometric"    N_r = smallest odd >= 3*2^(r-1); fast decay of d_r, for
//                  constructions that need deep ratio thresholds,
//   explicit       finite list (odd, >= 3, nondecreasing); queries past the
//                  list raise SCHEDULE-DEPTH-EXCEEDED.
class Schedule {
 public:
  enum class Rule { SqrtDefault, Geometric, Explicit };

  Schedule() : Schedule(Rule::SqrtDefault) {}
  explicit Schedule(Rule rule);
  explicit Schedule(std::vector<std::int64_t> values);

  Rule rule() const { return rule_; }
  const std::vector<std::int64_t>& explicit_values() const { return explicit_; }
  std::string rule_name() const;
  static Schedule from_rule_name(const std::string& name);

  BigInt level_value(std::int64_t r) const;  // N_r, r >= 1

  // P_r = N_1 * ... * N_r with P_0 = 1, so d_r = 1/P_r.
  const BigInt& lattice_denominator(std::int64_t r) const;
  BigRat precision(std::int64_t r) const;  // d_r

  bool operator==(const Schedule& o) const {
    return rule_ == o.rule_ && explicit_ == o.explicit_;
  }

 private:
  Rule rule_;
  std::vector<std::int64_t> explicit_;
  // Shared cache keeps Schedule cheap to copy by value.
  struct Cache {
    std::vector<BigInt> prod;  // prod[r] = P_r
  };
  std::shared_ptr<Cache> cache_;
};

}  // namespace carpet
