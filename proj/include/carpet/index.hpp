#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "carpet/interval.hpp"
#include "carpet/rational.hpp"
#include "carpet/schedule.hpp"

namespace carpet {

// A member of the admissible-sequence poset, restricted to the closed-form
// power family i_r = N_r^theta (theta rational in [0,1), theta = 0 encoding
// the all-ones top element) plus an optional finite prefix of explicit
// rational values 1 <= i_r < N_r.
//
// Order (strict): i precedes j iff i_r > j_r at every level and i_r/j_r is
// unbounded. Within this family both clauses are exactly decidable.
class Index {
 public:
  Index() : theta_(0) {}
  explicit Index(BigRat theta, std::vector<BigRat> override_prefix = {});

  static Index power(const BigRat& theta) { return Index(theta); }
  static Index power(const std::string& theta) { return Index(BigRat::parse(theta)); }
  static Index top() { return Index(BigRat(0)); }

  const BigRat& theta() const { return theta_; }
  const std::vector<BigRat>& overrides() const { return overrides_; }
  bool has_override(std::int64_t r) const {
    return r >= 1 && r <= static_cast<std::int64_t>(overrides_.size());
  }

  // Checks override bounds 1 <= i_r < N_r against a concrete schedule.
  void validate(const Schedule& sched) const;

  // Enclosure of i_r with dyadic endpoints of denominator 2^bits.
  RatInterval value_enclosure(const Schedule& sched, std::int64_t r, unsigned bits = 64) const;

  // Exact sign of i_r - t for rational t.
  int value_cmp(const Schedule& sched, std::int64_t r, const BigRat& t) const;

  std::string describe() const;

 private:
  BigRat theta_;                  // reduced, in [0, 1)
  std::vector<BigRat> overrides_; // values for r = 1..overrides_.size(), reduced
};

// Exact sign of i_r - j_r at one level.
int index_value_cmp(const Index& i, const Index& j, const Schedule& sched, std::int64_t r);

// Value-wise equality over every level (thetas equal and each override equal
// to the other side's value at that level).
bool index_equal(const Index& i, const Index& j, const Schedule& sched);

struct CertifiedBool {
  bool value = false;
  enum class Tag { ClosedForm, PrefixChecked } tag = Tag::ClosedForm;
};

// Strict order. Never undecidable within this family; the error code exists
// for future non-closed-form extensions.
CertifiedBool precedes(const Index& i, const Index& j, const Schedule& sched);

inline bool precedes_eq(const Index& i, const Index& j, const Schedule& sched) {
  return index_equal(i, j, sched) || precedes(i, j, sched).value;
}

// Strict in-between witness for i before j (exponent average on the power
// tail, arithmetic mean on override levels). Throws NOT-COMPARABLE.
Index midpoint(const Index& i, const Index& j, const Schedule& sched);

// Some m strictly before l: exponent (theta+1)/2 on the tail, mean with N_r
// on override levels.
Index predecessor(const Index& l, const Schedule& sched);

// Least upper bound of a finite chain (pairwise comparable inputs); equals
// the order-maximum of the chain. Throws NOT-A-CHAIN.
Index chain_supremum(const std::vector<Index>& chain, const Schedule& sched);

}  // namespace carpet
