#include "carpet/index.hpp"

#include <algorithm>

#include "carpet/errors.hpp"

namespace carpet {

Index::Index(BigRat theta, std::vector<BigRat> override_prefix)
    : theta_(theta.reduced()), overrides_(std::move(override_prefix)) {
  if (theta_.sign() < 0 || theta_ >= BigRat(1))
    fail(Errc::PreconditionViolated, "power exponent must lie in [0,1)");
  for (auto& v : overrides_) {
    v.reduce();
    if (v < BigRat(1)) fail(Errc::PreconditionViolated, "override value below 1");
  }
}

void Index::validate(const Schedule& sched) const {
  for (std::size_t k = 0; k < overrides_.size(); ++k) {
    auto r = static_cast<std::int64_t>(k + 1);
    if (overrides_[k] >= BigRat(sched.level_value(r)))
      fail(Errc::PreconditionViolated, "override value not below N_r at level " + std::to_string(r));
  }
}

RatInterval Index::value_enclosure(const Schedule& sched, std::int64_t r, unsigned bits) const {
  if (r < 1) fail(Errc::PreconditionViolated, "index level must be >= 1");
  if (has_override(r)) return RatInterval(overrides_[static_cast<std::size_t>(r - 1)]);
  return pow_enclosure(sched.level_value(r), theta_, bits);
}

int Index::value_cmp(const Schedule& sched, std::int64_t r, const BigRat& t) const {
  if (r < 1) fail(Errc::PreconditionViolated, "index level must be >= 1");
  if (has_override(r)) return overrides_[static_cast<std::size_t>(r - 1)].cmp(t);
  return cmp_power_vs_rational(sched.level_value(r), theta_, t);
}

std::string Index::describe() const {
  std::string s = "power(" + theta_.str() + ")";
  if (!overrides_.empty()) {
    s += " overrides[";
    for (std::size_t k = 0; k < overrides_.size(); ++k) {
      if (k) s += ",";
      s += overrides_[k].str();
    }
    s += "]";
  }
  return s;
}

int index_value_cmp(const Index& i, const Index& j, const Schedule& sched, std::int64_t r) {
  const bool oi = i.has_override(r), oj = j.has_override(r);
  if (oi && oj) return i.overrides()[static_cast<std::size_t>(r - 1)].cmp(
      j.overrides()[static_cast<std::size_t>(r - 1)]);
  if (oi) return -j.value_cmp(sched, r, i.overrides()[static_cast<std::size_t>(r - 1)]);
  if (oj) return i.value_cmp(sched, r, j.overrides()[static_cast<std::size_t>(r - 1)]);
  // Both power values at the same base N_r >= 3: monotone in the exponent.
  return i.theta().cmp(j.theta());
}

bool index_equal(const Index& i, const Index& j, const Schedule& sched) {
  if (i.theta() != j.theta()) {
    // Tails differ at every non-override level, so values cannot agree
    // everywhere unless some level exists at all — they differ.
    return false;
  }
  auto depth = static_cast<std::int64_t>(std::max(i.overrides().size(), j.overrides().size()));
  for (std::int64_t r = 1; r <= depth; ++r)
    if (index_value_cmp(i, j, sched, r) != 0) return false;
  return true;
}

CertifiedBool precedes(const Index& i, const Index& j, const Schedule& sched) {
  CertifiedBool out;
  const auto prefix =
      static_cast<std::int64_t>(std::max(i.overrides().size(), j.overrides().size()));
  out.tag = prefix > 0 ? CertifiedBool::Tag::PrefixChecked : CertifiedBool::Tag::ClosedForm;

  // Tail behaviour: i_r/j_r = N_r^(theta_i - theta_j) tends to infinity iff
  // theta_i > theta_j; equal thetas give ratio 1 on the tail.
  if (i.theta() <= j.theta()) {
    out.value = false;
    return out;
  }
  for (std::int64_t r = 1; r <= prefix; ++r) {
    if (index_value_cmp(i, j, sched, r) <= 0) {
      out.value = false;
      return out;
    }
  }
  out.value = true;
  return out;
}

namespace {

// Midpoint value on an override level: the arithmetic mean keeps the value
// strictly between the two sides and rational.
BigRat level_mean(const Index& a, const Index& b, const Schedule& sched, std::int64_t r,
                  unsigned bits) {
  auto enc = [&](const Index& ix) {
    return ix.value_enclosure(sched, r, bits);
  };
  if (a.has_override(r) && b.has_override(r))
    return ((a.overrides()[static_cast<std::size_t>(r - 1)] +
             b.overrides()[static_cast<std::size_t>(r - 1)]) /
            BigRat(2))
        .reduced();
  // One side is a power value: take the midpoint of certified bounds and
  // verify strict betweenness exactly, narrowing if the first cut fails.
  for (unsigned b2 = bits; b2 <= 4096; b2 *= 2) {
    RatInterval ea = a.value_enclosure(sched, r, b2);
    RatInterval eb = b.value_enclosure(sched, r, b2);
    BigRat cand = ((ea.lo + ea.hi + eb.lo + eb.hi) / BigRat(4)).reduced();
    if (a.value_cmp(sched, r, cand) > 0 && b.value_cmp(sched, r, cand) < 0) return cand;
  }
  fail(Errc::EnclosureTooCoarse, "cannot separate override midpoint at level " + std::to_string(r));
}

}  // namespace

Index midpoint(const Index& i, const Index& j, const Schedule& sched) {
  if (!precedes(i, j, sched).value)
    fail(Errc::NotComparable, "midpoint requires the first index strictly before the second");
  BigRat theta = ((i.theta() + j.theta()) / BigRat(2)).reduced();
  auto prefix = std::max(i.overrides().size(), j.overrides().size());
  std::vector<BigRat> overrides;
  overrides.reserve(prefix);
  for (std::size_t k = 0; k < prefix; ++k)
    overrides.push_back(level_mean(i, j, sched, static_cast<std::int64_t>(k + 1), 128));
  return Index(theta, std::move(overrides));
}

Index predecessor(const Index& l, const Schedule& sched) {
  BigRat theta = ((l.theta() + BigRat(1)) / BigRat(2)).reduced();
  std::vector<BigRat> overrides;
  overrides.reserve(l.overrides().size());
  for (std::size_t k = 0; k < l.overrides().size(); ++k) {
    auto r = static_cast<std::int64_t>(k + 1);
    // Mean of l_r and N_r: strictly above l_r, strictly below N_r.
    overrides.push_back(((l.overrides()[k] + BigRat(sched.level_value(r))) / BigRat(2)).reduced());
  }
  return Index(theta, std::move(overrides));
}

Index chain_supremum(const std::vector<Index>& chain, const Schedule& sched) {
  if (chain.empty()) fail(Errc::PreconditionViolated, "empty chain");
  // Pairwise comparability check; the supremum of a finite chain is its
  // order-maximum (coordinatewise infimum equals the smallest-exponent
  // member within the power family).
  for (std::size_t a = 0; a < chain.size(); ++a)
    for (std::size_t b = a + 1; b < chain.size(); ++b) {
      if (index_equal(chain[a], chain[b], sched)) continue;
      if (!precedes(chain[a], chain[b], sched).value &&
          !precedes(chain[b], chain[a], sched).value)
        fail(Errc::NotAChain, "incomparable pair at positions " + std::to_string(a) + "," +
                                  std::to_string(b));
    }
  std::size_t best = 0;
  for (std::size_t k = 1; k < chain.size(); ++k)
    if (precedes(chain[best], chain[k], sched).value) best = k;
  return chain[best];
}

}  // namespace carpet
