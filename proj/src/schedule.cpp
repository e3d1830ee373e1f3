#include "carpet/schedule.hpp"

#include <cmath>

#include "carpet/errors.hpp"

namespace carpet {

namespace {

std::int64_t ceil_sqrt(std::int64_t r) {
  auto s = static_cast<std::int64_t>(std::sqrt(static_cast<double>(r)));
  while (s * s >= r && s > 0) --s;  // s*s < r
  while (s * s < r) ++s;            // smallest s with s*s >= r
  return s;
}

}  // namespace

std::int64_t schedule_default(std::int64_t r) {
  if (r < 1) fail(Errc::PreconditionViolated, "schedule level must be >= 1");
  return 2 * ceil_sqrt(r) + 1;
}

Schedule::Schedule(Rule rule) : rule_(rule), cache_(std::make_shared<Cache>()) {
  if (rule == Rule::Explicit)
    fail(Errc::PreconditionViolated, "explicit schedule needs a value list");
  cache_->prod.push_back(BigInt(1));
}

Schedule::Schedule(std::vector<std::int64_t> values)
    : rule_(Rule::Explicit), explicit_(std::move(values)), cache_(std::make_shared<Cache>()) {
  if (explicit_.empty()) fail(Errc::PreconditionViolated, "empty schedule list");
  std::int64_t prev = 1;
  for (std::int64_t n : explicit_) {
    if (n < 3 || n % 2 == 0) fail(Errc::PreconditionViolated, "schedule values must be odd and >= 3");
    if (n < prev) fail(Errc::PreconditionViolated, "schedule values must be nondecreasing");
    prev = n;
  }
  cache_->prod.push_back(BigInt(1));
}

std::string Schedule::rule_name() const {
  switch (rule_) {
    case Rule::SqrtDefault: return "2ceilsqrt+1";
    case Rule::Geometric: return "geometric";
    case Rule::Explicit: return "explicit";
  }
  return "?";
}

Schedule Schedule::from_rule_name(const std::string& name) {
  if (name == "2ceilsqrt+1") return Schedule(Rule::SqrtDefault);
  if (name == "geometric") return Schedule(Rule::Geometric);
  fail(Errc::MalformedCertificate, "unknown schedule rule '" + name + "'");
}

BigInt Schedule::level_value(std::int64_t r) const {
  if (r < 1) fail(Errc::PreconditionViolated, "schedule level must be >= 1");
  switch (rule_) {
    case Rule::SqrtDefault:
      return BigInt(schedule_default(r));
    case Rule::Geometric: {
      BigInt v = BigInt(3) << static_cast<unsigned>(r - 1);  // 3*2^(r-1), odd iff r == 1
      if (v % 2 == 0) ++v;
      return v;
    }
    case Rule::Explicit:
      if (r > static_cast<std::int64_t>(explicit_.size()))
        fail(Errc::ScheduleDepthExceeded,
             "level " + std::to_string(r) + " beyond explicit schedule of length " +
                 std::to_string(explicit_.size()));
      return BigInt(explicit_[static_cast<std::size_t>(r - 1)]);
  }
  fail(Errc::InternalError, "bad rule");
}

const BigInt& Schedule::lattice_denominator(std::int64_t r) const {
  if (r < 0) fail(Errc::PreconditionViolated, "negative level");
  auto& prod = cache_->prod;
  while (static_cast<std::int64_t>(prod.size()) <= r) {
    auto next = static_cast<std::int64_t>(prod.size());
    prod.push_back(prod.back() * level_value(next));
  }
  return prod[static_cast<std::size_t>(r)];
}

BigRat Schedule::precision(std::int64_t r) const {
  return BigRat(BigInt(1), lattice_denominator(r));
}

}  // namespace carpet
