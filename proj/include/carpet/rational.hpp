#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cmath>
#include <cstdint>
#include <string>
#include <utility>

#include "carpet/errors.hpp"

namespace carpet {

using BigInt = boost::multiprecision::cpp_int;

inline BigInt ipow(const BigInt& base, std::uint64_t e) {
  BigInt r = 1, b = base;
  while (e) {
    if (e & 1u) r *= b;
    b *= b;
    e >>= 1;
  }
  return r;
}

// floor of the n-th root of a >= 0 (integer Newton iteration).
inline BigInt nth_root_floor(const BigInt& a, std::uint64_t n) {
  if (a < 0) fail(Errc::PreconditionViolated, "nth_root_floor of negative value");
  if (n == 0) fail(Errc::PreconditionViolated, "zeroth root");
  if (n == 1 || a == 0 || a == 1) return a;
  const std::uint64_t bits = boost::multiprecision::msb(a) + 1;
  BigInt x = BigInt(1) << static_cast<unsigned>((bits + n - 1) / n + 1);
  while (true) {
    BigInt xpow = ipow(x, n - 1);
    BigInt next = ((n - 1) * x + a / xpow) / n;
    if (next >= x) break;
    x = next;
  }
  while (ipow(x, n) > a) --x;
  while (ipow(x + 1, n) <= a) ++x;
  return x;
}

// Exact fraction over cpp_int. Denominator kept positive; reduction is
// explicit (reduce()) rather than per-operation, so bulk geometry can run on
// cross-multiplications without paying a gcd for every intermediate value.
class BigRat {
 public:
  BigRat() : num_(0), den_(1) {}
  BigRat(long long v) : num_(v), den_(1) {}  // NOLINT: implicit by design
  BigRat(BigInt v) : num_(std::move(v)), den_(1) {}
  BigRat(BigInt n, BigInt d) : num_(std::move(n)), den_(std::move(d)) {
    if (den_ == 0) fail(Errc::PreconditionViolated, "zero denominator");
    if (den_ < 0) {
      num_ = -num_;
      den_ = -den_;
    }
  }

  static BigRat parse(const std::string& s) {
    auto slash = s.find('/');
    try {
      if (slash == std::string::npos) return BigRat(BigInt(s));
      BigInt n(s.substr(0, slash));
      BigInt d(s.substr(slash + 1));
      BigRat r(std::move(n), std::move(d));
      r.reduce();
      return r;
    } catch (const std::exception&) {
      fail(Errc::MalformedCertificate, "cannot parse rational '" + s + "'");
    }
  }

  const BigInt& num() const { return num_; }
  const BigInt& den() const { return den_; }

  void reduce() {
    BigInt g = boost::multiprecision::gcd(num_ < 0 ? BigInt(-num_) : num_, den_);
    if (g > 1) {
      num_ /= g;
      den_ /= g;
    }
  }

  BigRat reduced() const {
    BigRat r = *this;
    r.reduce();
    return r;
  }

  int sign() const { return num_ == 0 ? 0 : (num_ < 0 ? -1 : 1); }
  bool is_zero() const { return num_ == 0; }
  bool is_integer() const {
    if (den_ == 1) return true;
    return num_ % den_ == 0;
  }

  // -1, 0, +1 for *this <=> o.
  int cmp(const BigRat& o) const {
    // Fast path: identical denominators (common after shared scaling).
    if (den_ == o.den_) return num_ == o.num_ ? 0 : (num_ < o.num_ ? -1 : 1);
    BigInt lhs = num_ * o.den_;
    BigInt rhs = o.num_ * den_;
    return lhs == rhs ? 0 : (lhs < rhs ? -1 : 1);
  }

  BigInt floor() const {
    BigInt q = num_ / den_;
    if (num_ % den_ != 0 && num_ < 0) --q;
    return q;
  }
  BigInt ceil() const {
    BigInt q = num_ / den_;
    if (num_ % den_ != 0 && num_ > 0) ++q;
    return q;
  }

  BigRat abs() const { return num_ < 0 ? BigRat(-num_, den_) : *this; }

  double to_double() const {
    // Scale so the quotient keeps ~64 significant bits even for huge values.
    if (num_ == 0) return 0.0;
    long nb = static_cast<long>(boost::multiprecision::msb(num_ < 0 ? BigInt(-num_) : num_));
    long db = static_cast<long>(boost::multiprecision::msb(den_));
    long shift = nb - db;
    if (shift > -900 && shift < 900) return num_.convert_to<double>() / den_.convert_to<double>();
    BigInt n = num_, d = den_;
    if (shift >= 900) {
      d <<= static_cast<unsigned>(shift - 512);
      double q = n.convert_to<double>() / d.convert_to<double>();
      return q * std::pow(2.0, static_cast<double>(shift - 512));
    }
    n <<= static_cast<unsigned>(-shift + 512);
    double q = n.convert_to<double>() / d.convert_to<double>();
    return q * std::pow(2.0, static_cast<double>(shift - 512));
  }

  std::string str() const {
    BigRat r = reduced();
    std::string s = r.num_.str();
    if (r.den_ != 1) s += "/" + r.den_.str();
    return s;
  }

  friend BigRat operator+(const BigRat& a, const BigRat& b) {
    if (a.den_ == b.den_) return BigRat(a.num_ + b.num_, a.den_);
    return BigRat(a.num_ * b.den_ + b.num_ * a.den_, a.den_ * b.den_);
  }
  friend BigRat operator-(const BigRat& a, const BigRat& b) {
    if (a.den_ == b.den_) return BigRat(a.num_ - b.num_, a.den_);
    return BigRat(a.num_ * b.den_ - b.num_ * a.den_, a.den_ * b.den_);
  }
  friend BigRat operator*(const BigRat& a, const BigRat& b) {
    return BigRat(a.num_ * b.num_, a.den_ * b.den_);
  }
  friend BigRat operator/(const BigRat& a, const BigRat& b) {
    if (b.num_ == 0) fail(Errc::PreconditionViolated, "division by zero");
    return BigRat(a.num_ * b.den_, a.den_ * b.num_);
  }
  BigRat operator-() const { return BigRat(-num_, den_); }

  BigRat& operator+=(const BigRat& o) { return *this = *this + o; }
  BigRat& operator-=(const BigRat& o) { return *this = *this - o; }
  BigRat& operator*=(const BigRat& o) { return *this = *this * o; }
  BigRat& operator/=(const BigRat& o) { return *this = *this / o; }

  friend bool operator==(const BigRat& a, const BigRat& b) { return a.cmp(b) == 0; }
  friend bool operator!=(const BigRat& a, const BigRat& b) { return a.cmp(b) != 0; }
  friend bool operator<(const BigRat& a, const BigRat& b) { return a.cmp(b) < 0; }
  friend bool operator<=(const BigRat& a, const BigRat& b) { return a.cmp(b) <= 0; }
  friend bool operator>(const BigRat& a, const BigRat& b) { return a.cmp(b) > 0; }
  friend bool operator>=(const BigRat& a, const BigRat& b) { return a.cmp(b) >= 0; }

 private:
  BigInt num_;
  BigInt den_;  // > 0
};

inline BigRat rat_min(const BigRat& a, const BigRat& b) { return a <= b ? a : b; }
inline BigRat rat_max(const BigRat& a, const BigRat& b) { return a >= b ? a : b; }

inline BigRat rat_pow(const BigRat& a, std::uint64_t e) {
  return BigRat(ipow(a.num(), e), ipow(a.den(), e));
}

// 2^-bits as a rational.
inline BigRat pow2_inv(unsigned bits) { return BigRat(BigInt(1), BigInt(1) << bits); }

// a^q <=> b for a >= 0: exact comparison used when deciding rational-vs-root
// inequalities without building enclosures.
inline int cmp_pow(const BigRat& a, std::uint64_t q, const BigRat& b) {
  return rat_pow(a, q).cmp(b);
}

// Fixed-point decimal rendering with round-toward-zero, for deterministic
// text output (SVG coordinates). Exact integer arithmetic only.
inline std::string to_decimal_string(const BigRat& v, unsigned digits) {
  BigInt scale = ipow(BigInt(10), digits);
  BigInt scaled = (v.num() * scale) / v.den();  // truncates toward zero
  bool neg = scaled < 0;
  if (neg) scaled = -scaled;
  std::string s = scaled.str();
  if (s.size() <= digits) s.insert(0, digits + 1 - s.size(), '0');
  s.insert(s.size() - digits, ".");
  while (s.back() == '0') s.pop_back();
  if (s.back() == '.') s.pop_back();
  return (neg && s != "0") ? "-" + s : s;
}

}  // namespace carpet
