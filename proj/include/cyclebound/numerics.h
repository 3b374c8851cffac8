// Copyright 2026 The cyclebound Authors
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef CYCLEBOUND_NUMERICS_H_
#define CYCLEBOUND_NUMERICS_H_

#include <gmpxx.h>

#include <compare>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace cyclebound {

using BigInt = mpz_class;

inline constexpr int kDefaultPrecisionBits = 384;
inline constexpr int kDefaultMaxPrecisionBits = 8192;
// Extra mantissa bits carried by every interval operation on top of the
// nominal precision, so that a chain of a few dozen operations still meets
// the nominal width.
inline constexpr int kGuardBits = 32;

// Raised whenever an interval computation cannot decide a quantity at the
// current precision. Callers retry at a higher precision.
class InsufficientPrecision : public std::runtime_error {
 public:
  explicit InsufficientPrecision(const std::string& what)
      : std::runtime_error("insufficient precision: " + what) {}
};

// Exact fraction in canonical form: denominator > 0, gcd(|num|, den) = 1.
class Rational {
 public:
  Rational() = default;
  Rational(long value) : value_(value) {}  // NOLINT(runtime/explicit)
  Rational(int value) : value_(value) {}   // NOLINT(runtime/explicit)
  Rational(const BigInt& value) : value_(value) {}  // NOLINT
  Rational(const BigInt& numerator, const BigInt& denominator);
  explicit Rational(const mpq_class& value);

  // Accepts "p", "p/q", "-p/q" and plain decimals such as "1.4784".
  static Rational Parse(std::string_view text);

  BigInt num() const { return value_.get_num(); }
  BigInt den() const { return value_.get_den(); }
  const mpq_class& raw() const { return value_; }

  int sign() const { return sgn(value_); }
  bool is_zero() const { return sign() == 0; }
  bool is_integer() const { return value_.get_den() == 1; }

  BigInt Floor() const;
  BigInt Ceil() const;
  Rational Abs() const { return Rational(abs(value_)); }
  Rational Reciprocal() const;

  Rational& operator+=(const Rational& o);
  Rational& operator-=(const Rational& o);
  Rational& operator*=(const Rational& o);
  Rational& operator/=(const Rational& o);

  friend Rational operator+(Rational a, const Rational& b) { return a += b; }
  friend Rational operator-(Rational a, const Rational& b) { return a -= b; }
  friend Rational operator*(Rational a, const Rational& b) { return a *= b; }
  friend Rational operator/(Rational a, const Rational& b) { return a /= b; }
  friend Rational operator-(const Rational& a) { return Rational(-a.value_); }

  friend bool operator==(const Rational& a, const Rational& b) {
    return a.value_ == b.value_;
  }
  friend std::strong_ordering operator<=>(const Rational& a,
                                          const Rational& b) {
    const int c = cmp(a.value_, b.value_);
    return c < 0 ? std::strong_ordering::less
                 : (c > 0 ? std::strong_ordering::greater
                          : std::strong_ordering::equal);
  }

  // "p" for integers, "p/q" otherwise.
  std::string ToString() const;
  // Scientific notation with `digits` significant digits, truncated toward
  // zero, e.g. "6.804e-32". Intended for human-readable output only.
  std::string ToScientific(int digits = 4) const;
  double ToDouble() const { return value_.get_d(); }

 private:
  mpq_class value_;
};

// Largest dyadic with `bits` significant bits that is <= q (RoundDown), or
// smallest such dyadic >= q (RoundUp). Zero maps to zero.
Rational RoundDown(const Rational& q, int bits);
Rational RoundUp(const Rational& q, int bits);

// 2^e for any integer e.
Rational PowerOfTwo(long exponent);

// Parses integer literals of the forms "12345", "704*2^60", "3e69",
// "1.375e11", "2^60", "3*2^69". The value must be an integer.
BigInt ParseInteger(std::string_view text);

// Number of bits in |n| (0 for n = 0).
std::size_t BitLength(const BigInt& n);

enum class TriState { kTrue, kFalse, kUnknown };

std::string_view ToString(TriState t);

// Closed interval [lo, hi] of reals with rational endpoints. Arithmetic is
// outward-rounded to precision_bits + kGuardBits significant bits, so the
// result always contains the exact result on any members of the operands.
class RealInterval {
 public:
  RealInterval(Rational lo, Rational hi,
               int precision_bits = kDefaultPrecisionBits);
  static RealInterval Point(const Rational& q,
                            int precision_bits = kDefaultPrecisionBits);

  const Rational& lo() const { return lo_; }
  const Rational& hi() const { return hi_; }
  int precision_bits() const { return precision_bits_; }

  Rational Width() const { return hi_ - lo_; }
  bool IsPoint() const { return lo_ == hi_; }
  bool Contains(const Rational& q) const { return lo_ <= q && q <= hi_; }
  bool Contains(const RealInterval& o) const {
    return lo_ <= o.lo_ && o.hi_ <= hi_;
  }
  bool ContainsZero() const { return lo_.sign() <= 0 && hi_.sign() >= 0; }

  RealInterval WithPrecision(int bits) const;

  RealInterval operator-() const;
  RealInterval Reciprocal() const;

  friend RealInterval operator+(const RealInterval& a, const RealInterval& b);
  friend RealInterval operator-(const RealInterval& a, const RealInterval& b);
  friend RealInterval operator*(const RealInterval& a, const RealInterval& b);
  friend RealInterval operator/(const RealInterval& a, const RealInterval& b);

  std::string ToString() const;

 private:
  Rational lo_;
  Rational hi_;
  int precision_bits_;
};

// Rounds both endpoints outward to `bits` + kGuardBits significant bits.
RealInterval RoundOutward(const Rational& lo, const Rational& hi, int bits);

// Rigorous enclosures of log 2, log 3 and log 3 / log 2. Width of
// DeltaInterval(p) is at most 2^(1-p).
RealInterval Log2Interval(int precision_bits = kDefaultPrecisionBits);
RealInterval Log3Interval(int precision_bits = kDefaultPrecisionBits);
RealInterval DeltaInterval(int precision_bits = kDefaultPrecisionBits);

// Natural logarithm; requires x.lo() > 0.
RealInterval Log(const RealInterval& x);
RealInterval Exp(const RealInterval& x);
// x^n for x.lo() >= 0.
RealInterval PowInt(const RealInterval& base, std::uint64_t exponent);
// Enclosure of {b^e : b in base, e in exponent}; requires base.lo() > 0.
// Integer point exponents are evaluated by repeated squaring.
RealInterval IntervalPow(const RealInterval& base,
                         const RealInterval& exponent);

// TRUE iff a.hi < b.lo, FALSE iff a.lo > b.hi, UNKNOWN otherwise.
TriState CmpConservative(const RealInterval& a, const RealInterval& b);

// Precision schedule for rigorous decisions: start, then doubling up to the
// ceiling.
struct PrecisionPolicy {
  int start_bits = kDefaultPrecisionBits;
  int max_bits = kDefaultMaxPrecisionBits;
};

// Reads CYCLEBOUND_PRECISION_BITS, falling back to kDefaultPrecisionBits.
int DefaultPrecisionFromEnvironment();

// Runs fn(bits) at start_bits, doubling on InsufficientPrecision until
// max_bits; rethrows the last failure past the ceiling.
template <typename Fn>
auto WithPrecisionRetry(const PrecisionPolicy& policy, Fn&& fn)
    -> decltype(fn(0)) {
  int bits = policy.start_bits;
  while (true) {
    try {
      return fn(bits);
    } catch (const InsufficientPrecision&) {
      if (bits >= policy.max_bits) throw;
      bits = bits * 2 > policy.max_bits ? policy.max_bits : bits * 2;
    }
  }
}

}  // namespace cyclebound

#endif  // CYCLEBOUND_NUMERICS_H_
