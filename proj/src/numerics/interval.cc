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

#include <algorithm>
#include <array>
#include <string>

#include "cyclebound/numerics.h"

namespace cyclebound {

RealInterval::RealInterval(Rational lo, Rational hi, int precision_bits)
    : lo_(std::move(lo)), hi_(std::move(hi)), precision_bits_(precision_bits) {
  if (hi_ < lo_) throw std::invalid_argument("interval with lo > hi");
  if (precision_bits_ < 1) throw std::invalid_argument("precision_bits < 1");
}

RealInterval RealInterval::Point(const Rational& q, int precision_bits) {
  return RealInterval(q, q, precision_bits);
}

RealInterval RealInterval::WithPrecision(int bits) const {
  return RealInterval(lo_, hi_, bits);
}

RealInterval RoundOutward(const Rational& lo, const Rational& hi, int bits) {
  return RealInterval(RoundDown(lo, bits + kGuardBits),
                      RoundUp(hi, bits + kGuardBits), bits);
}

RealInterval RealInterval::operator-() const {
  return RealInterval(-hi_, -lo_, precision_bits_);
}

RealInterval RealInterval::Reciprocal() const {
  if (ContainsZero()) {
    throw std::domain_error("reciprocal of an interval containing zero");
  }
  return RoundOutward(hi_.Reciprocal(), lo_.Reciprocal(), precision_bits_);
}

RealInterval operator+(const RealInterval& a, const RealInterval& b) {
  return RoundOutward(a.lo_ + b.lo_, a.hi_ + b.hi_,
                      std::max(a.precision_bits_, b.precision_bits_));
}

RealInterval operator-(const RealInterval& a, const RealInterval& b) {
  return RoundOutward(a.lo_ - b.hi_, a.hi_ - b.lo_,
                      std::max(a.precision_bits_, b.precision_bits_));
}

RealInterval operator*(const RealInterval& a, const RealInterval& b) {
  const std::array<Rational, 4> p = {a.lo_ * b.lo_, a.lo_ * b.hi_,
                                     a.hi_ * b.lo_, a.hi_ * b.hi_};
  const auto [mn, mx] = std::minmax_element(p.begin(), p.end());
  return RoundOutward(*mn, *mx, std::max(a.precision_bits_, b.precision_bits_));
}

RealInterval operator/(const RealInterval& a, const RealInterval& b) {
  if (b.ContainsZero()) {
    throw std::domain_error("division by an interval containing zero");
  }
  const std::array<Rational, 4> p = {a.lo_ / b.lo_, a.lo_ / b.hi_,
                                     a.hi_ / b.lo_, a.hi_ / b.hi_};
  const auto [mn, mx] = std::minmax_element(p.begin(), p.end());
  return RoundOutward(*mn, *mx, std::max(a.precision_bits_, b.precision_bits_));
}

std::string RealInterval::ToString() const {
  return "[" + lo_.ToScientific(8) + ", " + hi_.ToScientific(8) + "]";
}

TriState CmpConservative(const RealInterval& a, const RealInterval& b) {
  if (a.hi() < b.lo()) return TriState::kTrue;
  if (a.lo() > b.hi()) return TriState::kFalse;
  return TriState::kUnknown;
}

RealInterval PowInt(const RealInterval& base, std::uint64_t exponent) {
  if (base.lo().sign() < 0) {
    throw std::domain_error("PowInt requires a nonnegative base");
  }
  if (exponent == 0) return RealInterval::Point(1, base.precision_bits());
  std::size_t steps = 0;
  for (std::uint64_t e = exponent; e != 0; e >>= 1) ++steps;
  const int bits = base.precision_bits() + kGuardBits +
                   2 * static_cast<int>(steps) + 8;
  Rational lo = 1;
  Rational hi = 1;
  Rational b_lo = base.lo();
  Rational b_hi = base.hi();
  for (std::uint64_t e = exponent;; e >>= 1) {
    if (e & 1) {
      lo = RoundDown(lo * b_lo, bits);
      hi = RoundUp(hi * b_hi, bits);
    }
    if (e <= 1) break;
    b_lo = RoundDown(b_lo * b_lo, bits);
    b_hi = RoundUp(b_hi * b_hi, bits);
  }
  return RoundOutward(lo, hi, base.precision_bits());
}

RealInterval IntervalPow(const RealInterval& base,
                         const RealInterval& exponent) {
  if (base.lo().sign() <= 0) {
    throw std::domain_error("IntervalPow requires a positive base");
  }
  const int bits = std::max(base.precision_bits(), exponent.precision_bits());
  if (exponent.IsPoint() && exponent.lo().is_integer() &&
      BitLength(exponent.lo().num()) < 63) {
    const long e = exponent.lo().num().get_si();
    const RealInterval p =
        PowInt(base.WithPrecision(bits), static_cast<std::uint64_t>(e < 0 ? -e : e));
    return e < 0 ? p.Reciprocal() : p;
  }
  return Exp(exponent.WithPrecision(bits) * Log(base.WithPrecision(bits)));
}

}  // namespace cyclebound
