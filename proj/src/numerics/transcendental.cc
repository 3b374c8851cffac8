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

// Logarithms and exponentials from rational power series. Every partial sum
// is rounded in the safe direction and the truncated tail is bounded
// explicitly, so the returned endpoints are proven bounds.

#include <map>
#include <mutex>
#include <utility>

#include "cyclebound/numerics.h"

namespace cyclebound {

namespace {

struct Bounds {
  Rational lo;
  Rational hi;
};

// atanh(t) = sum_k t^(2k+1) / (2k+1) for rational t in [0, 1/3).
// The tail after the last included term is at most
// t^(2k+3) / ((2k+3)(1 - t^2)) <= (9/8) * t^(2k+3).
Bounds AtanhSeries(const Rational& t, int bits) {
  if (t.is_zero()) return {0, 0};
  const Rational t_lo = RoundDown(t, bits);
  const Rational t_hi = RoundUp(t, bits);
  const Rational t2_lo = RoundDown(t_lo * t_lo, bits);
  const Rational t2_hi = RoundUp(t_hi * t_hi, bits);
  Rational pow_lo = t_lo;
  Rational pow_hi = t_hi;
  Rational sum_lo = 0;
  Rational sum_hi = 0;
  const Rational negligible = PowerOfTwo(-(bits + 8));
  for (long k = 0;; ++k) {
    const Rational denom = 2 * k + 1;
    sum_lo = RoundDown(sum_lo + RoundDown(pow_lo / denom, bits), bits);
    sum_hi = RoundUp(sum_hi + RoundUp(pow_hi / denom, bits), bits);
    pow_lo = RoundDown(pow_lo * t2_lo, bits);
    pow_hi = RoundUp(pow_hi * t2_hi, bits);
    if (pow_hi <= sum_hi * negligible) break;
  }
  sum_hi = RoundUp(sum_hi + pow_hi * Rational(9) / Rational(8), bits);
  return {sum_lo, sum_hi};
}

// Working precision used internally for a nominal precision.
int WorkingBits(int precision_bits) {
  return precision_bits + kGuardBits + 16;
}

RealInterval ComputeLog2(int precision_bits) {
  const int w = WorkingBits(precision_bits);
  const Bounds a = AtanhSeries(Rational(BigInt(1), BigInt(3)), w);
  return RoundOutward(a.lo * 2, a.hi * 2, precision_bits);
}

RealInterval ComputeLog3(int precision_bits) {
  // log 3 = log 2 + log(3/2) = log 2 + 2 atanh(1/5).
  const int w = WorkingBits(precision_bits);
  const Bounds a = AtanhSeries(Rational(BigInt(1), BigInt(3)), w);
  const Bounds b = AtanhSeries(Rational(BigInt(1), BigInt(5)), w);
  return RoundOutward((a.lo + b.lo) * 2, (a.hi + b.hi) * 2, precision_bits);
}

template <typename Fn>
RealInterval Cached(std::map<int, RealInterval>& cache, std::mutex& mu,
                    int precision_bits, Fn compute) {
  {
    std::lock_guard<std::mutex> lock(mu);
    auto it = cache.find(precision_bits);
    if (it != cache.end()) return it->second;
  }
  RealInterval value = compute(precision_bits);
  std::lock_guard<std::mutex> lock(mu);
  return cache.emplace(precision_bits, std::move(value)).first->second;
}

// log q for rational q > 0 at nominal precision `bits`.
Bounds LogRational(const Rational& q, int bits) {
  if (q.sign() <= 0) throw std::domain_error("log of a nonpositive number");
  long j = static_cast<long>(BitLength(q.num())) -
           static_cast<long>(BitLength(q.den()));
  Rational y = q * PowerOfTwo(-j);
  while (y < 1) {
    --j;
    y *= 2;
  }
  while (y >= 2) {
    ++j;
    y /= 2;
  }
  std::size_t jbits = 0;
  for (unsigned long a = static_cast<unsigned long>(j < 0 ? -j : j); a != 0;
       a >>= 1) {
    ++jbits;
  }
  const int w = WorkingBits(bits) + static_cast<int>(jbits);
  const RealInterval log2 = Log2Interval(w);
  const Bounds a = AtanhSeries((y - 1) / (y + 1), w);
  Rational lo = a.lo * 2;
  Rational hi = a.hi * 2;
  if (j >= 0) {
    lo += log2.lo() * Rational(j);
    hi += log2.hi() * Rational(j);
  } else {
    lo += log2.hi() * Rational(j);
    hi += log2.lo() * Rational(j);
  }
  return {RoundDown(lo, w), RoundUp(hi, w)};
}

// exp(x) for rational x, via exp(x) = exp(x / 2^s)^(2^s) with
// |x / 2^s| <= 1/2 and a Taylor series whose tail is bounded by its last
// included term.
Bounds ExpRational(const Rational& x, int bits) {
  if (x.is_zero()) return {1, 1};
  if (x.Abs() > Rational(BigInt(BigInt(1) << 40))) {
    throw std::overflow_error("exp argument too large");
  }
  const bool negative = x.sign() < 0;
  const Rational y = x.Abs();
  long s = 0;
  while (y * PowerOfTwo(-s) > Rational(BigInt(1), BigInt(2))) ++s;
  const int w = WorkingBits(bits) + static_cast<int>(s) + 16;
  const Rational r = y * PowerOfTwo(-s);
  const Rational r_lo = RoundDown(r, w);
  const Rational r_hi = RoundUp(r, w);
  Rational term_lo = 1;
  Rational term_hi = 1;
  Rational sum_lo = 1;
  Rational sum_hi = 1;
  const Rational negligible = PowerOfTwo(-(w + 8));
  for (long k = 1;; ++k) {
    term_lo = RoundDown(term_lo * r_lo / Rational(k), w);
    term_hi = RoundUp(term_hi * r_hi / Rational(k), w);
    sum_lo = RoundDown(sum_lo + term_lo, w);
    sum_hi = RoundUp(sum_hi + term_hi, w);
    if (term_hi <= sum_hi * negligible) break;
  }
  sum_hi = RoundUp(sum_hi + term_hi, w);
  for (long i = 0; i < s; ++i) {
    sum_lo = RoundDown(sum_lo * sum_lo, w);
    sum_hi = RoundUp(sum_hi * sum_hi, w);
  }
  if (negative) {
    return {RoundDown(sum_hi.Reciprocal(), w), RoundUp(sum_lo.Reciprocal(), w)};
  }
  return {sum_lo, sum_hi};
}

}  // namespace

RealInterval Log2Interval(int precision_bits) {
  static std::map<int, RealInterval> cache;
  static std::mutex mu;
  return Cached(cache, mu, precision_bits, ComputeLog2);
}

RealInterval Log3Interval(int precision_bits) {
  static std::map<int, RealInterval> cache;
  static std::mutex mu;
  return Cached(cache, mu, precision_bits, ComputeLog3);
}

RealInterval DeltaInterval(int precision_bits) {
  if (precision_bits < 16) {
    throw std::invalid_argument("DeltaInterval requires precision_bits >= 16");
  }
  static std::map<int, RealInterval> cache;
  static std::mutex mu;
  return Cached(cache, mu, precision_bits, [](int p) {
    const RealInterval d = Log3Interval(p + 8) / Log2Interval(p + 8);
    return RoundOutward(d.lo(), d.hi(), p);
  });
}

RealInterval Log(const RealInterval& x) {
  if (x.lo().sign() <= 0) {
    throw std::domain_error("log of an interval that is not positive");
  }
  const int p = x.precision_bits();
  const Bounds lo = LogRational(x.lo(), p);
  const Bounds hi = x.IsPoint() ? lo : LogRational(x.hi(), p);
  return RoundOutward(lo.lo, hi.hi, p);
}

RealInterval Exp(const RealInterval& x) {
  const int p = x.precision_bits();
  const Bounds lo = ExpRational(x.lo(), p);
  const Bounds hi = x.IsPoint() ? lo : ExpRational(x.hi(), p);
  return RoundOutward(lo.lo, hi.hi, p);
}

}  // namespace cyclebound
