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

#include "cyclebound/contfrac.h"

#include <optional>
#include <stdexcept>

namespace cyclebound {

ContinuedFraction CfExpand(const RealInterval& x, std::size_t max_terms) {
  if (x.lo().sign() <= 0) throw std::invalid_argument("CfExpand requires x > 0");
  ContinuedFraction cf;
  Rational lo = x.lo();
  std::optional<Rational> hi = x.hi();  // nullopt stands for +infinity
  while (cf.partial_quotients.size() < max_terms) {
    const BigInt a = lo.Floor();
    if (!hi || hi->Floor() != a) {
      if (cf.partial_quotients.empty()) {
        throw InsufficientPrecision("integer part of the expansion");
      }
      break;
    }
    cf.partial_quotients.push_back(a);
    const Rational lo_frac = lo - Rational(a);
    const Rational hi_frac = *hi - Rational(a);
    if (hi_frac.is_zero()) {  // lo == hi == a
      cf.exact = true;
      break;
    }
    lo = hi_frac.Reciprocal();
    hi = lo_frac.is_zero() ? std::nullopt : std::optional(lo_frac.Reciprocal());
  }
  return cf;
}

std::vector<Rational> Convergents(const ContinuedFraction& cf) {
  if (cf.partial_quotients.empty()) {
    throw std::invalid_argument("Convergents of an empty expansion");
  }
  std::vector<Rational> out;
  BigInt p_prev = 1, q_prev = 0;  // p_{-1}, q_{-1}
  BigInt p = cf.partial_quotients[0], q = 1;
  out.emplace_back(p, q);
  for (std::size_t i = 1; i < cf.partial_quotients.size(); ++i) {
    const BigInt& a = cf.partial_quotients[i];
    BigInt p_next = a * p + p_prev;
    BigInt q_next = a * q + q_prev;
    p_prev = std::move(p);
    q_prev = std::move(q);
    p = std::move(p_next);
    q = std::move(q_next);
    out.emplace_back(p, q);
  }
  return out;
}

FractionInInterval SmallestDenominatorInOpenInterval(const RealInterval& alpha,
                                                     const RealInterval& beta) {
  if (alpha.lo().sign() < 0) {
    throw std::invalid_argument("smallest-denominator search requires alpha >= 0");
  }
  if (!(alpha.hi() < beta.lo())) {
    throw std::invalid_argument("intervals must satisfy alpha.hi < beta.lo");
  }
  // Current open interval (lo, hi); hi == nullopt means +infinity. Both are
  // carried as enclosures.
  Rational lo_lo = alpha.lo(), lo_hi = alpha.hi();
  std::optional<Rational> hi_lo = beta.lo(), hi_hi = beta.hi();
  std::vector<BigInt> prefix;
  BigInt c;
  while (true) {
    const BigInt a = lo_lo.Floor();
    if (lo_hi.Floor() != a) {
      throw InsufficientPrecision("floor of the lower endpoint");
    }
    const Rational next(BigInt(a + 1));
    if (!hi_lo || next < *hi_lo) {
      c = a + 1;
      break;
    }
    if (!(next >= *hi_hi)) {
      throw InsufficientPrecision("position of the upper endpoint");
    }
    // a + 1 >= hi > lo >= a: recurse on (1/(hi - a), 1/(lo - a)).
    prefix.push_back(a);
    const Rational lo_frac_lo = lo_lo - Rational(a);
    const Rational lo_frac_hi = lo_hi - Rational(a);
    const Rational new_lo_lo = (*hi_hi - Rational(a)).Reciprocal();
    const Rational new_lo_hi = (*hi_lo - Rational(a)).Reciprocal();
    if (lo_frac_hi.is_zero()) {  // lower endpoint exactly a
      hi_lo.reset();
      hi_hi.reset();
    } else if (lo_frac_lo.is_zero()) {
      throw InsufficientPrecision("lower endpoint may be an integer");
    } else {
      hi_lo = lo_frac_hi.Reciprocal();
      hi_hi = lo_frac_lo.Reciprocal();
    }
    lo_lo = new_lo_lo;
    lo_hi = new_lo_hi;
  }
  // Fold [prefix; c] back into p/q.
  BigInt p = c, q = 1;
  for (auto it = prefix.rbegin(); it != prefix.rend(); ++it) {
    BigInt p_next = *it * p + q;
    q = std::move(p);
    p = std::move(p_next);
  }
  FractionInInterval out{p, q, prefix.size(), c};
  const Rational gamma = out.value();
  if (!(alpha.hi() < gamma && gamma < beta.lo())) {
    throw InsufficientPrecision("result not strictly inside the enclosures");
  }
  out.numerator = gamma.num();
  out.denominator = gamma.den();
  return out;
}

Rational SmallestFractionAbove(const RealInterval& x,
                               const BigInt& max_denominator) {
  if (max_denominator < 2) {
    throw std::invalid_argument("max_denominator must be at least 2");
  }
  // Convergents p_i/q_i with p_{-2}/q_{-2} = 0/1 and p_{-1}/q_{-1} = 1/0.
  // Upper semiconvergents are (p_{k-2} + j p_{k-1}) / (q_{k-2} + j q_{k-1})
  // for odd k and 1 <= j <= a_k; they decrease toward x as q grows.
  std::size_t terms = 8;
  while (true) {
    const ContinuedFraction cf = CfExpand(x, terms);
    const auto& a = cf.partial_quotients;
    BigInt p2 = 0, q2 = 1;  // index k-2
    BigInt p1 = 1, q1 = 0;  // index k-1
    for (std::size_t k = 0; k < a.size(); ++k) {
      if (k % 2 == 1) {
        // Largest j <= a_k with q2 + j q1 < max_denominator.
        BigInt j = (max_denominator - 1 - q2) / q1;
        if (j > a[k]) j = a[k];
        if (j < a[k]) {
          if (j >= 1) return Rational(BigInt(p2 + j * p1), BigInt(q2 + j * q1));
          return Rational(p2, q2);
        }
      }
      BigInt p = a[k] * p1 + p2;
      BigInt q = a[k] * q1 + q2;
      p2 = std::move(p1);
      q2 = std::move(q1);
      p1 = std::move(p);
      q1 = std::move(q);
    }
    if (cf.exact) {
      throw std::invalid_argument("SmallestFractionAbove requires an irrational");
    }
    if (a.size() < terms) {
      throw InsufficientPrecision("expansion too short for the denominator bound");
    }
    terms *= 2;
  }
}

}  // namespace cyclebound
