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

#ifndef CYCLEBOUND_CONTFRAC_H_
#define CYCLEBOUND_CONTFRAC_H_

#include <cstddef>
#include <vector>

#include "cyclebound/numerics.h"

namespace cyclebound {

struct ContinuedFraction {
  std::vector<BigInt> partial_quotients;
  // True when the quotients are the complete expansion of a rational.
  bool exact = false;
};

// Emits quotients while both endpoints of x agree on them, up to max_terms.
// Throws InsufficientPrecision if not even the integer part is determined.
// Exact rationals end with a quotient >= 2 unless the expansion has length 1.
ContinuedFraction CfExpand(const RealInterval& x, std::size_t max_terms);

// p_k/q_k for every prefix of the expansion.
std::vector<Rational> Convergents(const ContinuedFraction& cf);

struct FractionInInterval {
  BigInt numerator;
  BigInt denominator;
  // The fraction is [a_0; a_1, ..., a_(k-1), c_k] where a_i are the common
  // quotients of both endpoints.
  std::size_t k = 0;
  BigInt c_k;

  Rational value() const { return Rational(numerator, denominator); }
};

// The fraction with the smallest denominator strictly between alpha and
// beta, where alpha and beta are enclosures of the true endpoints. Every
// decision holds for all members of the enclosures; otherwise throws
// InsufficientPrecision. Requires alpha.hi < beta.lo and alpha.lo >= 0.
FractionInInterval SmallestDenominatorInOpenInterval(const RealInterval& alpha,
                                                     const RealInterval& beta);

// The smallest fraction p/q > x with q < max_denominator (exclusive), i.e.
// the last upper semiconvergent of x below that denominator. x must be an
// enclosure of a positive irrational precise enough to resolve the
// expansion; otherwise throws InsufficientPrecision.
Rational SmallestFractionAbove(const RealInterval& x,
                               const BigInt& max_denominator);

}  // namespace cyclebound

#endif  // CYCLEBOUND_CONTFRAC_H_
