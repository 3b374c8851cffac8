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

#include <random>

#include "cyclebound/numerics.h"
#include "doctest.h"
#include "oracles.h"

namespace cyclebound {
namespace {

Rational Q(const char* s) { return Rational::Parse(s); }

TEST_CASE("rational canonical form") {
  const Rational r(BigInt(6), BigInt(-4));
  CHECK(r.num() == -3);
  CHECK(r.den() == 2);
  CHECK(Q("35/18") + Q("1/18") == 2);
  CHECK(Q("1.4784") == Rational(BigInt(14784), BigInt(10000)));
  CHECK(Q("-0.5") == Rational(BigInt(-1), BigInt(2)));
  CHECK(Q("1e-3") == Rational(BigInt(1), BigInt(1000)));
  CHECK(Q("3/6").ToString() == "1/2");
  CHECK_THROWS_AS(Q("1/0"), std::domain_error);
  CHECK_THROWS_AS(Q("abc"), std::invalid_argument);
}

TEST_CASE("rational floor ceil and scientific") {
  CHECK(Q("-7/2").Floor() == -4);
  CHECK(Q("-7/2").Ceil() == -3);
  CHECK(Q("7/2").Floor() == 3);
  CHECK(Q("383/1309").ToScientific(4) == "2.925e-1");
  CHECK(Rational(BigInt("7941964418702608664581")).ToScientific(3) ==
        "7.94e21");
}

TEST_CASE("integer literal forms") {
  CHECK(ParseInteger("704*2^60") == BigInt(704) * (BigInt(1) << 60));
  CHECK(ParseInteger("3e69") == BigInt("3" + std::string(69, '0')));
  CHECK(ParseInteger("1.375e11") == BigInt("137500000000"));
  CHECK(ParseInteger("0123") == 123);
  CHECK(ParseInteger("3*2^69") == ParseInteger("1536*2^60"));
  CHECK_THROWS(ParseInteger("1.5"));
  CHECK_THROWS(ParseInteger("2^x"));
}

TEST_CASE("directed rounding brackets the value") {
  std::mt19937_64 rng(7);
  for (int i = 0; i < 500; ++i) {
    const Rational q(BigInt(static_cast<long>(rng() % 2000001) - 1000000),
                     BigInt(static_cast<long>(rng() % 999999) + 1));
    const int bits = 1 + static_cast<int>(rng() % 40);
    const Rational lo = RoundDown(q, bits);
    const Rational hi = RoundUp(q, bits);
    CHECK(lo <= q);
    CHECK(q <= hi);
    if (!q.is_zero()) {
      CHECK((hi - lo) <= q.Abs() * PowerOfTwo(2 - bits));
    }
  }
}

TEST_CASE("delta enclosure matches the frozen oracle") {
  const RealInterval d64 = DeltaInterval(64);
  CHECK(d64.lo() >= Q("1.5849625007211561"));
  CHECK(d64.hi() <= Q("1.5849625007211563"));
  const RealInterval d16 = DeltaInterval(16);
  // Agrees with 1.5849 to four decimals.
  CHECK((d16.lo() - Q("1.5849")).Abs() < Q("1e-4"));
  CHECK((d16.hi() - Q("1.5849")).Abs() < Q("1e-4"));
  CHECK(d16.Width() <= PowerOfTwo(-15));
  for (int p : {16, 64, 256, 384, 1024}) {
    const RealInterval d = DeltaInterval(p);
    CHECK(d.lo() > 1);
    CHECK(d.hi() < 2);
    CHECK(d.Width() <= PowerOfTwo(1 - p));
    // The 60-digit oracle is within 10^-59 of the true value.
    const Rational ref = Q(oracle::kDelta60);
    const Rational slack = Q("1e-59");
    CHECK(d.lo() <= ref + slack);
    CHECK(d.hi() >= ref - slack);
  }
}

TEST_CASE("delta enclosure is consistent with exact power comparisons") {
  // p/q > delta iff 2^p > 3^q.
  const RealInterval d = DeltaInterval(128);
  for (long q = 1; q <= 60; ++q) {
    for (long p = q; p <= 2 * q; ++p) {
      BigInt two, three;
      mpz_ui_pow_ui(two.get_mpz_t(), 2, p);
      mpz_ui_pow_ui(three.get_mpz_t(), 3, q);
      const Rational f{BigInt(p), BigInt(q)};
      if (two > three) {
        CHECK(d.hi() < f);
      } else {
        CHECK(d.lo() > f);
      }
    }
  }
}

TEST_CASE("monotone refinement of delta") {
  for (int p = 16; p <= 512; p *= 2) {
    CHECK(DeltaInterval(p).Contains(DeltaInterval(2 * p)));
  }
}

TEST_CASE("log and exp enclosures") {
  const Rational slack = Q("1e-49");
  const RealInterval l2 = Log2Interval(200);
  CHECK(l2.lo() <= Q(oracle::kLog2_50) + slack);
  CHECK(l2.hi() >= Q(oracle::kLog2_50) - slack);
  const RealInterval l3 = Log(RealInterval::Point(3, 200));
  CHECK(l3.lo() <= Q(oracle::kLog3_50) + slack);
  CHECK(l3.hi() >= Q(oracle::kLog3_50) - slack);
  const RealInterval e = Exp(RealInterval::Point(1, 200));
  CHECK(e.lo() <= Q(oracle::kE_50) + slack);
  CHECK(e.hi() >= Q(oracle::kE_50) - slack);
  CHECK(e.Width() < Q("1e-55"));
  const RealInterval einv = Exp(RealInterval::Point(-1, 200));
  CHECK((einv * e).Contains(1));
  const RealInterval round_trip = Exp(Log(RealInterval::Point(Q("12345/67"), 200)));
  CHECK(round_trip.Contains(Q("12345/67")));
  CHECK_THROWS_AS(Log(RealInterval(-1, 1)), std::domain_error);
}

TEST_CASE("interval power") {
  const RealInterval one = IntervalPow(RealInterval::Point(2), RealInterval::Point(0));
  CHECK(one.lo() == 1);
  CHECK(one.hi() == 1);
  const RealInterval root = IntervalPow(RealInterval::Point(4), RealInterval::Point(Q("1/2")));
  CHECK(root.Contains(2));
  CHECK(root.Width() < PowerOfTwo(-300));
  const RealInterval d91 = IntervalPow(DeltaInterval(), RealInterval::Point(91));
  CHECK(d91.lo() <= Q(oracle::kDeltaPow91) + Q("1e-9"));
  CHECK(d91.hi() >= Q(oracle::kDeltaPow91) - Q("1e-9"));
  CHECK(d91.Width() < Q("1e-60"));
  const RealInterval via_exp = IntervalPow(DeltaInterval(), RealInterval::Point(Q("91/1")) +
                                                                RealInterval::Point(Q("1/3")) -
                                                                RealInterval::Point(Q("1/3")));
  CHECK(via_exp.Contains(d91.lo()));
  CHECK_THROWS_AS(IntervalPow(RealInterval(0, 1), RealInterval::Point(2)),
                  std::domain_error);
}

TEST_CASE("conservative comparison") {
  CHECK(CmpConservative(RealInterval::Point(1), RealInterval::Point(2)) ==
        TriState::kTrue);
  CHECK(CmpConservative(RealInterval(1, 3), RealInterval(2, 4)) ==
        TriState::kUnknown);
  CHECK(CmpConservative(DeltaInterval(64), RealInterval::Point(Q("158496/100000"))) ==
        TriState::kFalse);
}

TEST_CASE("containment and antisymmetry on random rationals") {
  std::mt19937_64 rng(11);
  auto random_q = [&] {
    return Rational(BigInt(static_cast<long>(rng() % 20001) - 10000),
                    BigInt(static_cast<long>(rng() % 997) + 1));
  };
  for (int i = 0; i < 300; ++i) {
    const Rational a = random_q();
    const Rational b = random_q();
    const RealInterval ia = RealInterval::Point(a, 24);
    const RealInterval ib = RealInterval::Point(b, 24);
    CHECK((ia + ib).Contains(a + b));
    CHECK((ia - ib).Contains(a - b));
    CHECK((ia * ib).Contains(a * b));
    if (!b.is_zero()) CHECK((ia / ib).Contains(a / b));
    const RealInterval wa(a, a + Rational(BigInt(static_cast<long>(rng() % 5)), BigInt(3)), 24);
    const RealInterval wb(b, b + Rational(BigInt(static_cast<long>(rng() % 5)), BigInt(3)), 24);
    const TriState ab = CmpConservative(wa, wb);
    const TriState ba = CmpConservative(wb, wa);
    if (ab == TriState::kTrue) CHECK(ba == TriState::kFalse);
    if (ab == TriState::kFalse) CHECK(ba == TriState::kTrue);
    if (ab == TriState::kUnknown) CHECK(ba == TriState::kUnknown);
  }
}

TEST_CASE("precision retry doubles until success") {
  int calls = 0;
  const int bits = WithPrecisionRetry(PrecisionPolicy{384, 8192}, [&](int b) {
    ++calls;
    if (b < 1536) throw InsufficientPrecision("test");
    return b;
  });
  CHECK(bits == 1536);
  CHECK(calls == 3);
  CHECK_THROWS_AS(WithPrecisionRetry(PrecisionPolicy{384, 768},
                                     [](int) -> int {
                                       throw InsufficientPrecision("never");
                                     }),
                  InsufficientPrecision);
}

}  // namespace
}  // namespace cyclebound
