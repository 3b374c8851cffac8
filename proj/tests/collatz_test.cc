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

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <random>

#include "cyclebound/collatz.h"
#include "doctest.h"
#include "oracles.h"

namespace cyclebound {
namespace {

BigInt B(unsigned long v) { return BigInt(v); }

TEST_CASE("single steps") {
  CHECK(CollatzStep(7) == 11);
  CHECK(CollatzStep(26) == 13);
  CHECK(CollatzStep(1) == 2);
  CHECK_THROWS(CollatzStep(0));
}

TEST_CASE("accelerated odd runs") {
  OddRun r = AccelOddRun(7);
  CHECK(r.k == 3);
  CHECK(r.end_value == 26);
  r = AccelOddRun(31);
  CHECK(r.k == 5);
  CHECK(r.end_value == 242);
  r = AccelOddRun(1);
  CHECK(r.k == 1);
  CHECK(r.end_value == 2);
  CHECK_THROWS(AccelOddRun(4));
}

TEST_CASE("accelerated runs agree with iterated steps below 2^16") {
  for (std::uint64_t n = 1; n < (1u << 16); n += 2) {
    std::uint64_t x = n;
    std::uint64_t k = 0;
    while (x & 1) {
      x = oracle::Step(x);
      ++k;
    }
    const OddRun r = AccelOddRun(B(n));
    REQUIRE(r.k == k);
    REQUIRE(r.end_value == B(x));
  }
}

TEST_CASE("profiles") {
  TrajectoryProfile p = Profile(7, 1);
  REQUIRE(p.minima.size() == 1);
  CHECK(p.minima[0].k == 3);
  CHECK(p.minima[0].ell == 1);
  CHECK(p.minima[0].t_value == Rational(B(383), B(1309)));
  CHECK_FALSE(p.truncated);

  p = Profile(27, 2);
  REQUIRE(p.minima.size() == 2);
  CHECK(p.minima[0].n == 27);
  CHECK(p.minima[0].k == 2);
  CHECK(p.minima[0].ell == 1);
  CHECK(p.minima[1].n == 31);

  p = Profile(3, 4);
  REQUIRE(p.minima.size() == 1);
  CHECK(p.minima[0].k == 2);
  CHECK(p.minima[0].ell == 3);
  CHECK(p.truncated);

  p = Profile(3, 1);
  CHECK(p.truncated);
}

TEST_CASE("profile invariants on random starts") {
  std::mt19937_64 rng(3);
  for (int i = 0; i < 300; ++i) {
    const BigInt start = B((rng() % 100000000) * 2 + 3);
    const TrajectoryProfile p = Profile(start, 20);
    for (std::size_t j = 0; j < p.minima.size(); ++j) {
      const MinimumRecord& r = p.minima[j];
      REQUIRE(mpz_odd_p(r.n.get_mpz_t()));
      // n = -1 mod 2^k.
      REQUIRE(mpz_divisible_2exp_p(BigInt(r.n + 1).get_mpz_t(), r.k));
      // T < 3/n and the exact-k refinement.
      REQUIRE(r.t_value < Rational(B(3), r.n));
      Rational two_thirds_k = 1;
      for (std::uint64_t t = 0; t < r.k; ++t) two_thirds_k *= Rational(B(2), B(3));
      // Equality holds exactly when k = 1.
      const Rational exact_k = (Rational(3) - 3 * two_thirds_k) / Rational(r.n);
      if (r.k == 1) {
        REQUIRE(r.t_value == exact_k);
      } else {
        REQUIRE(r.t_value < exact_k);
      }
      BigInt x = r.n;
      for (std::uint64_t t = 0; t < r.k + r.ell; ++t) x = CollatzStep(x);
      if (j + 1 < p.minima.size()) REQUIRE(x == p.minima[j + 1].n);
    }
  }
}

TEST_CASE("merger witnesses") {
  auto w = FindMergerWitness(5);
  REQUIRE(w.has_value());
  CHECK(w->n_prime == 2);
  CHECK(w->merge_index == 3);
  CHECK_FALSE(FindMergerWitness(7).has_value());
  CHECK_FALSE(FindMergerWitness(17).has_value());
  for (unsigned long n = 3; n < 5000; n += 2) {
    auto m = FindMergerWitness(B(n));
    if (!m) continue;
    BigInt a = B(n);
    BigInt b = m->n_prime;
    for (std::uint64_t t = 0; t < m->merge_index; ++t) a = CollatzStep(a);
    for (std::uint64_t t = 0; t + 1 < m->merge_index; ++t) b = CollatzStep(b);
    REQUIRE(a == b);
  }
}

TEST_CASE("range verification") {
  RangeVerifierReport r = VerifyRange(2);
  CHECK(r.verified);
  VerifyOptions opts;
  opts.workers = 2;
  opts.block_size = 1 << 16;
  r = VerifyRange(1000000, opts);
  CHECK(r.verified);
  // Maximum excursion by brute force over every start.
  std::uint64_t brute_max = 0;
  for (std::uint64_t n = 3; n <= 1000000; ++n) {
    std::uint64_t x = n;
    while (x >= n) {
      x = oracle::Step(x);
      brute_max = std::max(brute_max, x);
    }
  }
  CHECK(r.max_excursion == B(brute_max));
}

TEST_CASE("range verification resumes from a checkpoint") {
  const auto path =
      (std::filesystem::temp_directory_path() / "cyclebound_verify_test.ckpt").string();
  std::filesystem::remove(path);
  VerifyOptions opts;
  opts.block_size = 1 << 14;
  opts.checkpoint_path = path;
  const RangeVerifierReport full = VerifyRange(200000, opts);
  REQUIRE(full.verified);
  const auto size = std::filesystem::file_size(path);
  CHECK(size % 24 == 0);
  CHECK(size / 24 == 200000 / (1 << 14) + 1);
  // Drop two records and leave a partial third; resume recomputes those.
  std::filesystem::resize_file(path, size - 2 * 24 - 7);
  VerifyOptions resume = opts;
  resume.resume = true;
  const RangeVerifierReport again = VerifyRange(200000, resume);
  CHECK(again.verified);
  CHECK(again.blocks_resumed == size / 24 - 3);
  CHECK(again.max_excursion == full.max_excursion);
  std::filesystem::remove(path);
}

}  // namespace
}  // namespace cyclebound
