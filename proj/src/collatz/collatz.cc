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

#include "cyclebound/collatz.h"

#include <stdexcept>

namespace cyclebound {

namespace {

std::uint64_t TrailingZeros(const BigInt& n) {
  return mpz_scan1(n.get_mpz_t(), 0);
}

}  // namespace

BigInt CollatzStep(const BigInt& n) {
  if (n < 1) throw std::invalid_argument("CollatzStep requires n >= 1");
  if (mpz_odd_p(n.get_mpz_t())) return (3 * n + 1) / 2;
  return n / 2;
}

BigInt PowerOfThree(std::uint64_t k) {
  BigInt r;
  mpz_ui_pow_ui(r.get_mpz_t(), 3, k);
  return r;
}

OddRun AccelOddRun(const BigInt& n) {
  if (n < 1 || mpz_even_p(n.get_mpz_t())) {
    throw std::invalid_argument("AccelOddRun requires an odd positive n");
  }
  const BigInt n1 = n + 1;
  const std::uint64_t k = TrailingZeros(n1);
  BigInt a;
  mpz_fdiv_q_2exp(a.get_mpz_t(), n1.get_mpz_t(), k);
  return {k, BigInt(a * PowerOfThree(k) - 1)};
}

Rational OddRunReciprocalSum(const BigInt& n, std::uint64_t k) {
  if (n < 1 || k > TrailingZeros(BigInt(n + 1))) {
    throw std::invalid_argument("odd run shorter than requested");
  }
  Rational sum = 0;
  BigInt value = n;
  for (std::uint64_t t = 0; t < k; ++t) {
    sum += Rational(BigInt(1), value);
    value = (3 * value + 1) / 2;
  }
  return sum;
}

TrajectoryProfile Profile(const BigInt& start, std::size_t num_minima) {
  if (start < 1 || mpz_even_p(start.get_mpz_t())) {
    throw std::invalid_argument("Profile requires an odd positive start");
  }
  TrajectoryProfile out;
  BigInt n = start;
  while (out.minima.size() < num_minima) {
    const OddRun run = AccelOddRun(n);
    const std::uint64_t ell = TrailingZeros(run.end_value);
    out.minima.push_back({n, run.k, ell, OddRunReciprocalSum(n, run.k)});
    BigInt next;
    mpz_fdiv_q_2exp(next.get_mpz_t(), run.end_value.get_mpz_t(), ell);
    if (next == 1) {
      out.truncated = true;
      break;
    }
    n = std::move(next);
  }
  return out;
}

std::optional<MergerWitness> FindMergerWitness(const BigInt& n) {
  const OddRun run = AccelOddRun(n);
  if (TrailingZeros(run.end_value) < 2) return std::nullopt;
  return MergerWitness{BigInt((n - 1) / 2), run.k + 2};
}

}  // namespace cyclebound
