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

#ifndef CYCLEBOUND_COLLATZ_H_
#define CYCLEBOUND_COLLATZ_H_

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "cyclebound/numerics.h"

namespace cyclebound {

// C(n) = n/2 for even n, (3n+1)/2 for odd n. Requires n >= 1.
BigInt CollatzStep(const BigInt& n);

// 3^k.
BigInt PowerOfThree(std::uint64_t k);

struct OddRun {
  std::uint64_t k = 0;  // consecutive odd steps starting at n
  BigInt end_value;     // C^k(n), always even
};

// Writes n = a*2^k - 1 with a odd and returns (k, a*3^k - 1).
OddRun AccelOddRun(const BigInt& n);

// Sum of 1/C^t(n) for t = 0 .. k-1, exactly.
Rational OddRunReciprocalSum(const BigInt& n, std::uint64_t k);

struct MinimumRecord {
  BigInt n;
  std::uint64_t k = 0;
  std::uint64_t ell = 0;
  Rational t_value;
};

struct TrajectoryProfile {
  std::vector<MinimumRecord> minima;
  // Set when the trajectory reached 1 while records were being collected,
  // including as the successor of the last record.
  bool truncated = false;
};

// Records num_minima successive odd local minima starting at `start`.
TrajectoryProfile Profile(const BigInt& start, std::size_t num_minima);

struct MergerWitness {
  BigInt n_prime;
  std::uint64_t merge_index = 0;
};

// When the even run after n's odd run has length >= 2, the trajectory of
// (n-1)/2 joins n's: C^(k+2)(n) = C^(k+1)((n-1)/2).
std::optional<MergerWitness> FindMergerWitness(const BigInt& n);

struct RangeVerifierReport {
  std::uint64_t limit = 0;
  bool verified = false;
  BigInt max_excursion;
  // Smallest start whose descent could not be confirmed, if any.
  std::optional<std::uint64_t> first_failure;
  std::uint64_t blocks_resumed = 0;
  double elapsed_seconds = 0;
};

struct VerifyOptions {
  unsigned workers = 1;
  std::uint64_t block_size = std::uint64_t{1} << 20;
  // Append-only file of completed blocks; empty disables checkpointing.
  std::string checkpoint_path;
  // Skip blocks already recorded in checkpoint_path.
  bool resume = false;
};

// Confirms that every 2 <= n <= limit reaches a value below n.
RangeVerifierReport VerifyRange(std::uint64_t limit,
                                const VerifyOptions& options = {});

}  // namespace cyclebound

#endif  // CYCLEBOUND_COLLATZ_H_
