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

// Lower bounds on the number K of odd members of a hypothetical m-cycle.
//
// Each step bounds (K+L)/K - delta from above by some epsilon, then takes
// the smallest denominator of a fraction in (delta, delta + epsilon) as the
// new lower bound on K. Steps repeat until the bound stops growing or
// exceeds the known upper bound 1.4784 * m * delta^m.

#ifndef CYCLEBOUND_PIPELINE_H_
#define CYCLEBOUND_PIPELINE_H_

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "cyclebound/numerics.h"

namespace cyclebound {

// How the average of T(n_i) over a cycle is bounded when no window of
// large minima is available.
enum class TConstantMode {
  kAnalytic,    // 97/54 per minimum, valid for X0 > 765
  kComputer1,   // 1/(704*2^60) per minimum, needs X0 >= 704*2^60
  kWeighted34,  // 3/4 per odd step, independent of m
};

std::string_view ToString(TConstantMode mode);
TConstantMode ParseTConstantMode(std::string_view text);

// 704 * 2^60.
BigInt ComputerConstantX0();

struct GlobalConfig {
  BigInt x0 = ComputerConstantX0();
  TConstantMode mode = TConstantMode::kAnalytic;
  PrecisionPolicy precision;
  // Set when the per-minimum constant 1 has been certified (or is taken on
  // trust); required for table generation in kComputer1 mode.
  bool computer_constant_certified = false;

  // Throws std::invalid_argument on x0 < 766, or kComputer1 with
  // x0 < 704*2^60.
  void Validate() const;
};

enum class StepVerdict { kImproved, kFixedPoint, kContradiction };
std::string_view ToString(StepVerdict v);

struct BoundReport {
  std::uint64_t m = 0;
  BigInt k_in;
  // Largest feasible window length.
  std::uint64_t m2 = 0;
  // Window length whose bound was used (m2, or 0 when a mode constant won).
  std::uint64_t m2_used = 0;
  std::optional<RealInterval> v;  // present when m2_used > 0
  RealInterval epsilon = RealInterval::Point(0);
  // "window", "analytic", "computer" or "weighted".
  std::string epsilon_source;
  // Smallest denominator of a fraction in (delta, delta + epsilon.hi).
  BigInt denominator;
  // max(k_in, denominator).
  BigInt k_out;
  StepVerdict verdict = StepVerdict::kImproved;
  TConstantMode mode = TConstantMode::kAnalytic;
  int precision_bits = 0;
};

// Largest m2 in [0, m] with
//   (delta^m2 - 1)/(delta - 1) * log(162/97 * x0)/log 2 <= (m2/m) * K,
// decided rigorously at `bits`. The feasible set is always {0, ..., M}.
std::uint64_t ChooseM2(std::uint64_t m, const BigInt& k, const BigInt& x0,
                       int bits);

// v = (m2/m) * K * (delta - 1)/(delta^m2 - 1), for m2 >= 1.
RealInterval WindowExponent(std::uint64_t m, const BigInt& k, std::uint64_t m2,
                            int bits);

// Enclosure of the upper bound on (K+L)/K - delta. For m2 >= 1 this is the
// window bound; for m2 = 0 it is the mode constant of config.mode.
RealInterval EpsilonBound(std::uint64_t m, const BigInt& k, std::uint64_t m2,
                          const GlobalConfig& config, int bits);

// Enclosure of 1.4784 * m * delta^m; m must be at most 2^20.
RealInterval SwUpperBound(std::uint64_t m,
                          int bits = kDefaultPrecisionBits);

// Rigorous test of k > 1.4784 * m * delta^m, carried out on logarithms so
// that it works for any m.
TriState ExceedsSwUpperBound(const BigInt& k, std::uint64_t m, int bits);

struct IterateOptions {
  int max_rounds = 50;
  // Try every feasible m2 rather than only the largest.
  bool scan_all_m2 = false;
};

// One refinement step starting from lower bound k.
BoundReport BoundStep(std::uint64_t m, const BigInt& k,
                      const GlobalConfig& config, const IterateOptions& options);

// Repeats BoundStep until FIXED_POINT, CONTRADICTION or max_rounds.
std::vector<BoundReport> IterateBounds(std::uint64_t m, const BigInt& k_start,
                                       const GlobalConfig& config,
                                       const IterateOptions& options = {});

// Starting bound on K imported from prior work: 7e11 for m <= 91,
// 7.2e10 otherwise.
BigInt DefaultKStart(std::uint64_t m);

struct TableRow {
  std::uint64_t m = 0;
  BigInt k_start;
  BigInt k_bound;
  StepVerdict verdict = StepVerdict::kFixedPoint;
  std::vector<BoundReport> chain;
};

// Iterates every m independently, on up to `workers` threads. Requires
// config.computer_constant_certified in kComputer1 mode.
std::vector<TableRow> GenerateTable(const std::vector<std::uint64_t>& m_values,
                                    const GlobalConfig& config,
                                    const IterateOptions& options = {},
                                    unsigned workers = 1);

enum class ThresholdMode { kSharp, kLegacy };
std::string_view ToString(ThresholdMode mode);
ThresholdMode ParseThresholdMode(std::string_view text);

struct ThresholdResult {
  // Smallest fraction above delta with denominator below the target.
  Rational obstruction;
  RealInterval epsilon_star = RealInterval::Point(0);
  BigInt x0_required;
  // ceil(x0_required / 2^60).
  BigInt x0_required_units;
  int precision_bits = 0;
};

// Smallest X0 for which the X0-only epsilon rules out every K below
// k_target: epsilon* = p/q - delta for the obstruction p/q, and
// x0 = ceil(1/(c * log 2 * epsilon*)) with c = 4 (kSharp) or 3 (kLegacy).
ThresholdResult X0Threshold(const BigInt& k_target, ThresholdMode mode,
                            const PrecisionPolicy& policy = {});

}  // namespace cyclebound

#endif  // CYCLEBOUND_PIPELINE_H_
