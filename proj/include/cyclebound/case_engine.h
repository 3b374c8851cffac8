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

// Automated case analysis over residue classes of a cycle's local minima.
//
// The root minimum is written n_1 = 2^e * a + r with a free parameter a >= 0.
// Branching fixes the length k of the odd run after the current minimum and
// whether exactly one halving follows (l = 1, the next minimum is known) or
// more than one (l >= 2, the merger case). Every Collatz step whose parity
// depends on a splits a into 2a' and 2a' + 1.
//
// A node is closed once some window n_1 .. n_w of consecutive minima is
// shown to satisfy
//   sum T(n_j) < target * W / X0,
// where W = w (unweighted) or the sum of the odd-run lengths (weighted).
// Every minimum exceeds X0, and the l >= 2 case gives n_j >= 2*X0 + 1.

#ifndef CYCLEBOUND_CASE_ENGINE_H_
#define CYCLEBOUND_CASE_ENGINE_H_

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "cyclebound/numerics.h"

namespace cyclebound {

// value = a_coef * a + constant.
struct AffineForm {
  BigInt a_coef;
  BigInt constant;

  BigInt Evaluate(const BigInt& a) const { return a_coef * a + constant; }
  bool operator==(const AffineForm&) const = default;
};

// form(a) >= x0_multiple * X0 + offset.
struct LowerBoundConstraint {
  AffineForm form;
  BigInt x0_multiple;
  BigInt offset;

  bool operator==(const LowerBoundConstraint&) const = default;
};

struct ProcessedMinimum {
  AffineForm form;
  // Exact odd-run length, or a lower bound when run_is_lower_bound.
  std::uint64_t k = 0;
  bool run_is_lower_bound = false;
  // T(n_j) <= coef / n_j.
  Rational coef;

  bool operator==(const ProcessedMinimum&) const = default;
};

enum class NodeKind : std::uint8_t {
  kOpen = 0,     // pending minimum known, l = 1 after every processed one
  kMerger = 1,   // last processed minimum is followed by >= 2 halvings
  kLongRun = 2,  // last processed minimum has an odd run longer than k_cap
};

struct CaseState {
  std::uint64_t modulus_exp = 1;
  BigInt residue = 1;
  std::vector<ProcessedMinimum> minima;
  std::optional<AffineForm> pending;  // present iff kind == kOpen
  NodeKind kind = NodeKind::kOpen;
  std::uint64_t k_total = 0;
  std::vector<LowerBoundConstraint> constraints;
  // Smallest admissible a. Only meaningful in concrete mode; 0 otherwise.
  BigInt a_floor = 0;

  std::size_t min_count() const { return minima.size(); }
  // n_1 as a function of a.
  AffineForm RootForm() const;
  bool operator==(const CaseState&) const = default;
};

enum class SearchMode { kUnweighted, kWeighted };
std::string ToString(SearchMode mode);

struct SearchConfig {
  SearchMode mode = SearchMode::kUnweighted;
  Rational target_coef = Rational(BigInt(97), BigInt(54));
  // Absent: symbolic in X0, valid for every X0 >= 766. Present: that X0.
  std::optional<BigInt> concrete_x0;
  int max_depth = 3;
  int k_cap = 64;

  // Throws std::invalid_argument unless target > 0, max_depth >= 1,
  // k_cap >= 1 and any concrete X0 is at least 766.
  void Validate() const;
  // FNV-1a over a canonical encoding; stored in checkpoints.
  std::uint64_t Hash() const;
};

// The unconstrained class of odd n_1 > X0.
CaseState RootState(const SearchConfig& config);

// Partition of the parent's admissible set, in the order k = 1 .. k_cap
// with l = 1 before l >= 2, then the long-run child. Requires kind == kOpen.
std::vector<CaseState> Branch(const CaseState& state, const SearchConfig& config);

// How a node was closed, for auditing and sampling.
struct Closure {
  // Number of minima in the closing window.
  std::size_t window = 0;
  // Long-run nodes closed by splitting on l: the l = 1 case used a window
  // one longer, the l >= 2 case added n_w >= 2*X0 + 1.
  bool split_on_ell = false;
  std::size_t window_ell_one = 0;
  std::size_t window_merger = 0;
};

// TRUE when some window closes, FALSE when none does and the node cannot
// be refined further (terminal kind, or max_depth minima already fixed),
// UNKNOWN when branching may still help.
TriState TryClose(const CaseState& state, const SearchConfig& config);

// As TryClose, also reporting the closing window.
TriState TryCloseWithDetail(const CaseState& state, const SearchConfig& config,
                            Closure* closure);

// max(0, max over constraints of ceil((mult * x0 + offset - B) / A)).
BigInt AdmissibleFloor(const CaseState& state, const BigInt& x0);

struct SearchOptions {
  unsigned workers = 1;
  // Total nodes examined before giving up as unproven.
  std::uint64_t node_budget = 50'000'000;
  std::uint64_t modulus_exp_ceiling = 10'000;
  // Nodes a worker expands from one frontier entry per round.
  std::uint64_t task_node_limit = 4096;
  std::size_t max_witnesses = 1000;
  std::string checkpoint_path;
  bool resume = false;
};

struct SearchOutcome {
  bool proven = false;
  std::uint64_t nodes_explored = 0;
  std::uint64_t nodes_closed = 0;
  // Leaves that failed to close, plus nodes abandoned at the ceiling.
  std::uint64_t open_nodes = 0;
  std::uint64_t max_modulus_exp_reached = 0;
  bool budget_exhausted = false;
  bool ceiling_hit = false;
  // Sorted by (modulus_exp, residue), at most max_witnesses entries.
  std::vector<CaseState> witnesses;
  std::uint64_t rounds = 0;
  double elapsed_seconds = 0;
};

SearchOutcome ProveAverageBound(const SearchConfig& config,
                                const SearchOptions& options = {});

class CheckpointError : public std::runtime_error {
 public:
  CheckpointError(const std::string& what, std::size_t valid_records)
      : std::runtime_error(what), valid_records_(valid_records) {}
  // Records decoded before the failure.
  std::size_t valid_records() const { return valid_records_; }

 private:
  std::size_t valid_records_;
};

struct Checkpoint {
  std::uint64_t config_hash = 0;
  std::uint64_t nodes_explored = 0;
  std::uint64_t nodes_closed = 0;
  std::uint64_t open_nodes = 0;
  std::uint64_t max_modulus_exp_reached = 0;
  std::uint64_t rounds = 0;
  std::vector<CaseState> frontier;
  std::vector<CaseState> witnesses;
};

inline constexpr std::uint32_t kCheckpointVersion = 1;

// Writes to path + ".tmp" and renames over path.
void SaveCheckpoint(const std::string& path, const Checkpoint& checkpoint);
// Throws CheckpointError on a bad header, version mismatch, or a corrupt or
// truncated record.
Checkpoint LoadCheckpoint(const std::string& path);

}  // namespace cyclebound

#endif  // CYCLEBOUND_CASE_ENGINE_H_
