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

// Checks closed case-engine nodes against concrete trajectories: members
// of each class are simulated step by step and the claimed window
// inequality is verified with exact rationals.

#ifndef CYCLEBOUND_TESTS_CASE_AUDIT_H_
#define CYCLEBOUND_TESTS_CASE_AUDIT_H_

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "cyclebound/case_engine.h"
#include "cyclebound/collatz.h"

namespace cyclebound::audit {

struct Minimum {
  BigInt n;
  std::uint64_t k = 0;
  std::uint64_t ell = 0;
  Rational t;
};

// Minima computed with plain single steps, independent of the library's
// accelerated routines.
inline std::vector<Minimum> Minima(BigInt n, std::size_t count) {
  std::vector<Minimum> out;
  while (out.size() < count) {
    Minimum m;
    m.n = n;
    BigInt v = n;
    while (v % 2 != 0) {
      m.t += Rational(BigInt(1), v);
      v = (3 * v + 1) / 2;
      ++m.k;
    }
    while (v % 2 == 0) {
      v /= 2;
      ++m.ell;
    }
    out.push_back(m);
    n = v;
  }
  return out;
}

struct AuditReport {
  std::uint64_t closed_nodes = 0;
  std::uint64_t samples = 0;
  std::uint64_t violations = 0;
  std::vector<std::string> messages;
};

// Checks one member n_1 = RootForm(a) of a closed node against the claimed
// closure at X0 = x0. Members outside the node's l-subcase constraints are
// skipped. Returns false on a violation.
inline bool CheckMember(const CaseState& s, const Closure& closure, const SearchConfig& config,
                        const BigInt& a, const BigInt& x0, AuditReport& report) {
  const std::size_t d = s.minima.size();
  const std::size_t need = std::max<std::size_t>(closure.window, d) + 1;
  const std::vector<Minimum> mins = Minima(s.RootForm().Evaluate(a), need);
  auto fail = [&](const std::string& why) {
    ++report.violations;
    if (report.messages.size() < 20) {
      report.messages.push_back(why + " at e=" + std::to_string(s.modulus_exp) +
                                " r=" + s.residue.get_str() + " a=" + a.get_str());
    }
    return false;
  };
  // Branch decisions along the path.
  for (std::size_t j = 0; j < d; ++j) {
    const ProcessedMinimum& p = s.minima[j];
    if (p.form.Evaluate(a) != mins[j].n) return fail("affine form mismatch");
    if (p.run_is_lower_bound ? mins[j].k < p.k : mins[j].k != p.k) return fail("odd run mismatch");
    const bool last = j + 1 == d;
    if (!last || s.kind == NodeKind::kOpen) {
      if (mins[j].ell != 1) return fail("halving count mismatch");
    } else if (s.kind == NodeKind::kMerger && mins[j].ell < 2) {
      return fail("merger case without two halvings");
    }
  }
  if (s.kind == NodeKind::kOpen && s.pending->Evaluate(a) != mins[d].n) {
    return fail("pending form mismatch");
  }
  for (const LowerBoundConstraint& c : s.constraints) {
    if (c.form.Evaluate(a) < c.x0_multiple * x0 + c.offset) return true;  // not admissible
  }
  std::size_t window = closure.window;
  if (closure.split_on_ell) {
    const Minimum& last = mins[d - 1];
    if (last.ell >= 2) {
      if (last.n < 2 * x0 + 1) return true;  // outside the l >= 2 subcase
      window = closure.window_merger;
    } else {
      window = closure.window_ell_one;
    }
  }
  ++report.samples;
  Rational sum, weight;
  for (std::size_t j = 0; j < window; ++j) {
    sum += mins[j].t;
    if (config.mode == SearchMode::kUnweighted) {
      weight += 1;
    } else {
      weight += j < d ? Rational(BigInt(static_cast<unsigned long>(s.minima[j].k))) : Rational(1);
    }
  }
  if (!(sum < config.target_coef * weight / Rational(x0))) return fail("window bound violated");
  return true;
}

// Walks the whole search tree and samples `per_node` members of every
// closed node. Symbolic configs are checked at several X0 >= 766.
inline AuditReport AuditClosedNodes(const SearchConfig& config, int per_node,
                                    std::uint64_t node_limit = 1'000'000) {
  AuditReport report;
  std::mt19937_64 rng(20260);
  std::vector<BigInt> x0s;
  if (config.concrete_x0) {
    x0s = {*config.concrete_x0};
  } else {
    x0s = {BigInt(766), BigInt(767), BigInt(1000), BigInt(1000000), BigInt("1000000000000")};
  }
  std::vector<CaseState> stack{RootState(config)};
  std::uint64_t visited = 0;
  while (!stack.empty() && visited++ < node_limit) {
    CaseState s = std::move(stack.back());
    stack.pop_back();
    Closure closure;
    const TriState verdict = TryCloseWithDetail(s, config, &closure);
    if (verdict == TriState::kUnknown) {
      for (CaseState& c : Branch(s, config)) stack.push_back(std::move(c));
      continue;
    }
    if (verdict != TriState::kTrue) continue;
    ++report.closed_nodes;
    for (int i = 0; i < per_node; ++i) {
      const BigInt& x0 = x0s[static_cast<std::size_t>(i) % x0s.size()];
      BigInt a = AdmissibleFloor(s, x0);
      if (i >= static_cast<int>(x0s.size())) a += static_cast<unsigned long>(rng() % 5000);
      CheckMember(s, closure, config, a, x0, report);
    }
  }
  return report;
}

}  // namespace cyclebound::audit

#endif  // CYCLEBOUND_TESTS_CASE_AUDIT_H_
