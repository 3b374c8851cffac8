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

#include <algorithm>
#include <stdexcept>

#include "cyclebound/case_engine.h"
#include "cyclebound/collatz.h"
#include "wire.h"

namespace cyclebound {

namespace {

// Symbolic bounds must hold for every X0 from here on.
constexpr long kSymbolicX0Min = 766;

bool IsOdd(const BigInt& x) { return mpz_odd_p(x.get_mpz_t()) != 0; }

// 3 - 3 (2/3)^k: T(n) <= coef / n when the odd run has length exactly k.
Rational ExactRunCoef(std::uint64_t k) {
  const BigInt three_k = PowerOfThree(k);
  const BigInt two_k = BigInt(1) << k;
  return Rational(BigInt(3 * three_k - 3 * two_k), three_k);
}

// Rewrites every form for a = 2a' + b.
void Substitute(AffineForm& f, int b) {
  if (b) f.constant += f.a_coef;
  f.a_coef *= 2;
}

struct Walk {
  CaseState state;
  AffineForm minimum;  // the minimum whose odd run is being walked
  AffineForm value;    // current trajectory value

  Walk Split(int b) const {
    Walk w = *this;
    for (ProcessedMinimum& m : w.state.minima) Substitute(m.form, b);
    for (LowerBoundConstraint& c : w.state.constraints) Substitute(c.form, b);
    Substitute(w.minimum, b);
    Substitute(w.value, b);
    if (b) w.state.residue += BigInt(1) << w.state.modulus_exp;
    ++w.state.modulus_exp;
    return w;
  }
};

// Returns {even part, odd part} of the walk's current value; either may be
// empty when the parity is already fixed.
std::pair<std::optional<Walk>, std::optional<Walk>> SplitOnParity(const Walk& w) {
  if (!IsOdd(w.value.a_coef)) {
    if (IsOdd(w.value.constant)) return {std::nullopt, w};
    return {w, std::nullopt};
  }
  // a_coef odd: the value's parity follows the parity of a.
  Walk zero = w.Split(0), one = w.Split(1);
  if (IsOdd(zero.value.constant)) return {std::move(one), std::move(zero)};
  return {std::move(zero), std::move(one)};
}

void Halve(AffineForm& f) {
  f.a_coef /= 2;
  f.constant /= 2;
}

BigInt FloorFor(const std::vector<LowerBoundConstraint>& constraints,
                const BigInt& x0) {
  BigInt floor = 0;
  for (const LowerBoundConstraint& c : constraints) {
    const BigInt need = c.x0_multiple * x0 + c.offset - c.form.constant;
    floor = std::max(floor, Rational(need, c.form.a_coef).Ceil());
  }
  return floor;
}

void UpdateFloor(CaseState& s, const SearchConfig& config) {
  s.a_floor = config.concrete_x0 ? AdmissibleFloor(s, *config.concrete_x0) : BigInt(0);
}

// The run ended after k odd steps; w.value is C^k(n_j), even.
void FinishRun(const Walk& w, std::uint64_t k, const SearchConfig& config,
               std::vector<CaseState>& out) {
  Walk half = w;
  Halve(half.value);
  auto [even, odd] = SplitOnParity(half);
  if (odd) {
    CaseState s = std::move(odd->state);
    s.minima.push_back({odd->minimum, k, false, ExactRunCoef(k)});
    s.k_total += k;
    s.pending = odd->value;
    s.constraints.push_back({odd->value, 1, 1});
    s.kind = NodeKind::kOpen;
    UpdateFloor(s, config);
    out.push_back(std::move(s));
  }
  if (even) {
    CaseState s = std::move(even->state);
    s.minima.push_back({even->minimum, k, false, ExactRunCoef(k)});
    s.k_total += k;
    // (n_j - 1)/2 joins the cycle, so it exceeds X0.
    s.constraints.push_back({even->minimum, 2, 1});
    s.kind = NodeKind::kMerger;
    UpdateFloor(s, config);
    out.push_back(std::move(s));
  }
}

// One summand of a window: coef / n where n = form(a).
struct Term {
  AffineForm form;
  Rational coef;
  bool strict;  // T(n) < coef/n rather than <=
};

struct Line {
  Rational slope, intercept;
};

// Lower bounds n >= p*X0 + q implied for `form` by each constraint and by a >= 0.
std::vector<Line> ImpliedLines(const AffineForm& form,
                               const std::vector<LowerBoundConstraint>& constraints) {
  std::vector<Line> lines;
  lines.push_back({Rational(0), Rational(form.constant)});
  for (const LowerBoundConstraint& c : constraints) {
    const Rational ratio(form.a_coef, c.form.a_coef);
    lines.push_back({ratio * Rational(c.x0_multiple),
                     ratio * Rational(BigInt(c.offset - c.form.constant)) +
                         Rational(form.constant)});
  }
  return lines;
}

Rational EnvelopeAt(const std::vector<Line>& lines, const Rational& x) {
  Rational best = lines.front().slope * x + lines.front().intercept;
  for (const Line& l : lines) best = std::max(best, l.slope * x + l.intercept);
  return best;
}

struct Sup {
  bool finite = false;
  Rational value;
  bool attained = true;
};

// sup over X >= 766 of X / max_i(p_i X + q_i). Each piece of the envelope
// is a single line, on which the ratio is monotone, so the supremum sits at
// 766, at a crossing, or at infinity.
Sup SupOfRatio(const std::vector<Line>& lines) {
  const Rational x_min(kSymbolicX0Min);
  std::vector<Rational> points{x_min};
  for (std::size_t i = 0; i < lines.size(); ++i) {
    for (std::size_t j = i + 1; j < lines.size(); ++j) {
      if (lines[i].slope == lines[j].slope) continue;
      const Rational x = (lines[j].intercept - lines[i].intercept) /
                         (lines[i].slope - lines[j].slope);
      if (x > x_min) points.push_back(x);
    }
  }
  Sup out;
  bool have = false;
  for (const Rational& x : points) {
    const Rational env = EnvelopeAt(lines, x);
    if (env.sign() <= 0) return {};  // no positive lower bound on n
    const Rational f = x / env;
    if (!have || f > out.value) out.value = f;
    have = true;
  }
  const Line* top = &lines.front();
  for (const Line& l : lines) {
    if (l.slope > top->slope || (l.slope == top->slope && l.intercept > top->intercept)) {
      top = &l;
    }
  }
  if (top->slope.sign() <= 0) return {};
  const Rational limit = top->slope.Reciprocal();
  out.finite = true;
  out.attained = true;
  if (limit > out.value) {
    out.value = limit;
    out.attained = top->intercept.sign() <= 0;
  }
  return out;
}

// Decides sum_{terms} T <(=) target * weight / X0.
bool WindowCloses(const std::vector<Term>& terms, const Rational& weight,
                  const std::vector<LowerBoundConstraint>& constraints,
                  const SearchConfig& config) {
  bool strict = false;
  Rational total;
  Rational budget = config.target_coef * weight;
  if (config.concrete_x0) {
    const BigInt a = FloorFor(constraints, *config.concrete_x0);
    for (const Term& t : terms) {
      total += t.coef / Rational(t.form.Evaluate(a));
      strict = strict || t.strict;
    }
    budget = budget / Rational(*config.concrete_x0);
  } else {
    for (const Term& t : terms) {
      const Sup s = SupOfRatio(ImpliedLines(t.form, constraints));
      if (!s.finite) return false;
      total += t.coef * s.value;
      strict = strict || t.strict || !s.attained;
    }
  }
  return total < budget || (total == budget && strict);
}

Term MinimumTerm(const ProcessedMinimum& m) {
  // Equality T(n) = 1/n holds for a single odd step.
  return {m.form, m.coef, m.run_is_lower_bound || m.k >= 2};
}

// Smallest w in [1, upto] whose prefix window closes, or 0.
std::size_t FirstClosingPrefix(const CaseState& s, std::size_t upto,
                               const std::vector<LowerBoundConstraint>& constraints,
                               const SearchConfig& config) {
  std::vector<Term> terms;
  Rational weight;
  for (std::size_t w = 1; w <= upto; ++w) {
    const ProcessedMinimum& m = s.minima[w - 1];
    terms.push_back(MinimumTerm(m));
    weight += config.mode == SearchMode::kWeighted ? Rational(BigInt(static_cast<unsigned long>(m.k)))
                                                   : Rational(1);
    if (WindowCloses(terms, weight, constraints, config)) return w;
  }
  return 0;
}

}  // namespace

AffineForm CaseState::RootForm() const {
  return {BigInt(1) << modulus_exp, residue};
}

std::string ToString(SearchMode mode) {
  return mode == SearchMode::kWeighted ? "weighted" : "unweighted";
}

void SearchConfig::Validate() const {
  if (target_coef.sign() <= 0) throw std::invalid_argument("target must be positive");
  if (max_depth < 1) throw std::invalid_argument("max_depth must be at least 1");
  if (k_cap < 1) throw std::invalid_argument("k_cap must be at least 1");
  if (concrete_x0 && *concrete_x0 < kSymbolicX0Min) {
    throw std::invalid_argument("concrete X0 must be at least 766");
  }
}

std::uint64_t SearchConfig::Hash() const {
  wire::Writer w;
  w.Byte(static_cast<std::uint8_t>(mode));
  w.Int(target_coef.num());
  w.Int(target_coef.den());
  w.Byte(concrete_x0 ? 1 : 0);
  if (concrete_x0) w.Int(*concrete_x0);
  w.Varint(static_cast<std::uint64_t>(max_depth));
  w.Varint(static_cast<std::uint64_t>(k_cap));
  return wire::Fnv1a(w.bytes());
}

CaseState RootState(const SearchConfig& config) {
  config.Validate();
  CaseState s;
  s.modulus_exp = 1;
  s.residue = 1;
  s.pending = AffineForm{2, 1};
  s.constraints.push_back({AffineForm{2, 1}, 1, 1});
  s.kind = NodeKind::kOpen;
  UpdateFloor(s, config);
  return s;
}

BigInt AdmissibleFloor(const CaseState& state, const BigInt& x0) {
  return FloorFor(state.constraints, x0);
}

std::vector<CaseState> Branch(const CaseState& state, const SearchConfig& config) {
  if (state.kind != NodeKind::kOpen || !state.pending) {
    throw std::invalid_argument("only open nodes can be branched");
  }
  std::vector<CaseState> out;
  Walk cur{state, *state.pending, *state.pending};
  cur.state.pending.reset();
  const auto k_cap = static_cast<std::uint64_t>(config.k_cap);
  for (std::uint64_t t = 1; t <= k_cap; ++t) {
    // value is odd with an even a-coefficient: (3v + 1)/2 stays integral.
    cur.value.a_coef = 3 * cur.value.a_coef / 2;
    cur.value.constant = (3 * cur.value.constant + 1) / 2;
    auto [even, odd] = SplitOnParity(cur);
    if (even) FinishRun(*even, t, config, out);
    if (!odd) return out;
    cur = std::move(*odd);
  }
  CaseState s = std::move(cur.state);
  s.minima.push_back({cur.minimum, k_cap + 1, true, Rational(3)});
  s.k_total += k_cap + 1;
  s.kind = NodeKind::kLongRun;
  UpdateFloor(s, config);
  out.push_back(std::move(s));
  return out;
}

TriState TryClose(const CaseState& state, const SearchConfig& config) {
  return TryCloseWithDetail(state, config, nullptr);
}

TriState TryCloseWithDetail(const CaseState& state, const SearchConfig& config,
                            Closure* closure) {
  const std::size_t d = state.minima.size();
  const auto depth = static_cast<std::size_t>(config.max_depth);
  const bool weighted = config.mode == SearchMode::kWeighted;
  Closure local;
  Closure& c = closure ? *closure : local;
  c = Closure{};

  if (std::size_t w = FirstClosingPrefix(state, std::min(d, depth), state.constraints, config)) {
    c.window = w;
    return TriState::kTrue;
  }
  if (state.kind == NodeKind::kOpen) {
    if (d + 1 <= depth) {
      std::vector<Term> terms;
      Rational weight;
      for (const ProcessedMinimum& m : state.minima) {
        terms.push_back(MinimumTerm(m));
        weight += weighted ? Rational(BigInt(static_cast<unsigned long>(m.k))) : Rational(1);
      }
      terms.push_back({*state.pending, Rational(3), true});
      weight += 1;
      if (WindowCloses(terms, weight, state.constraints, config)) {
        c.window = d + 1;
        return TriState::kTrue;
      }
    }
    return d < depth ? TriState::kUnknown : TriState::kFalse;
  }
  if (state.kind == NodeKind::kLongRun && d <= depth) {
    // l = 1: the next minimum exceeds (3/2)^k n_d / 2, so with
    // x = (2/3)^(k_cap+1), T(n_d) + T(n_(d+1)) < (3 + 3x) / n_d.
    std::size_t ell_one = 0;
    if (d + 1 <= depth) {
      std::vector<Term> terms;
      Rational weight;
      for (std::size_t j = 0; j + 1 < d; ++j) {
        terms.push_back(MinimumTerm(state.minima[j]));
        weight += weighted ? Rational(BigInt(static_cast<unsigned long>(state.minima[j].k)))
                           : Rational(1);
      }
      const ProcessedMinimum& last = state.minima.back();
      const BigInt two_k = BigInt(1) << last.k;
      const Rational x(two_k, PowerOfThree(last.k));
      terms.push_back({last.form, Rational(3) + Rational(3) * x, true});
      weight += weighted ? Rational(BigInt(static_cast<unsigned long>(last.k + 1))) : Rational(2);
      if (WindowCloses(terms, weight, state.constraints, config)) ell_one = d + 1;
    }
    if (ell_one) {
      std::vector<LowerBoundConstraint> merged = state.constraints;
      merged.push_back({state.minima.back().form, 2, 1});
      if (std::size_t w = FirstClosingPrefix(state, d, merged, config)) {
        c.split_on_ell = true;
        c.window = ell_one;
        c.window_ell_one = ell_one;
        c.window_merger = w;
        return TriState::kTrue;
      }
    }
  }
  return TriState::kFalse;
}

}  // namespace cyclebound
