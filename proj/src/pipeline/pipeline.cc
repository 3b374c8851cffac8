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

#include "cyclebound/pipeline.h"

#include <algorithm>
#include <atomic>
#include <exception>
#include <mutex>
#include <stdexcept>
#include <thread>

#include "cyclebound/contfrac.h"

namespace cyclebound {

namespace {

// 2^v - 1 only appears in terms decreasing in v, so evaluating them at
// min(v, kVCap) keeps the bound valid while avoiding astronomically large
// powers.
constexpr long kVCap = 256;

RealInterval P(const Rational& q, int bits) { return RealInterval::Point(q, bits); }

RealInterval ModeConstantEpsilon(std::uint64_t m, const BigInt& k,
                                 TConstantMode mode, const BigInt& x0, int bits) {
  const RealInterval log2 = Log2Interval(bits);
  const Rational mq(BigInt(static_cast<unsigned long>(m)));
  if (mode == TConstantMode::kWeighted34) {
    // (1/(3 log 2)) * (3/4) * (1/X0) = 1/(4 log 2 X0); no dependence on K.
    return P(1, bits) / (P(Rational(BigInt(BigInt(4) * x0)), bits) * log2);
  }
  const Rational bracket =
      mode == TConstantMode::kAnalytic
          ? Rational(BigInt(97)) * mq / (Rational(BigInt(54)) * Rational(x0))
          : mq / Rational(ComputerConstantX0());
  return P(bracket, bits) / (P(Rational(BigInt(BigInt(3) * k)), bits) * log2);
}

struct Candidate {
  RealInterval epsilon;
  std::uint64_t m2;
  std::optional<RealInterval> v;
  std::string source;
};

}  // namespace

std::string_view ToString(TConstantMode mode) {
  switch (mode) {
    case TConstantMode::kAnalytic:
      return "analytic_97_54";
    case TConstantMode::kComputer1:
      return "computer_1";
    case TConstantMode::kWeighted34:
      return "weighted_3_4";
  }
  return "analytic_97_54";
}

TConstantMode ParseTConstantMode(std::string_view text) {
  if (text == "analytic" || text == "analytic_97_54") return TConstantMode::kAnalytic;
  if (text == "computer1" || text == "computer_1") return TConstantMode::kComputer1;
  if (text == "weighted" || text == "weighted_3_4") return TConstantMode::kWeighted34;
  throw std::invalid_argument("unknown mode: " + std::string(text));
}

std::string_view ToString(StepVerdict v) {
  switch (v) {
    case StepVerdict::kImproved:
      return "IMPROVED";
    case StepVerdict::kFixedPoint:
      return "FIXED_POINT";
    case StepVerdict::kContradiction:
      return "CONTRADICTION";
  }
  return "IMPROVED";
}

BigInt ComputerConstantX0() { return BigInt(704) << 60; }

void GlobalConfig::Validate() const {
  if (x0 < 766) throw std::invalid_argument("x0 must be at least 766");
  if (mode == TConstantMode::kComputer1 && x0 < ComputerConstantX0()) {
    throw std::invalid_argument("computer_1 mode requires x0 >= 704*2^60");
  }
  if (precision.start_bits < 16 || precision.max_bits < precision.start_bits) {
    throw std::invalid_argument("invalid precision policy");
  }
}

std::uint64_t ChooseM2(std::uint64_t m, const BigInt& k, const BigInt& x0,
                       int bits) {
  if (m == 0) throw std::invalid_argument("m must be positive");
  if (k < 1) throw std::invalid_argument("K must be positive");
  const RealInterval delta = DeltaInterval(bits);
  const RealInterval log_factor =
      Log(P(Rational(BigInt(162) * x0, BigInt(97)), bits)) / Log2Interval(bits);
  const RealInterval delta_minus_one = delta - P(1, bits);
  RealInterval power = delta;  // delta^m2
  std::uint64_t best = 0;
  for (std::uint64_t m2 = 1; m2 <= m; ++m2) {
    const RealInterval lhs = (power - P(1, bits)) / delta_minus_one * log_factor;
    const Rational rhs(BigInt(BigInt(static_cast<unsigned long>(m2)) * k),
                       BigInt(static_cast<unsigned long>(m)));
    if (lhs.hi() <= rhs) {
      best = m2;
    } else if (lhs.lo() > rhs) {
      break;
    } else {
      throw InsufficientPrecision("window feasibility");
    }
    power = power * delta;
  }
  return best;
}

RealInterval WindowExponent(std::uint64_t m, const BigInt& k, std::uint64_t m2,
                            int bits) {
  if (m2 == 0 || m2 > m) throw std::invalid_argument("m2 must lie in [1, m]");
  const RealInterval delta = DeltaInterval(bits);
  const RealInterval dm = PowInt(delta, m2);
  const Rational share(BigInt(BigInt(static_cast<unsigned long>(m2)) * k),
                       BigInt(static_cast<unsigned long>(m)));
  return P(share, bits) * (delta - P(1, bits)) / (dm - P(1, bits));
}

RealInterval EpsilonBound(std::uint64_t m, const BigInt& k, std::uint64_t m2,
                          const GlobalConfig& config, int bits) {
  if (m2 == 0) return ModeConstantEpsilon(m, k, config.mode, config.x0, bits);
  const RealInterval delta = DeltaInterval(bits);
  const RealInterval log2 = Log2Interval(bits);
  RealInterval v = WindowExponent(m, k, m2, bits);
  const Rational cap{BigInt(kVCap)};
  v = RealInterval(std::min(v.lo(), cap), std::min(v.hi(), cap), bits);
  const RealInterval w = Exp(v * log2) - P(1, bits);  // 2^v - 1
  if (w.lo().sign() <= 0) throw InsufficientPrecision("2^v - 1 near zero");
  const RealInterval w_delta = IntervalPow(w, delta);
  const RealInterval x0 = P(Rational(config.x0), bits);
  auto three_times = [&](std::uint64_t c) {
    return P(Rational(BigInt(BigInt(3) * BigInt(static_cast<unsigned long>(c)))), bits);
  };
  RealInterval bracket = P(3, bits) / w;
  if (m2 == m) {
    bracket = bracket + three_times(m - 1) / w_delta;
  } else if (m2 == m - 1) {
    bracket = P(3, bits) / x0 + bracket + three_times(m - 2) / w_delta;
  } else {
    const Rational head{BigInt(BigInt(97) * BigInt(static_cast<unsigned long>(m - m2)) + 73)};
    bracket = P(head, bits) / (P(54, bits) * x0) + bracket + three_times(m2 - 1) / w_delta;
  }
  return bracket / (P(Rational(BigInt(BigInt(3) * k)), bits) * log2);
}

RealInterval SwUpperBound(std::uint64_t m, int bits) {
  if (m == 0 || m > (std::uint64_t{1} << 20)) {
    throw std::out_of_range("SwUpperBound supports 1 <= m <= 2^20");
  }
  const Rational c(BigInt(BigInt(14784) * BigInt(static_cast<unsigned long>(m))),
                   BigInt(10000));
  return P(c, bits) * PowInt(DeltaInterval(bits), m);
}

TriState ExceedsSwUpperBound(const BigInt& k, std::uint64_t m, int bits) {
  if (k < 1 || m == 0) throw std::invalid_argument("K and m must be positive");
  const Rational c(BigInt(BigInt(14784) * BigInt(static_cast<unsigned long>(m))),
                   BigInt(10000));
  const RealInterval log_bound =
      Log(P(c, bits)) +
      P(Rational(BigInt(static_cast<unsigned long>(m))), bits) * Log(DeltaInterval(bits));
  return CmpConservative(log_bound, Log(P(Rational(k), bits)));
}

BoundReport BoundStep(std::uint64_t m, const BigInt& k, const GlobalConfig& config,
                      const IterateOptions& options) {
  config.Validate();
  return WithPrecisionRetry(config.precision, [&](int bits) {
    BoundReport r;
    r.m = m;
    r.k_in = k;
    r.mode = config.mode;
    r.precision_bits = bits;
    r.m2 = ChooseM2(m, k, config.x0, bits);

    std::vector<Candidate> candidates;
    const std::uint64_t first = options.scan_all_m2 ? 1 : std::max<std::uint64_t>(r.m2, 1);
    for (std::uint64_t m2 = first; m2 <= r.m2; ++m2) {
      candidates.push_back({EpsilonBound(m, k, m2, config, bits), m2,
                            WindowExponent(m, k, m2, bits), "window"});
    }
    candidates.push_back({ModeConstantEpsilon(m, k, TConstantMode::kAnalytic,
                                              config.x0, bits),
                          0, std::nullopt, "analytic"});
    if (config.mode == TConstantMode::kComputer1) {
      candidates.push_back({ModeConstantEpsilon(m, k, config.mode, config.x0, bits),
                            0, std::nullopt, "computer"});
    } else if (config.mode == TConstantMode::kWeighted34) {
      candidates.push_back({ModeConstantEpsilon(m, k, config.mode, config.x0, bits),
                            0, std::nullopt, "weighted"});
    }
    const Candidate* best = &candidates.front();
    for (const Candidate& c : candidates) {
      if (c.epsilon.hi() < best->epsilon.hi()) best = &c;
    }
    r.epsilon = best->epsilon;
    r.m2_used = best->m2;
    r.v = best->v;
    r.epsilon_source = best->source;

    const RealInterval delta = DeltaInterval(bits);
    const FractionInInterval f = SmallestDenominatorInOpenInterval(
        delta, delta + P(r.epsilon.hi(), bits));
    r.denominator = f.denominator;
    r.k_out = std::max(k, f.denominator);
    switch (ExceedsSwUpperBound(r.k_out, m, bits)) {
      case TriState::kTrue:
        r.verdict = StepVerdict::kContradiction;
        break;
      case TriState::kFalse:
        r.verdict = f.denominator > k ? StepVerdict::kImproved : StepVerdict::kFixedPoint;
        break;
      case TriState::kUnknown:
        throw InsufficientPrecision("comparison with the upper bound on K");
    }
    return r;
  });
}

std::vector<BoundReport> IterateBounds(std::uint64_t m, const BigInt& k_start,
                                       const GlobalConfig& config,
                                       const IterateOptions& options) {
  if (options.max_rounds < 1) throw std::invalid_argument("max_rounds must be >= 1");
  std::vector<BoundReport> chain;
  BigInt k = k_start;
  for (int round = 0; round < options.max_rounds; ++round) {
    chain.push_back(BoundStep(m, k, config, options));
    const BoundReport& r = chain.back();
    if (r.verdict != StepVerdict::kImproved) break;
    k = r.k_out;
  }
  return chain;
}

BigInt DefaultKStart(std::uint64_t m) {
  return m <= 91 ? BigInt("700000000000") : BigInt("72000000000");
}

std::vector<TableRow> GenerateTable(const std::vector<std::uint64_t>& m_values,
                                    const GlobalConfig& config,
                                    const IterateOptions& options,
                                    unsigned workers) {
  config.Validate();
  if (config.mode == TConstantMode::kComputer1 && !config.computer_constant_certified) {
    throw std::invalid_argument(
        "computer_1 rows need a certified per-minimum constant or explicit trust");
  }
  std::vector<TableRow> rows(m_values.size());
  std::atomic<std::size_t> next{0};
  std::mutex mu;
  std::exception_ptr failure;
  auto work = [&] {
    while (true) {
      const std::size_t i = next.fetch_add(1);
      if (i >= m_values.size()) return;
      try {
        TableRow row;
        row.m = m_values[i];
        row.k_start = DefaultKStart(row.m);
        row.chain = IterateBounds(row.m, row.k_start, config, options);
        row.k_bound = row.chain.back().k_out;
        row.verdict = row.chain.back().verdict;
        rows[i] = std::move(row);
      } catch (...) {
        std::lock_guard<std::mutex> lock(mu);
        if (!failure) failure = std::current_exception();
      }
    }
  };
  std::vector<std::thread> pool;
  for (unsigned t = 1; t < std::max(1u, workers); ++t) pool.emplace_back(work);
  work();
  for (auto& t : pool) t.join();
  if (failure) std::rethrow_exception(failure);
  return rows;
}

std::string_view ToString(ThresholdMode mode) {
  return mode == ThresholdMode::kSharp ? "theorem20" : "legacy";
}

ThresholdMode ParseThresholdMode(std::string_view text) {
  if (text == "theorem20") return ThresholdMode::kSharp;
  if (text == "legacy") return ThresholdMode::kLegacy;
  throw std::invalid_argument("unknown threshold mode: " + std::string(text));
}

ThresholdResult X0Threshold(const BigInt& k_target, ThresholdMode mode,
                            const PrecisionPolicy& policy) {
  if (k_target < 2) throw std::invalid_argument("K target must be at least 2");
  return WithPrecisionRetry(policy, [&](int bits) {
    ThresholdResult r;
    r.precision_bits = bits;
    const RealInterval delta = DeltaInterval(bits);
    r.obstruction = SmallestFractionAbove(delta, k_target);
    r.epsilon_star = P(r.obstruction, bits) - delta;
    const long c = mode == ThresholdMode::kSharp ? 4 : 3;
    const RealInterval x0 =
        P(1, bits) / (P(c, bits) * Log2Interval(bits) * r.epsilon_star);
    r.x0_required = x0.lo().Ceil();
    if (x0.hi().Ceil() != r.x0_required) {
      throw InsufficientPrecision("ceiling of the X0 threshold");
    }
    r.x0_required_units = Rational(r.x0_required, BigInt(1) << 60).Ceil();
    return r;
  });
}

}  // namespace cyclebound
