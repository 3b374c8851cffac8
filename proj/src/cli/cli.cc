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

// Every subcommand builds one ordered JSON document (header, parameters,
// results, timing); the csv and text formats are rendered from it. All
// numbers in the document are strings holding exact integers or fractions.

#include "cyclebound/cli.h"

#include <chrono>
#include <cstdio>
#include <iomanip>
#include <iostream>
#include <limits>
#include <sstream>
#include <thread>

#include "CLI11.hpp"
#include "cyclebound/case_engine.h"
#include "cyclebound/collatz.h"
#include "cyclebound/pipeline.h"
#include "json.hpp"

#ifndef CYCLEBOUND_VERSION
#define CYCLEBOUND_VERSION "0.1.0"
#endif

namespace cyclebound::cli {

namespace {

using Json = nlohmann::ordered_json;
using Clock = std::chrono::steady_clock;

struct Common {
  std::string format = "text";
  int precision_bits = 0;  // 0: environment or built-in default
  unsigned workers = 0;    // 0: available cores
};

unsigned ResolveWorkers(unsigned requested) {
  if (requested > 0) return requested;
  return std::max(1u, std::thread::hardware_concurrency());
}

PrecisionPolicy ResolvePrecision(int requested) {
  PrecisionPolicy p;
  p.start_bits = requested > 0 ? requested : DefaultPrecisionFromEnvironment();
  if (p.start_bits < 16) throw std::invalid_argument("--precision must be at least 16");
  p.max_bits = std::max(p.max_bits, p.start_bits);
  return p;
}

std::uint64_t ToU64(const BigInt& v, const std::string& name) {
  if (v < 0 || !v.fits_ulong_p()) {
    throw std::invalid_argument(name + " must be a nonnegative integer below 2^64");
  }
  return v.get_ui();
}

std::string Str(std::uint64_t v) { return std::to_string(v); }
std::string Str(const BigInt& v) { return v.get_str(); }

Json IntervalJson(const RealInterval& x) {
  return Json{{"lo", x.lo().ToString()}, {"hi", x.hi().ToString()}};
}

std::string Seconds(double s) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3f", s);
  return buf;
}

std::string HashHex(const std::string& text) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : text) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  std::ostringstream os;
  os << std::hex << std::setw(16) << std::setfill('0') << h;
  return os.str();
}

// The config hash covers the command and its parameters; workers, format
// and file paths are excluded because they do not change results.
Json Document(const std::string& command, const std::string& precision, const std::string& mode,
              Json parameters) {
  Json doc;
  doc["header"] = Json{{"tool", "cyclebound"},
                       {"version", CYCLEBOUND_VERSION},
                       {"command", command},
                       {"config_hash", HashHex(command + "\n" + precision + "\n" + parameters.dump())},
                       {"precision_bits", precision},
                       {"mode", mode}};
  doc["parameters"] = std::move(parameters);
  return doc;
}

std::string FormString(const AffineForm& f) {
  std::string s = f.a_coef.get_str() + "*a";
  if (f.constant >= 0) s += "+";
  return s + f.constant.get_str();
}

std::string KindString(NodeKind k) {
  switch (k) {
    case NodeKind::kOpen:
      return "open";
    case NodeKind::kMerger:
      return "merger";
    case NodeKind::kLongRun:
      return "long_run";
  }
  return "?";
}

SearchMode ParseSearchMode(const std::string& text) {
  if (text == "unweighted") return SearchMode::kUnweighted;
  if (text == "weighted") return SearchMode::kWeighted;
  throw std::invalid_argument("unknown search mode '" + text + "' (unweighted|weighted)");
}

std::string Sci(const std::string& exact) { return Rational::Parse(exact).ToScientific(6); }

// ---- rendering ------------------------------------------------------------

void CsvPreamble(const Json& doc, std::ostream& out) {
  for (const auto& [key, value] : doc["header"].items()) {
    out << "# " << key << "=" << value.get<std::string>() << "\n";
  }
}

void TextHeader(const Json& doc, std::ostream& out) {
  const Json& h = doc["header"];
  out << "cyclebound " << h["command"].get<std::string>() << "  mode=" << h["mode"].get<std::string>()
      << "  precision_bits=" << h["precision_bits"].get<std::string>()
      << "  config_hash=" << h["config_hash"].get<std::string>() << "\n";
  out << "parameters:";
  for (const auto& [key, value] : doc["parameters"].items()) {
    out << " " << key << "=" << (value.is_string() ? value.get<std::string>() : value.dump());
  }
  out << "\n";
}

void Emit(const Json& doc, const std::string& format,
          void (*csv)(const Json&, std::ostream&), void (*text)(const Json&, std::ostream&),
          std::ostream& out) {
  if (format == "json") {
    out << doc.dump(2) << "\n";
  } else if (format == "csv") {
    CsvPreamble(doc, out);
    csv(doc, out);
  } else {
    TextHeader(doc, out);
    text(doc, out);
    if (doc.contains("timing")) {
      out << "elapsed_seconds: " << doc["timing"]["elapsed_seconds"].get<std::string>() << "\n";
    }
  }
}

// ---- bounds ---------------------------------------------------------------

Json ChainJson(const std::vector<BoundReport>& chain) {
  Json steps = Json::array();
  for (std::size_t i = 0; i < chain.size(); ++i) {
    const BoundReport& r = chain[i];
    Json s;
    s["step"] = Str(i + 1);
    s["k_in"] = Str(r.k_in);
    s["m2"] = Str(r.m2);
    s["m2_used"] = Str(r.m2_used);
    s["v"] = r.v ? IntervalJson(*r.v) : Json(nullptr);
    s["epsilon"] = IntervalJson(r.epsilon);
    s["epsilon_source"] = r.epsilon_source;
    s["denominator"] = Str(r.denominator);
    s["k_out"] = Str(r.k_out);
    s["verdict"] = std::string(ToString(r.verdict));
    s["precision_bits"] = Str(static_cast<std::uint64_t>(r.precision_bits));
    steps.push_back(std::move(s));
  }
  return steps;
}

void BoundsCsv(const Json& doc, std::ostream& out) {
  out << "step,k_in,m2,m2_used,epsilon_hi,epsilon_source,k_out,verdict\n";
  for (const Json& s : doc["chain"]) {
    out << s["step"].get<std::string>() << "," << s["k_in"].get<std::string>() << ","
        << s["m2"].get<std::string>() << "," << s["m2_used"].get<std::string>() << ","
        << Sci(s["epsilon"]["hi"]) << "," << s["epsilon_source"].get<std::string>() << ","
        << s["k_out"].get<std::string>() << "," << s["verdict"].get<std::string>() << "\n";
  }
}

void BoundsText(const Json& doc, std::ostream& out) {
  out << "step  m2     epsilon<=      source    K>=\n";
  for (const Json& s : doc["chain"]) {
    out << std::left << std::setw(6) << s["step"].get<std::string>() << std::setw(7)
        << s["m2_used"].get<std::string>() << std::setw(15) << Sci(s["epsilon"]["hi"])
        << std::setw(10) << s["epsilon_source"].get<std::string>()
        << s["k_out"].get<std::string>() << "\n";
  }
  out << std::right;
  out << "verdict: " << doc["verdict"].get<std::string>() << "\n";
  out << "K >= " << doc["k_bound"].get<std::string>() << "\n";
}

struct BoundsArgs {
  std::uint64_t m = 0;
  std::string k0;
  std::string x0 = "704*2^60";
  std::string mode = "analytic";
  int max_rounds = 50;
  bool scan_all_m2 = false;
  std::string expect;
};

int RunBounds(const BoundsArgs& a, const Common& common, std::ostream& out) {
  const auto start = Clock::now();
  if (a.m == 0) throw std::invalid_argument("--m must be positive");
  GlobalConfig config;
  config.x0 = ParseInteger(a.x0);
  config.mode = ParseTConstantMode(a.mode);
  config.precision = ResolvePrecision(common.precision_bits);
  config.Validate();
  const BigInt k0 = a.k0.empty() ? DefaultKStart(a.m) : ParseInteger(a.k0);
  if (k0 < 1) throw std::invalid_argument("--k0 must be positive");
  IterateOptions options;
  options.max_rounds = a.max_rounds;
  options.scan_all_m2 = a.scan_all_m2;

  const std::string precision = Str(static_cast<std::uint64_t>(config.precision.start_bits));
  Json params{{"m", Str(a.m)},
              {"k0", Str(k0)},
              {"x0", Str(config.x0)},
              {"mode", std::string(ToString(config.mode))},
              {"max_rounds", Str(static_cast<std::uint64_t>(a.max_rounds))},
              {"scan_all_m2", a.scan_all_m2}};
  Json doc = Document("bounds", precision, std::string(ToString(config.mode)), std::move(params));

  const std::vector<BoundReport> chain = IterateBounds(a.m, k0, config, options);
  const BoundReport& last = chain.back();
  doc["chain"] = ChainJson(chain);
  doc["verdict"] = std::string(ToString(last.verdict));
  doc["k_bound"] = Str(last.k_out);
  if (a.m <= (std::uint64_t{1} << 20)) {
    doc["upper_bound"] = IntervalJson(SwUpperBound(a.m, config.precision.start_bits));
  }
  doc["exceeds_upper_bound"] =
      std::string(ToString(ExceedsSwUpperBound(last.k_out, a.m, config.precision.start_bits)));
  doc["timing"] = Json{{"elapsed_seconds",
                        Seconds(std::chrono::duration<double>(Clock::now() - start).count())}};
  Emit(doc, common.format, BoundsCsv, BoundsText, out);

  if (a.expect.empty()) return kExitOk;
  const StepVerdict wanted = [&] {
    if (a.expect == "contradiction") return StepVerdict::kContradiction;
    if (a.expect == "fixed_point") return StepVerdict::kFixedPoint;
    if (a.expect == "improved") return StepVerdict::kImproved;
    throw std::invalid_argument("--expect must be contradiction, fixed_point or improved");
  }();
  return last.verdict == wanted ? kExitOk : kExitUnproven;
}

// ---- table ----------------------------------------------------------------

void TableCsv(const Json& doc, std::ostream& out) {
  out << "m,k_start,k_bound,verdict,steps\n";
  for (const Json& r : doc["rows"]) {
    out << r["m"].get<std::string>() << "," << r["k_start"].get<std::string>() << ","
        << r["k_bound"].get<std::string>() << "," << r["verdict"].get<std::string>() << ","
        << r["steps"].get<std::string>() << "\n";
  }
}

void TableText(const Json& doc, std::ostream& out) {
  out << std::left << std::setw(14) << "m<=" << std::setw(14) << "K>" << std::setw(16)
      << "verdict" << "K (exact)\n";
  for (const Json& r : doc["rows"]) {
    out << std::setw(14) << r["m"].get<std::string>() << std::setw(14)
        << Rational::Parse(r["k_bound"].get<std::string>()).ToScientific(3) << std::setw(16)
        << r["verdict"].get<std::string>() << r["k_bound"].get<std::string>() << "\n";
  }
  out << std::right;
}

struct TableArgs {
  std::vector<std::string> m_values{"98",    "117",    "369",    "4366",   "17096",
                                    "802380", "1.07e6", "1.89e9", "2.18e9", "1.34e10"};
  std::string x0 = "704*2^60";
  std::string mode = "analytic";
  int max_rounds = 50;
  bool trust_computer_constant = false;
};

int RunTable(const TableArgs& a, const Common& common, std::ostream& out) {
  const auto start = Clock::now();
  GlobalConfig config;
  config.x0 = ParseInteger(a.x0);
  config.mode = ParseTConstantMode(a.mode);
  config.precision = ResolvePrecision(common.precision_bits);
  config.computer_constant_certified = a.trust_computer_constant;
  config.Validate();
  if (config.mode == TConstantMode::kComputer1 && !a.trust_computer_constant) {
    throw std::invalid_argument(
        "table in computer1 mode needs --trust-computer-constant: the per-minimum constant 1 "
        "rests on an external case analysis that this run does not certify");
  }
  std::vector<std::uint64_t> ms;
  Json m_list = Json::array();
  for (const std::string& text : a.m_values) {
    ms.push_back(ToU64(ParseInteger(text), "--m"));
    if (ms.back() == 0) throw std::invalid_argument("--m values must be positive");
    m_list.push_back(Str(ms.back()));
  }
  IterateOptions options;
  options.max_rounds = a.max_rounds;

  Json params{{"m", m_list},
              {"x0", Str(config.x0)},
              {"mode", std::string(ToString(config.mode))},
              {"max_rounds", Str(static_cast<std::uint64_t>(a.max_rounds))},
              {"trust_computer_constant", a.trust_computer_constant}};
  Json doc = Document("table", Str(static_cast<std::uint64_t>(config.precision.start_bits)),
                      std::string(ToString(config.mode)), std::move(params));
  const std::vector<TableRow> rows =
      GenerateTable(ms, config, options, ResolveWorkers(common.workers));
  Json out_rows = Json::array();
  for (const TableRow& r : rows) {
    out_rows.push_back(Json{{"m", Str(r.m)},
                            {"k_start", Str(r.k_start)},
                            {"k_bound", Str(r.k_bound)},
                            {"verdict", std::string(ToString(r.verdict))},
                            {"steps", Str(r.chain.size())}});
  }
  doc["rows"] = std::move(out_rows);
  doc["timing"] = Json{{"elapsed_seconds",
                        Seconds(std::chrono::duration<double>(Clock::now() - start).count())}};
  Emit(doc, common.format, TableCsv, TableText, out);
  return kExitOk;
}

// ---- search ---------------------------------------------------------------

Json WitnessJson(const CaseState& s) {
  Json runs = Json::array();
  for (const ProcessedMinimum& m : s.minima) {
    runs.push_back(Json{{"k", (m.run_is_lower_bound ? ">=" : "") + Str(m.k)},
                        {"n", FormString(m.form)}});
  }
  return Json{{"class", s.residue.get_str() + " mod 2^" + Str(s.modulus_exp)},
              {"modulus_exp", Str(s.modulus_exp)},
              {"residue", Str(s.residue)},
              {"kind", KindString(s.kind)},
              {"minima", std::move(runs)},
              {"pending", s.pending ? Json(FormString(*s.pending)) : Json(nullptr)}};
}

void SearchCsv(const Json& doc, std::ostream& out) {
  out << "modulus_exp,residue,kind,k_values\n";
  for (const Json& w : doc["witnesses"]) {
    std::string ks;
    for (const Json& m : w["minima"]) ks += (ks.empty() ? "" : " ") + m["k"].get<std::string>();
    out << w["modulus_exp"].get<std::string>() << "," << w["residue"].get<std::string>() << ","
        << w["kind"].get<std::string>() << "," << ks << "\n";
  }
}

void SearchText(const Json& doc, std::ostream& out) {
  out << "verdict: " << doc["verdict"].get<std::string>() << "\n";
  for (const char* key : {"nodes_explored", "nodes_closed", "open_nodes",
                          "max_modulus_exp_reached", "rounds"}) {
    out << key << ": " << doc[key].get<std::string>() << "\n";
  }
  if (doc["budget_exhausted"].get<bool>()) out << "node budget exhausted\n";
  if (doc["ceiling_hit"].get<bool>()) out << "modulus ceiling reached\n";
  const Json& ws = doc["witnesses"];
  if (!ws.empty()) out << "open classes (" << ws.size() << " shown):\n";
  for (const Json& w : ws) {
    out << "  n1 = " << w["class"].get<std::string>() << "  " << w["kind"].get<std::string>()
        << "  k =";
    for (const Json& m : w["minima"]) out << " " << m["k"].get<std::string>();
    out << "\n";
  }
}

struct SearchArgs {
  std::string mode = "unweighted";
  std::string target = "97/54";
  int depth = 3;
  std::string x0 = "symbolic";
  int k_cap = 64;
  std::string node_budget = "50000000";
  std::uint64_t modulus_ceiling = 10000;
  std::uint64_t task_node_limit = 4096;
  std::size_t max_witnesses = 1000;
  std::string checkpoint;
  bool resume = false;
};

int RunSearch(const SearchArgs& a, const Common& common, std::ostream& out) {
  SearchConfig config;
  config.mode = ParseSearchMode(a.mode);
  config.target_coef = Rational::Parse(a.target);
  config.max_depth = a.depth;
  config.k_cap = a.k_cap;
  if (a.x0 != "symbolic") config.concrete_x0 = ParseInteger(a.x0);
  config.Validate();
  SearchOptions options;
  options.workers = ResolveWorkers(common.workers);
  options.node_budget = ToU64(ParseInteger(a.node_budget), "--budget");
  options.modulus_exp_ceiling = a.modulus_ceiling;
  options.task_node_limit = a.task_node_limit;
  options.max_witnesses = a.max_witnesses;
  options.checkpoint_path = a.checkpoint;
  options.resume = a.resume;
  if (a.resume && a.checkpoint.empty()) throw std::invalid_argument("--resume needs --checkpoint");

  Json params{{"mode", ToString(config.mode)},
              {"target", config.target_coef.ToString()},
              {"depth", Str(static_cast<std::uint64_t>(config.max_depth))},
              {"x0", config.concrete_x0 ? Str(*config.concrete_x0) : std::string("symbolic")},
              {"k_cap", Str(static_cast<std::uint64_t>(config.k_cap))},
              {"node_budget", Str(options.node_budget)},
              {"modulus_ceiling", Str(options.modulus_exp_ceiling)},
              {"task_node_limit", Str(options.task_node_limit)},
              {"max_witnesses", Str(options.max_witnesses)}};
  Json doc = Document("search", "exact", ToString(config.mode), std::move(params));
  const SearchOutcome r = ProveAverageBound(config, options);
  doc["verdict"] = r.proven ? "PROVEN" : "UNPROVEN";
  doc["proven"] = r.proven;
  doc["nodes_explored"] = Str(r.nodes_explored);
  doc["nodes_closed"] = Str(r.nodes_closed);
  doc["open_nodes"] = Str(r.open_nodes);
  doc["max_modulus_exp_reached"] = Str(r.max_modulus_exp_reached);
  doc["rounds"] = Str(r.rounds);
  doc["budget_exhausted"] = r.budget_exhausted;
  doc["ceiling_hit"] = r.ceiling_hit;
  Json ws = Json::array();
  for (const CaseState& s : r.witnesses) ws.push_back(WitnessJson(s));
  doc["witnesses"] = std::move(ws);
  doc["timing"] = Json{{"elapsed_seconds", Seconds(r.elapsed_seconds)}};
  Emit(doc, common.format, SearchCsv, SearchText, out);
  return r.proven ? kExitOk : kExitUnproven;
}

// ---- threshold ------------------------------------------------------------

void ThresholdCsv(const Json& doc, std::ostream& out) {
  out << "k_target,obstruction,epsilon_star_hi,x0_required,x0_required_units\n";
  out << doc["parameters"]["k_target"].get<std::string>() << ","
      << doc["obstruction"].get<std::string>() << "," << Sci(doc["epsilon_star"]["hi"]) << ","
      << doc["x0_required"].get<std::string>() << ","
      << doc["x0_required_units"].get<std::string>() << "\n";
}

void ThresholdText(const Json& doc, std::ostream& out) {
  out << "obstruction: " << doc["obstruction"].get<std::string>() << "\n";
  out << "epsilon*: " << Sci(doc["epsilon_star"]["lo"]) << " .. " << Sci(doc["epsilon_star"]["hi"])
      << "\n";
  out << "x0_required: " << doc["x0_required"].get<std::string>() << " = "
      << doc["x0_required_units"].get<std::string>() << " * 2^60 (rounded up)\n";
}

int RunThreshold(const std::string& k_target, const std::string& mode_text,
                 const Common& common, std::ostream& out) {
  const auto start = Clock::now();
  const BigInt k = ParseInteger(k_target);
  const ThresholdMode mode = ParseThresholdMode(mode_text);
  const PrecisionPolicy policy = ResolvePrecision(common.precision_bits);
  Json params{{"k_target", Str(k)}, {"mode", std::string(ToString(mode))}};
  Json doc = Document("threshold", Str(static_cast<std::uint64_t>(policy.start_bits)),
                      std::string(ToString(mode)), std::move(params));
  const ThresholdResult r = X0Threshold(k, mode, policy);
  doc["obstruction"] = r.obstruction.ToString();
  doc["epsilon_star"] = IntervalJson(r.epsilon_star);
  doc["x0_required"] = Str(r.x0_required);
  doc["x0_required_units"] = Str(r.x0_required_units);
  doc["result_precision_bits"] = Str(static_cast<std::uint64_t>(r.precision_bits));
  doc["timing"] = Json{{"elapsed_seconds",
                        Seconds(std::chrono::duration<double>(Clock::now() - start).count())}};
  Emit(doc, common.format, ThresholdCsv, ThresholdText, out);
  return kExitOk;
}

// ---- verify-range ---------------------------------------------------------

void VerifyCsv(const Json& doc, std::ostream& out) {
  out << "limit,verified,max_excursion,first_failure\n";
  out << doc["parameters"]["limit"].get<std::string>() << ","
      << (doc["verified"].get<bool>() ? "TRUE" : "FALSE") << ","
      << doc["max_excursion"].get<std::string>() << ","
      << (doc["first_failure"].is_null() ? "" : doc["first_failure"].get<std::string>()) << "\n";
}

void VerifyText(const Json& doc, std::ostream& out) {
  out << "verified: " << (doc["verified"].get<bool>() ? "TRUE" : "FALSE") << "\n";
  out << "max_excursion: " << doc["max_excursion"].get<std::string>() << "\n";
  if (!doc["first_failure"].is_null()) {
    out << "first_failure: " << doc["first_failure"].get<std::string>() << "\n";
  }
}

struct VerifyArgs {
  std::string limit;
  std::string block_size = "1048576";
  std::string checkpoint;
  bool resume = false;
};

int RunVerify(const VerifyArgs& a, const Common& common, std::ostream& out) {
  const std::uint64_t limit = ToU64(ParseInteger(a.limit), "--limit");
  VerifyOptions options;
  options.workers = ResolveWorkers(common.workers);
  options.block_size = ToU64(ParseInteger(a.block_size), "--block-size");
  if (options.block_size == 0) throw std::invalid_argument("--block-size must be positive");
  options.checkpoint_path = a.checkpoint;
  options.resume = a.resume;
  if (a.resume && a.checkpoint.empty()) throw std::invalid_argument("--resume needs --checkpoint");
  Json params{{"limit", Str(limit)}, {"block_size", Str(options.block_size)}};
  Json doc = Document("verify-range", "exact", "descent", std::move(params));
  const RangeVerifierReport r = VerifyRange(limit, options);
  doc["verified"] = r.verified;
  doc["max_excursion"] = Str(r.max_excursion);
  doc["first_failure"] = r.first_failure ? Json(Str(*r.first_failure)) : Json(nullptr);
  doc["timing"] = Json{{"elapsed_seconds", Seconds(r.elapsed_seconds)},
                       {"blocks_resumed", Str(r.blocks_resumed)}};
  Emit(doc, common.format, VerifyCsv, VerifyText, out);
  return r.verified ? kExitOk : kExitUnproven;
}

// ---- profile --------------------------------------------------------------

void ProfileCsv(const Json& doc, std::ostream& out) {
  out << "index,n,k,ell,t\n";
  for (const Json& m : doc["minima"]) {
    out << m["index"].get<std::string>() << "," << m["n"].get<std::string>() << ","
        << m["k"].get<std::string>() << "," << m["ell"].get<std::string>() << ","
        << m["t"].get<std::string>() << "\n";
  }
}

void ProfileText(const Json& doc, std::ostream& out) {
  out << "i    k    l    n  (n*T(n))\n";
  for (const Json& m : doc["minima"]) {
    const Rational nt = Rational::Parse(m["n"].get<std::string>()) *
                        Rational::Parse(m["t"].get<std::string>());
    out << std::left << std::setw(5) << m["index"].get<std::string>() << std::setw(5)
        << m["k"].get<std::string>() << std::setw(5) << m["ell"].get<std::string>()
        << m["n"].get<std::string>() << "  (" << nt.ToScientific(6) << ")\n";
  }
  out << std::right;
  if (doc["truncated"].get<bool>()) out << "trajectory reached 1\n";
}

int RunProfile(const std::string& n_text, std::size_t count, const Common& common,
               std::ostream& out) {
  const BigInt n = ParseInteger(n_text);
  if (n < 1) throw std::invalid_argument("--n must be positive");
  if (count == 0) throw std::invalid_argument("--minima must be positive");
  Json params{{"n", Str(n)}, {"minima", Str(count)}};
  Json doc = Document("profile", "exact", "trajectory", std::move(params));
  const TrajectoryProfile p = Profile(n, count);
  Json ms = Json::array();
  for (std::size_t i = 0; i < p.minima.size(); ++i) {
    const MinimumRecord& m = p.minima[i];
    ms.push_back(Json{{"index", Str(i + 1)},
                      {"n", Str(m.n)},
                      {"k", Str(m.k)},
                      {"ell", Str(m.ell)},
                      {"t", m.t_value.ToString()}});
  }
  doc["minima"] = std::move(ms);
  doc["truncated"] = p.truncated;
  Emit(doc, common.format, ProfileCsv, ProfileText, out);
  return kExitOk;
}

void AddCommon(CLI::App* sub, Common& common, bool precision, bool workers) {
  sub->add_option("--format", common.format, "Output format")
      ->check(CLI::IsMember({"json", "csv", "text"}));
  if (precision) {
    sub->add_option("--precision", common.precision_bits,
                    "Working precision in bits (default: CYCLEBOUND_PRECISION_BITS or 384)");
  }
  if (workers) sub->add_option("--workers", common.workers, "Worker threads (default: all cores)");
}

}  // namespace

int Run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Lower bounds on the size of nontrivial Collatz cycles", "cyclebound"};
  app.require_subcommand(1);
  app.set_version_flag("--version", CYCLEBOUND_VERSION);
  Common common;

  BoundsArgs bounds;
  CLI::App* bounds_cmd = app.add_subcommand("bounds", "Iterate the lower bound on K for one m");
  bounds_cmd->add_option("--m", bounds.m, "Number of local minima")->required();
  bounds_cmd->add_option("--k0", bounds.k0, "Starting lower bound on K (default: 7e11 for m <= 91, else 7.2e10)");
  bounds_cmd->add_option("--x0", bounds.x0, "Verified convergence limit, e.g. 704*2^60");
  bounds_cmd->add_option("--mode", bounds.mode, "analytic | computer1 | weighted");
  bounds_cmd->add_option("--max-rounds", bounds.max_rounds, "Iteration limit");
  bounds_cmd->add_flag("--scan-all-m2", bounds.scan_all_m2, "Try every feasible window length");
  bounds_cmd->add_option("--expect", bounds.expect,
                         "Exit 2 unless the final verdict is this (contradiction | fixed_point | improved)");
  AddCommon(bounds_cmd, common, true, false);

  TableArgs table;
  CLI::App* table_cmd = app.add_subcommand("table", "Iterate the bound on K for several m");
  table_cmd->add_option("--m", table.m_values, "Comma-separated m values")->delimiter(',');
  table_cmd->add_option("--x0", table.x0, "Verified convergence limit");
  table_cmd->add_option("--mode", table.mode, "analytic | computer1 | weighted");
  table_cmd->add_option("--max-rounds", table.max_rounds, "Iteration limit per m");
  table_cmd->add_flag("--trust-computer-constant", table.trust_computer_constant,
                      "Accept the per-minimum constant 1 without certifying it");
  AddCommon(table_cmd, common, true, true);

  SearchArgs search;
  CLI::App* search_cmd = app.add_subcommand("search", "Prove a T-sum average bound by case analysis");
  search_cmd->add_option("--mode", search.mode, "unweighted | weighted");
  search_cmd->add_option("--target", search.target, "Target coefficient, e.g. 97/54");
  search_cmd->add_option("--depth", search.depth, "Maximum number of minima per window");
  search_cmd->add_option("--x0", search.x0, "symbolic, or a concrete limit such as 704*2^60");
  search_cmd->add_option("--k-cap", search.k_cap, "Largest exact odd-run length before the long-run case");
  search_cmd->add_option("--budget", search.node_budget, "Node budget");
  search_cmd->add_option("--modulus-ceiling", search.modulus_ceiling, "Largest modulus exponent");
  search_cmd->add_option("--task-node-limit", search.task_node_limit, "Nodes per task and round");
  search_cmd->add_option("--max-witnesses", search.max_witnesses, "Open classes to report");
  search_cmd->add_option("--checkpoint", search.checkpoint, "Checkpoint file, rewritten each round");
  search_cmd->add_flag("--resume", search.resume, "Continue from --checkpoint");
  AddCommon(search_cmd, common, false, true);

  std::string k_target;
  std::string threshold_mode = "theorem20";
  CLI::App* threshold_cmd =
      app.add_subcommand("threshold", "Smallest X0 ruling out every K below a target");
  threshold_cmd->add_option("--k-target", k_target, "Target bound on K, e.g. 1.375e11")->required();
  threshold_cmd->add_option("--mode", threshold_mode, "theorem20 | legacy");
  AddCommon(threshold_cmd, common, true, false);

  VerifyArgs verify;
  CLI::App* verify_cmd = app.add_subcommand("verify-range", "Check descent for every n up to a limit");
  verify_cmd->add_option("--limit", verify.limit, "Largest start value, e.g. 1e8")->required();
  verify_cmd->add_option("--block-size", verify.block_size, "Start values per block");
  verify_cmd->add_option("--checkpoint", verify.checkpoint, "Append-only block log");
  verify_cmd->add_flag("--resume", verify.resume, "Skip blocks recorded in --checkpoint");
  AddCommon(verify_cmd, common, false, true);

  std::string profile_n;
  std::size_t profile_count = 10;
  CLI::App* profile_cmd = app.add_subcommand("profile", "List successive odd local minima");
  profile_cmd->add_option("--n", profile_n, "Start value")->required();
  profile_cmd->add_option("--minima", profile_count, "Number of minima");
  AddCommon(profile_cmd, common, false, false);

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    const auto subs = app.get_subcommands();
    out << (subs.empty() ? app.help() : subs.front()->help());
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::CallForVersion&) {
    out << CYCLEBOUND_VERSION << "\n";
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    const auto subs = app.get_subcommands();
    err << "error: " << e.what() << "\n\n" << (subs.empty() ? app.help() : subs.front()->help());
    return kExitUsage;
  }

  try {
    if (*bounds_cmd) return RunBounds(bounds, common, out);
    if (*table_cmd) return RunTable(table, common, out);
    if (*search_cmd) return RunSearch(search, common, out);
    if (*threshold_cmd) return RunThreshold(k_target, threshold_mode, common, out);
    if (*verify_cmd) return RunVerify(verify, common, out);
    if (*profile_cmd) return RunProfile(profile_n, profile_count, common, out);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  }
  err << app.help();
  return kExitUsage;
}

int Main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return Run(args, std::cout, std::cerr);
}

}  // namespace cyclebound::cli
