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

// Python bindings. Integers cross the boundary as Python ints, exact
// fractions as fractions.Fraction; nothing is rounded to float.

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "cyclebound/case_engine.h"
#include "cyclebound/cli.h"
#include "cyclebound/collatz.h"
#include "cyclebound/contfrac.h"
#include "cyclebound/pipeline.h"

namespace py = pybind11;

namespace cyclebound {
namespace {

py::int_ ToPy(const BigInt& v) { return py::int_(py::str(v.get_str())); }

py::object ToPy(const Rational& q) {
  return py::module_::import("fractions").attr("Fraction")(ToPy(q.num()), ToPy(q.den()));
}

BigInt IntFromPy(const py::handle& h) {
  if (py::isinstance<py::str>(h)) return ParseInteger(h.cast<std::string>());
  if (!py::isinstance<py::int_>(h)) throw py::type_error("expected int or str");
  return BigInt(py::str(h).cast<std::string>());
}

// Accepts int, Fraction, or strings such as "97/54" and "1.4784".
Rational RationalFromPy(const py::handle& h) {
  return Rational::Parse(py::str(h).cast<std::string>());
}

py::dict IntervalToPy(const RealInterval& x) {
  py::dict d;
  d["lo"] = ToPy(x.lo());
  d["hi"] = ToPy(x.hi());
  return d;
}

py::dict ReportToPy(const BoundReport& r) {
  py::dict d;
  d["m"] = r.m;
  d["k_in"] = ToPy(r.k_in);
  d["m2"] = r.m2;
  d["m2_used"] = r.m2_used;
  d["v"] = r.v ? py::object(IntervalToPy(*r.v)) : py::object(py::none());
  d["epsilon"] = IntervalToPy(r.epsilon);
  d["epsilon_source"] = r.epsilon_source;
  d["denominator"] = ToPy(r.denominator);
  d["k_out"] = ToPy(r.k_out);
  d["verdict"] = std::string(ToString(r.verdict));
  return d;
}

GlobalConfig MakeConfig(const py::handle& x0, const std::string& mode, int precision_bits,
                        bool trust) {
  GlobalConfig config;
  config.x0 = IntFromPy(x0);
  config.mode = ParseTConstantMode(mode);
  config.precision.start_bits =
      precision_bits > 0 ? precision_bits : DefaultPrecisionFromEnvironment();
  config.precision.max_bits = std::max(config.precision.max_bits, config.precision.start_bits);
  config.computer_constant_certified = trust;
  config.Validate();
  return config;
}

py::list BoundChain(std::uint64_t m, const py::object& k_start, const py::object& x0,
                    const std::string& mode, int precision_bits, int max_rounds) {
  const GlobalConfig config = MakeConfig(x0, mode, precision_bits, false);
  const BigInt k = k_start.is_none() ? DefaultKStart(m) : IntFromPy(k_start);
  IterateOptions options;
  options.max_rounds = max_rounds;
  std::vector<BoundReport> chain;
  {
    py::gil_scoped_release release;
    chain = IterateBounds(m, k, config, options);
  }
  py::list out;
  for (const BoundReport& r : chain) out.append(ReportToPy(r));
  return out;
}

py::list Table(const std::vector<std::uint64_t>& ms, const py::object& x0,
               const std::string& mode, bool trust, unsigned workers, int precision_bits) {
  const GlobalConfig config = MakeConfig(x0, mode, precision_bits, trust);
  std::vector<TableRow> rows;
  {
    py::gil_scoped_release release;
    rows = GenerateTable(ms, config, {}, workers);
  }
  py::list out;
  for (const TableRow& r : rows) {
    py::dict d;
    d["m"] = r.m;
    d["k_start"] = ToPy(r.k_start);
    d["k_bound"] = ToPy(r.k_bound);
    d["verdict"] = std::string(ToString(r.verdict));
    d["steps"] = r.chain.size();
    out.append(d);
  }
  return out;
}

py::dict Threshold(const py::object& k_target, const std::string& mode, int precision_bits) {
  PrecisionPolicy policy;
  policy.start_bits = precision_bits > 0 ? precision_bits : DefaultPrecisionFromEnvironment();
  policy.max_bits = std::max(policy.max_bits, policy.start_bits);
  const ThresholdResult r = X0Threshold(IntFromPy(k_target), ParseThresholdMode(mode), policy);
  py::dict d;
  d["obstruction"] = ToPy(r.obstruction);
  d["epsilon_star"] = IntervalToPy(r.epsilon_star);
  d["x0_required"] = ToPy(r.x0_required);
  d["x0_required_units"] = ToPy(r.x0_required_units);
  return d;
}

py::dict Prove(const py::object& target, const std::string& mode, int depth,
               const py::object& x0, unsigned workers, std::uint64_t node_budget,
               std::size_t max_witnesses) {
  SearchConfig config;
  if (mode == "weighted") {
    config.mode = SearchMode::kWeighted;
  } else if (mode != "unweighted") {
    throw std::invalid_argument("mode must be 'unweighted' or 'weighted'");
  }
  config.target_coef = RationalFromPy(target);
  config.max_depth = depth;
  if (!x0.is_none()) config.concrete_x0 = IntFromPy(x0);
  SearchOptions options;
  options.workers = workers;
  options.node_budget = node_budget;
  options.max_witnesses = max_witnesses;
  SearchOutcome r;
  {
    py::gil_scoped_release release;
    r = ProveAverageBound(config, options);
  }
  py::dict d;
  d["proven"] = r.proven;
  d["nodes_explored"] = r.nodes_explored;
  d["nodes_closed"] = r.nodes_closed;
  d["open_nodes"] = r.open_nodes;
  d["max_modulus_exp_reached"] = r.max_modulus_exp_reached;
  d["budget_exhausted"] = r.budget_exhausted;
  d["ceiling_hit"] = r.ceiling_hit;
  py::list ws;
  for (const CaseState& s : r.witnesses) {
    py::list ks;
    for (const ProcessedMinimum& m : s.minima) ks.append(m.k);
    py::dict w;
    w["modulus_exp"] = s.modulus_exp;
    w["residue"] = ToPy(s.residue);
    w["kind"] = s.kind == NodeKind::kOpen ? "open" : s.kind == NodeKind::kMerger ? "merger" : "long_run";
    w["k"] = ks;
    ws.append(w);
  }
  d["witnesses"] = ws;
  d["elapsed_seconds"] = r.elapsed_seconds;
  return d;
}

py::dict ProfileToPy(const py::object& n, std::size_t count) {
  const TrajectoryProfile p = Profile(IntFromPy(n), count);
  py::list ms;
  for (const MinimumRecord& m : p.minima) {
    py::dict d;
    d["n"] = ToPy(m.n);
    d["k"] = m.k;
    d["ell"] = m.ell;
    d["t"] = ToPy(m.t_value);
    ms.append(d);
  }
  py::dict d;
  d["minima"] = ms;
  d["truncated"] = p.truncated;
  return d;
}

py::dict Verify(std::uint64_t limit, unsigned workers, std::uint64_t block_size) {
  VerifyOptions options;
  options.workers = workers;
  options.block_size = block_size;
  RangeVerifierReport r;
  {
    py::gil_scoped_release release;
    r = VerifyRange(limit, options);
  }
  py::dict d;
  d["limit"] = r.limit;
  d["verified"] = r.verified;
  d["max_excursion"] = ToPy(r.max_excursion);
  d["first_failure"] = r.first_failure ? py::object(py::int_(*r.first_failure)) : py::none();
  d["elapsed_seconds"] = r.elapsed_seconds;
  return d;
}

py::tuple RunCli(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  int code;
  {
    py::gil_scoped_release release;
    code = cli::Run(args, out, err);
  }
  return py::make_tuple(code, out.str(), err.str());
}

}  // namespace
}  // namespace cyclebound

PYBIND11_MODULE(_core, m) {
  using namespace cyclebound;
  m.doc() = "Exact lower bounds on the size of nontrivial Collatz cycles";
  py::register_exception<InsufficientPrecision>(m, "InsufficientPrecision", PyExc_ArithmeticError);

  m.def("collatz_step", [](const py::object& n) { return ToPy(CollatzStep(IntFromPy(n))); },
        py::arg("n"), "n/2 for even n, (3n+1)/2 for odd n.");
  m.def(
      "accel_odd_run",
      [](const py::object& n) {
        const OddRun r = AccelOddRun(IntFromPy(n));
        return py::make_tuple(r.k, ToPy(r.end_value));
      },
      py::arg("n"), "(k, C^k(n)) for the maximal run of odd steps starting at odd n.");
  m.def("profile", &ProfileToPy, py::arg("n"), py::arg("num_minima") = 10);
  m.def("verify_range", &Verify, py::arg("limit"), py::arg("workers") = 1,
        py::arg("block_size") = std::uint64_t{1} << 20);
  m.def(
      "smallest_denominator_in_open_interval",
      [](const py::object& lo, const py::object& hi) {
        const FractionInInterval f = SmallestDenominatorInOpenInterval(
            RealInterval::Point(RationalFromPy(lo)), RealInterval::Point(RationalFromPy(hi)));
        return ToPy(f.value());
      },
      py::arg("lo"), py::arg("hi"), "Fraction with the smallest denominator in (lo, hi).");
  m.def(
      "delta_continued_fraction",
      [](std::size_t terms, int precision_bits) {
        const ContinuedFraction cf = CfExpand(DeltaInterval(precision_bits), terms);
        py::list out;
        for (const BigInt& a : cf.partial_quotients) out.append(ToPy(a));
        return out;
      },
      py::arg("terms") = 20, py::arg("precision_bits") = 256,
      "Partial quotients of log 3 / log 2 certified at the given precision.");
  m.def("bound_chain", &BoundChain, py::arg("m"), py::arg("k_start") = py::none(),
        py::arg("x0") = "704*2^60", py::arg("mode") = "analytic", py::arg("precision_bits") = 0,
        py::arg("max_rounds") = 50);
  m.def("generate_table", &Table, py::arg("m_values"), py::arg("x0") = "704*2^60",
        py::arg("mode") = "analytic", py::arg("trust_computer_constant") = false,
        py::arg("workers") = 1, py::arg("precision_bits") = 0);
  m.def("x0_threshold", &Threshold, py::arg("k_target"), py::arg("mode") = "theorem20",
        py::arg("precision_bits") = 0);
  m.def("prove_average_bound", &Prove, py::arg("target"), py::arg("mode") = "unweighted",
        py::arg("depth") = 3, py::arg("x0") = py::none(), py::arg("workers") = 1,
        py::arg("node_budget") = 50'000'000, py::arg("max_witnesses") = 1000);
  m.def("run_cli", &RunCli, py::arg("args"),
        "Runs the command-line tool in process; returns (exit_code, stdout, stderr).");
}
