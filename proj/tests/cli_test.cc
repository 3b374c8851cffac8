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

#include <cstdlib>
#include <filesystem>
#include <sstream>

#include "cyclebound/cli.h"
#include "cyclebound/numerics.h"
#include "doctest.h"
#include "json.hpp"

namespace cyclebound::cli {
namespace {

using Json = nlohmann::ordered_json;

struct Result {
  int code = 0;
  std::string out;
  std::string err;
};

Result Call(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  Result r;
  r.code = Run(args, out, err);
  r.out = out.str();
  r.err = err.str();
  return r;
}

Json CallJson(std::vector<std::string> args, int expected_code = kExitOk) {
  args.push_back("--format");
  args.push_back("json");
  const Result r = Call(args);
  REQUIRE_MESSAGE(r.code == expected_code, r.err);
  return Json::parse(r.out);
}

// Every leaf is a string, boolean or null.
bool NoBinaryNumbers(const Json& j) {
  if (j.is_number()) return false;
  if (j.is_structured()) {
    for (const Json& child : j) {
      if (!NoBinaryNumbers(child)) return false;
    }
  }
  return true;
}

Json WithoutTiming(Json j) {
  j.erase("timing");
  return j;
}

struct EnvGuard {
  explicit EnvGuard(const char* value) {
    if (value) {
      setenv("CYCLEBOUND_PRECISION_BITS", value, 1);
    } else {
      unsetenv("CYCLEBOUND_PRECISION_BITS");
    }
  }
  ~EnvGuard() { unsetenv("CYCLEBOUND_PRECISION_BITS"); }
};

TEST_CASE("bounds reports the m = 91 chain") {
  const Json doc = CallJson({"bounds", "--m", "91", "--k0", "7e11", "--x0", "704*2^60", "--mode",
                             "computer1"});
  CHECK(doc["header"]["command"] == "bounds");
  CHECK(doc["header"]["precision_bits"] == "384");
  CHECK(doc["header"]["config_hash"].get<std::string>().size() == 16);
  CHECK(doc["verdict"] == "CONTRADICTION");
  CHECK(doc["exceeds_upper_bound"] == "TRUE");
  const Json& chain = doc["chain"];
  REQUIRE(chain.size() == 7);
  CHECK(chain[0]["k_in"] == "700000000000");
  CHECK(chain[0]["m2"] == "47");
  CHECK(chain[6]["k_out"] == "7941964418702608664581");
  CHECK(doc["k_bound"] == "7941964418702608664581");
  for (const Json& s : chain) {
    CHECK(Rational::Parse(s["epsilon"]["lo"].get<std::string>()) <=
          Rational::Parse(s["epsilon"]["hi"].get<std::string>()));
  }
  CHECK(NoBinaryNumbers(doc));
}

TEST_CASE("bounds expectations set the exit code") {
  const std::vector<std::string> base{"bounds", "--m", "91", "--mode", "computer1"};
  auto with = [&](const std::string& expect) {
    std::vector<std::string> a = base;
    a.push_back("--expect");
    a.push_back(expect);
    return Call(a).code;
  };
  CHECK(with("contradiction") == kExitOk);
  CHECK(with("fixed_point") == kExitUnproven);
  CHECK(with("sideways") == kExitUsage);
  CHECK(Call({"bounds", "--m", "98", "--mode", "computer1", "--expect", "fixed_point"}).code ==
        kExitOk);
}

TEST_CASE("integer flags accept products, powers and scientific notation") {
  auto hash = [](const std::string& x0) {
    return CallJson({"bounds", "--m", "30", "--x0", x0})["header"]["config_hash"];
  };
  const Json h = hash("704*2^60");
  CHECK(hash("811656739243220271104") == h);
  CHECK(hash("8.11656739243220271104e20") == h);
  CHECK(hash("1e21") != h);
  CHECK(Call({"bounds", "--m", "30", "--x0", "1.5"}).code == kExitUsage);
  CHECK(Call({"bounds", "--m", "30", "--x0", "700"}).code == kExitUsage);
  CHECK(Call({"bounds", "--m", "30", "--mode", "computer1", "--x0", "1e20"}).code == kExitUsage);
}

TEST_CASE("usage errors exit 1 with usage text") {
  Result r = Call({"bounds", "--m", "91", "--bogus"});
  CHECK(r.code == kExitUsage);
  CHECK(r.err.find("--bogus") != std::string::npos);
  CHECK(r.err.find("Usage") != std::string::npos);
  CHECK(r.out.empty());
  CHECK(Call({}).code == kExitUsage);
  CHECK(Call({"frobnicate"}).code == kExitUsage);
  CHECK(Call({"bounds"}).code == kExitUsage);
  CHECK(Call({"bounds", "--m", "91", "--format", "xml"}).code == kExitUsage);
  CHECK(Call({"search", "--resume"}).code == kExitUsage);
  CHECK(Call({"search", "--mode", "sideways"}).code == kExitUsage);
  r = Call({"--help"});
  CHECK(r.code == kExitOk);
  CHECK(r.out.find("threshold") != std::string::npos);
  r = Call({"search", "--help"});
  CHECK(r.code == kExitOk);
  CHECK(r.out.find("--target") != std::string::npos);
}

TEST_CASE("precision comes from the flag or the environment") {
  {
    EnvGuard env("512");
    CHECK(CallJson({"threshold", "--k-target", "1.375e11"})["header"]["precision_bits"] == "512");
    CHECK(CallJson({"threshold", "--k-target", "1.375e11", "--precision", "256"})["header"]
                  ["precision_bits"] == "256");
  }
  {
    EnvGuard env("many");
    const Result r = Call({"threshold", "--k-target", "1.375e11"});
    CHECK(r.code == kExitUsage);
    CHECK(r.err.find("CYCLEBOUND_PRECISION_BITS") != std::string::npos);
  }
  EnvGuard env(nullptr);
  CHECK(CallJson({"threshold", "--k-target", "1.375e11"})["header"]["precision_bits"] == "384");
  CHECK(Call({"threshold", "--k-target", "1.375e11", "--precision", "8"}).code == kExitUsage);
}

TEST_CASE("threshold") {
  Json doc = CallJson({"threshold", "--k-target", "1.375e11", "--mode", "theorem20"});
  CHECK(doc["x0_required_units"] == "2836");
  CHECK(doc["obstruction"] == "114208327604/72057431991");
  const Rational eps = Rational::Parse(doc["epsilon_star"]["hi"].get<std::string>());
  CHECK(eps.ToScientific(4) == "1.103e-22");
  doc = CallJson({"threshold", "--k-target", "1.375e11", "--mode", "legacy"});
  CHECK(doc["x0_required_units"] == "3781");
  CHECK(NoBinaryNumbers(doc));
}

TEST_CASE("search verdicts and witnesses") {
  Json doc = CallJson({"search", "--mode", "weighted", "--target", "3/4", "--depth", "3", "--x0",
                       "symbolic"});
  CHECK(doc["verdict"] == "PROVEN");
  CHECK(doc["witnesses"].empty());
  doc = CallJson({"search", "--target", "1", "--depth", "1"}, kExitUnproven);
  CHECK(doc["verdict"] == "UNPROVEN");
  REQUIRE_FALSE(doc["witnesses"].empty());
  CHECK(doc["witnesses"][0]["class"] == "11 mod 2^4");
  CHECK(doc["witnesses"][0]["pending"] == "18*a+13");
  CHECK(NoBinaryNumbers(doc));
  doc = CallJson({"search", "--target", "97/54", "--depth", "3", "--budget", "10",
                  "--task-node-limit", "5"},
                 kExitUnproven);
  CHECK(doc["budget_exhausted"] == true);
}

TEST_CASE("search checkpoint through the command line") {
  const std::string path =
      (std::filesystem::temp_directory_path() / "cyclebound_cli_search.ckpt").string();
  std::filesystem::remove(path);
  const std::vector<std::string> base{"search", "--target", "1", "--depth", "2"};
  const Json straight = CallJson(base, kExitUnproven);
  std::vector<std::string> first = base;
  for (const char* a : {"--checkpoint", path.c_str(), "--budget", "200", "--task-node-limit", "50"}) {
    first.push_back(a);
  }
  CHECK(CallJson(first, kExitUnproven)["budget_exhausted"] == true);
  std::vector<std::string> second = base;
  for (const char* a : {"--checkpoint", path.c_str(), "--resume"}) second.push_back(a);
  const Json resumed = CallJson(second, kExitUnproven);
  CHECK(resumed["open_nodes"] == straight["open_nodes"]);
  CHECK(resumed["nodes_explored"] == straight["nodes_explored"]);
  CHECK(resumed["witnesses"] == straight["witnesses"]);
  std::filesystem::remove(path);
}

TEST_CASE("json bodies do not depend on the worker count") {
  const std::vector<std::vector<std::string>> runs{
      {"search", "--target", "1", "--depth", "2", "--task-node-limit", "64"},
      {"search", "--target", "97/54", "--depth", "3"},
      {"table", "--m", "98,369,17096", "--mode", "computer1", "--trust-computer-constant"},
      {"verify-range", "--limit", "300000", "--block-size", "65536"},
  };
  for (const auto& run : runs) {
    std::vector<Json> bodies;
    for (const char* w : {"1", "3"}) {
      std::vector<std::string> a = run;
      a.push_back("--workers");
      a.push_back(w);
      a.push_back("--format");
      a.push_back("json");
      const Result r = Call(a);
      bodies.push_back(WithoutTiming(Json::parse(r.out)));
    }
    CHECK(bodies[0] == bodies[1]);
    CHECK(bodies[0].dump() == bodies[1].dump());
  }
  // Repeated runs are byte-identical apart from timing.
  const std::vector<std::string> b{"bounds", "--m", "91", "--mode", "computer1", "--format",
                                   "json"};
  CHECK(WithoutTiming(Json::parse(Call(b).out)).dump() ==
        WithoutTiming(Json::parse(Call(b).out)).dump());
}

TEST_CASE("table needs the trust flag in computer1 mode") {
  Result r = Call({"table", "--m", "98", "--mode", "computer1"});
  CHECK(r.code == kExitUsage);
  CHECK(r.err.find("--trust-computer-constant") != std::string::npos);
  r = Call({"table", "--m", "98,117", "--mode", "computer1", "--trust-computer-constant",
            "--format", "csv"});
  CHECK(r.code == kExitOk);
  CHECK(r.out.rfind("# tool=cyclebound\n", 0) == 0);
  CHECK(r.out.find("m,k_start,k_bound,verdict,steps\n") != std::string::npos);
  CHECK(r.out.find("98,72000000000,77692117359936589403,FIXED_POINT,") != std::string::npos);
  CHECK(Call({"table", "--m", "98,x"}).code == kExitUsage);
}

TEST_CASE("verify-range and profile") {
  Json doc = CallJson({"verify-range", "--limit", "1e5"});
  CHECK(doc["verified"] == true);
  CHECK(doc["first_failure"].is_null());
  CHECK(doc["max_excursion"] == "785412368");  // (3*523608245+1)/2, on the way from 77671
  doc = CallJson({"profile", "--n", "27", "--minima", "2"});
  REQUIRE(doc["minima"].size() == 2);
  CHECK(doc["minima"][0]["n"] == "27");
  CHECK(doc["minima"][0]["k"] == "2");
  CHECK(doc["minima"][0]["ell"] == "1");
  CHECK(doc["minima"][0]["t"] == "68/1107");  // 1/27 + 1/41
  CHECK(doc["minima"][1]["n"] == "31");
  const Result r = Call({"profile", "--n", "27", "--minima", "2", "--format", "csv"});
  CHECK(r.out.find("index,n,k,ell,t\n1,27,2,1,68/1107\n") != std::string::npos);
  CHECK(Call({"profile", "--n", "0"}).code == kExitUsage);
}

TEST_CASE("text output") {
  const Result r = Call({"bounds", "--m", "91", "--mode", "computer1"});
  CHECK(r.code == kExitOk);
  CHECK(r.out.find("verdict: CONTRADICTION") != std::string::npos);
  CHECK(r.out.find("config_hash=") != std::string::npos);
}

}  // namespace
}  // namespace cyclebound::cli
