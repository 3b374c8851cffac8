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

// Command-line front end. Subcommands:
//   bounds        iterate the lower bound on K for one m
//   table         iterate several m
//   search        run the residue-class case analysis
//   threshold     smallest X0 that rules out every K below a target
//   verify-range  check descent for every n up to a limit
//   profile       list the successive odd local minima of a trajectory
//
// Exit codes: 0 success, 2 unproven or failed verification, 1 usage or
// precision error. Reports go to `out`, diagnostics to `err`.

#ifndef CYCLEBOUND_CLI_H_
#define CYCLEBOUND_CLI_H_

#include <iosfwd>
#include <string>
#include <vector>

namespace cyclebound::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitUnproven = 2;

// `args` excludes the program name.
int Run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

int Main(int argc, char** argv);

}  // namespace cyclebound::cli

#endif  // CYCLEBOUND_CLI_H_
