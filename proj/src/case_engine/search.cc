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

// The search proceeds in rounds. Each frontier node is expanded depth-first
// by one worker for at most task_node_limit nodes; whatever remains on its
// stack joins the next frontier. Results are merged in frontier order, so
// the outcome does not depend on the number of workers.

#include <algorithm>
#include <atomic>
#include <chrono>
#include <exception>
#include <filesystem>
#include <mutex>
#include <thread>

#include "cyclebound/case_engine.h"

namespace cyclebound {

namespace {

struct TaskResult {
  std::uint64_t explored = 0;
  std::uint64_t closed = 0;
  std::uint64_t open = 0;
  std::uint64_t max_modulus_exp = 0;
  bool ceiling_hit = false;
  std::vector<CaseState> leftover;
  std::vector<CaseState> witnesses;
};

bool WitnessLess(const CaseState& a, const CaseState& b) {
  if (a.modulus_exp != b.modulus_exp) return a.modulus_exp < b.modulus_exp;
  return a.residue < b.residue;
}

void KeepSmallest(std::vector<CaseState>& witnesses, std::size_t cap) {
  std::sort(witnesses.begin(), witnesses.end(), WitnessLess);
  if (witnesses.size() > cap) witnesses.resize(cap);
}

TaskResult ExpandTask(CaseState root, const SearchConfig& config,
                      const SearchOptions& options) {
  TaskResult out;
  std::vector<CaseState> stack;
  stack.push_back(std::move(root));
  while (!stack.empty() && out.explored < options.task_node_limit) {
    CaseState node = std::move(stack.back());
    stack.pop_back();
    ++out.explored;
    out.max_modulus_exp = std::max(out.max_modulus_exp, node.modulus_exp);
    switch (TryClose(node, config)) {
      case TriState::kTrue:
        ++out.closed;
        break;
      case TriState::kFalse:
        ++out.open;
        out.witnesses.push_back(std::move(node));
        break;
      case TriState::kUnknown: {
        std::vector<CaseState> children = Branch(node, config);
        // Reverse so the smallest k is expanded first.
        for (auto it = children.rbegin(); it != children.rend(); ++it) {
          if (it->modulus_exp > options.modulus_exp_ceiling) {
            ++out.open;
            out.ceiling_hit = true;
            out.witnesses.push_back(std::move(*it));
          } else {
            stack.push_back(std::move(*it));
          }
        }
        break;
      }
    }
    if (out.witnesses.size() > 2 * options.max_witnesses) {
      KeepSmallest(out.witnesses, options.max_witnesses);
    }
  }
  // Leftover in the order they would have been popped.
  out.leftover.assign(std::make_move_iterator(stack.rbegin()),
                      std::make_move_iterator(stack.rend()));
  KeepSmallest(out.witnesses, options.max_witnesses);
  return out;
}

std::vector<TaskResult> RunRound(std::vector<CaseState>& frontier, const SearchConfig& config,
                                 const SearchOptions& options) {
  std::vector<TaskResult> results(frontier.size());
  std::atomic<std::size_t> next{0};
  std::mutex mu;
  std::exception_ptr failure;
  auto work = [&] {
    while (true) {
      const std::size_t i = next.fetch_add(1);
      if (i >= frontier.size()) return;
      try {
        results[i] = ExpandTask(std::move(frontier[i]), config, options);
      } catch (...) {
        std::lock_guard<std::mutex> lock(mu);
        if (!failure) failure = std::current_exception();
      }
    }
  };
  const unsigned extra = std::min<std::size_t>(std::max(1u, options.workers), frontier.size()) - 1;
  std::vector<std::thread> pool;
  for (unsigned t = 0; t < extra; ++t) pool.emplace_back(work);
  work();
  for (auto& t : pool) t.join();
  if (failure) std::rethrow_exception(failure);
  return results;
}

}  // namespace

SearchOutcome ProveAverageBound(const SearchConfig& config, const SearchOptions& options) {
  config.Validate();
  if (options.task_node_limit == 0) throw std::invalid_argument("task_node_limit must be positive");
  const auto start = std::chrono::steady_clock::now();
  SearchOutcome outcome;
  std::vector<CaseState> frontier;

  if (options.resume && !options.checkpoint_path.empty() &&
      std::filesystem::exists(options.checkpoint_path)) {
    Checkpoint cp = LoadCheckpoint(options.checkpoint_path);
    if (cp.config_hash != config.Hash()) {
      throw CheckpointError(options.checkpoint_path + ": written for a different configuration",
                            0);
    }
    outcome.nodes_explored = cp.nodes_explored;
    outcome.nodes_closed = cp.nodes_closed;
    outcome.open_nodes = cp.open_nodes;
    outcome.max_modulus_exp_reached = cp.max_modulus_exp_reached;
    outcome.rounds = cp.rounds;
    outcome.witnesses = std::move(cp.witnesses);
    frontier = std::move(cp.frontier);
  } else {
    frontier.push_back(RootState(config));
  }

  auto save = [&] {
    if (options.checkpoint_path.empty()) return;
    Checkpoint cp;
    cp.config_hash = config.Hash();
    cp.nodes_explored = outcome.nodes_explored;
    cp.nodes_closed = outcome.nodes_closed;
    cp.open_nodes = outcome.open_nodes;
    cp.max_modulus_exp_reached = outcome.max_modulus_exp_reached;
    cp.rounds = outcome.rounds;
    cp.frontier = frontier;
    cp.witnesses = outcome.witnesses;
    SaveCheckpoint(options.checkpoint_path, cp);
  };

  while (!frontier.empty()) {
    if (outcome.nodes_explored >= options.node_budget) {
      outcome.budget_exhausted = true;
      break;
    }
    std::vector<TaskResult> results = RunRound(frontier, config, options);
    frontier.clear();
    for (TaskResult& r : results) {
      outcome.nodes_explored += r.explored;
      outcome.nodes_closed += r.closed;
      outcome.open_nodes += r.open;
      outcome.max_modulus_exp_reached =
          std::max(outcome.max_modulus_exp_reached, r.max_modulus_exp);
      outcome.ceiling_hit = outcome.ceiling_hit || r.ceiling_hit;
      for (CaseState& s : r.leftover) frontier.push_back(std::move(s));
      for (CaseState& s : r.witnesses) outcome.witnesses.push_back(std::move(s));
    }
    KeepSmallest(outcome.witnesses, options.max_witnesses);
    ++outcome.rounds;
    save();
  }
  outcome.proven = frontier.empty() && outcome.open_nodes == 0;
  outcome.elapsed_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return outcome;
}

}  // namespace cyclebound
