// Copyright 2026 The memprobe Authors.
//
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

// Built-in self checks: oracle sweep over a suite, metric hand cases,
// worked examples and grid cardinalities.

#pragma once

#include <cmath>
#include <map>
#include <string>
#include <vector>

#include "memprobe/metrics.hpp"
#include "memprobe/oracles.hpp"
#include "memprobe/snapshot.hpp"

namespace memprobe {

struct CheckResult {
  std::string name;
  bool passed = false;
  std::string detail;
};

/// Every case re-derived from its text. Reports the first few failures.
inline CheckResult check_oracle_sweep(const std::vector<TestCase>& cases) {
  std::vector<std::string> failures;
  for (const auto& c : cases)
    if (auto err = oracle::check_case(c)) failures.push_back(*err);
  CheckResult r{"oracle sweep", failures.empty(),
                std::to_string(cases.size() - failures.size()) + "/" +
                    std::to_string(cases.size()) + " cases re-derived"};
  for (std::size_t i = 0; i < failures.size() && i < 5; ++i) r.detail += "\n    " + failures[i];
  return r;
}

inline std::vector<CheckResult> check_metric_hand_cases() {
  std::vector<CheckResult> out;
  auto near = [](double a, double b) { return std::fabs(a - b) <= 1e-9; };
  auto add = [&](std::string name, bool ok, std::string detail = {}) {
    out.push_back({std::move(name), ok, std::move(detail)});
  };

  const auto f1 = rouge_l("a c", "a b c d", RougeMode::F1).value;
  const auto rec = rouge_l("a c", "a b c d", RougeMode::Recall).value;
  add("rouge-l F1 and recall", near(f1, 2.0 / 3.0) && near(rec, 1.0),
      "F1=" + text::format_number(f1) + " recall=" + text::format_number(rec));
  const auto jac = jaccard(make_word_set({"a", "b"}), "b, c").value;
  add("jaccard overlap", jac == 1.0 / 3.0, "value=" + text::format_number(jac));
  add("jaccard both empty", jaccard(WordSet{}, "").value == 1.0);
  add("exact match normalization", exact_match(Binary{true}, "Yes.").value == 1.0);
  add("exact match tail rule", exact_match(Integer{15}, "The final result is 15").value == 1.0);
  add("exact match empty response", exact_match(Binary{true}, "").value == 0.0);
  return out;
}

inline std::vector<CheckResult> check_worked_examples() {
  std::vector<CheckResult> out;
  const auto q = tasks::parse_quantity_ops("add 10, subtract 2, add 7");
  const auto total = tasks::simulate_ops(std::span<const tasks::QuantityOp>(q), 0);
  out.push_back({"quantity example", total == 15, "total=" + std::to_string(total)});

  const auto s = tasks::parse_set_ops("add apple, pear; add orange; remove apple; add lime");
  const auto set = tasks::simulate_ops(std::span<const tasks::SetOp>(s), WordSet{});
  out.push_back({"set example", set == make_word_set({"pear", "orange", "lime"}),
                 render(Answer{set})});

  const auto script = tasks::parse_agent_script(
      "Alice: add apple, pear, remove orange, add banana; Bob: add peach, berry, remove kiwi; "
      "Charley: add lime; Bob: remove peach, swap berry with Alice for banana");
  const auto agents = tasks::simulate_agents(script);
  const AgentSets want{{{"Alice", {"apple", "berry", "pear"}},
                        {"Bob", {"banana"}},
                        {"Charley", {"lime"}}}};
  out.push_back({"agent example", agents == want, render(Answer{agents})});

  const auto blocks = tasks::parse_labeled_segments("L1: a, b, c; L2: h, f, i; L1: d, z, k");
  const auto suffix = tasks::block_suffix(blocks, "L1", "b");
  out.push_back({"data blocks example",
                 suffix == std::vector<std::string>{"c", "d", "z", "k"},
                 text::join(suffix, ", ")});
  return out;
}

/// Per-task and total counts of a suite against the counts its config plans.
inline CheckResult check_counts(const SnapshotConfig& cfg, const std::vector<TestCase>& cases) {
  std::map<Task, std::size_t> got;
  for (const auto& c : cases) ++got[c.task];
  std::string detail;
  bool ok = cases.size() == planned_case_count(cfg);
  for (const auto& g : cfg.grids) {
    if (!selected(cfg, g.task)) continue;
    if (got[g.task] != g.case_count()) {
      ok = false;
      detail += std::string(detail.empty() ? "" : ", ") + std::string(task_name(g.task)) + " " +
                std::to_string(got[g.task]) + "/" + std::to_string(g.case_count());
    }
  }
  return {"case counts", ok,
          std::to_string(cases.size()) + " cases" + (detail.empty() ? "" : "; " + detail)};
}

}  // namespace memprobe
