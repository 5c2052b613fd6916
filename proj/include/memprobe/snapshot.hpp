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

// Parameter grids, snapshot expansion and JSONL serialization.

#pragma once

#include <fstream>
#include <istream>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "memprobe/tasks/registry.hpp"

namespace memprobe {

/// One named parameter and the values it sweeps over.
struct Axis {
  std::string name;
  std::vector<Json> values;
};

/// Cross product of `axes` (first axis outermost), `samples` cases per point.
struct GridBlock {
  std::vector<Axis> axes;
  std::size_t samples = 1;
};

struct TaskGrid {
  Task task;
  std::vector<GridBlock> blocks;

  std::size_t case_count() const {
    std::size_t total = 0;
    for (const auto& b : blocks) {
      std::size_t n = b.samples;
      for (const auto& a : b.axes) n *= a.values.size();
      total += n;
    }
    return total;
  }
};

struct SnapshotConfig {
  std::uint64_t master_seed = 0;
  TokenBudget budget;
  std::vector<TaskGrid> grids;

  std::optional<Category> category;
  std::optional<Task> task;
  /// Replaces num_steps on every step-sized task.
  std::optional<std::int64_t> steps;
  bool gibberish = false;
  std::string prompt_variant = "v1";
  std::optional<IterateFrom> iterate_from;
  std::string vocabulary_path;
};

namespace detail {

inline std::vector<Json> values(std::initializer_list<Json> v) { return v; }

inline const std::vector<Json>& depths() {
  static const std::vector<Json> d = {0.0, 0.25, 0.5, 0.75, 1.0};
  return d;
}

inline const std::vector<Json>& labels() {
  static const std::vector<Json> l = {"positive", "negative"};
  return l;
}

inline GridBlock block(std::vector<Axis> axes, std::size_t samples) {
  return GridBlock{std::move(axes), samples};
}

}  // namespace detail

/// The published grids: 1110 cases at a 4000-token budget.
inline SnapshotConfig default_config(std::uint64_t master_seed = 0) {
  using detail::block;
  using detail::depths;
  using detail::labels;
  using detail::values;
  SnapshotConfig c;
  c.master_seed = master_seed;
  const auto groups4 = values({4, 8, 16, 32});
  const auto groups5 = values({2, 4, 8, 16, 32});
  c.grids = {
      {Task::StringSearchWord, {block({{"query_depth", depths()}, {"label", labels()}}, 5)}},
      {Task::StringSearchSeq,
       {block({{"sequence_length", values({8, 16, 32, 64})}, {"label", labels()}}, 10)}},
      {Task::KeyValueSearch, {block({{"query_depth", depths()}}, 10)}},
      {Task::BatchSearch, {block({{"batch_size", values({4, 8, 16, 32})}}, 5)}},
      {Task::SnapshotWords, {block({}, 10)}},
      {Task::ReplaceAll,
       {block({{"density", values({0.2, 0.4, 0.6, 0.8})}, {"replacement", values({"word", "null"})}},
              5)}},
      {Task::OverwritePositions,
       {block({{"nth", values({2, 3, 4})}, {"replacement", values({"word", "null"})}}, 5)}},
      {Task::SnapshotNumbers, {block({}, 10)}},
      {Task::FunctionalUpdates,
       {block({{"function", values({"add3", "subtract1", "multiply2"})}}, 5)}},
      {Task::ComparePositions,
       {block({{"query_depth", depths()}, {"second_depth", depths()}}, 3)}},
      {Task::FindDuplicates, {block({{"repetition", groups5}}, 5)}},
      {Task::Count, {block({{"repetition", groups5}}, 5)}},
      {Task::CheckAssociation,
       {block({{"n_attributes", groups5}, {"label", labels()}}, 5)}},
      {Task::CompareTwoLists,
       {block({{"num_diff_words", values({1, 5, 10, 20})},
               {"chosen_list", values({"first", "second"})}},
              10)}},
      {Task::IdentifyOddGroup,
       {block({{"words_per_group", values({25, 50, 75, 100})},
               {"pct_difference", values({0.0, 0.25, 0.5})}},
              5)}},
      {Task::PatchDifference,
       {block({{"pattern_length", values({2})},
               {"cutoff_depth", values({0.0, 1.0})},
               {"nth", values({1, 3, 6})}},
              5),
        block({{"pattern_length", values({15, 30})},
               {"cutoff_depth", values({0.0, 0.5, 1.0})},
               {"nth", values({1, 3, 6})}},
              5)}},
      {Task::GroupMembership, {block({{"num_groups", groups4}, {"query_depth", depths()}}, 5)}},
      {Task::GroupAssociation, {block({{"num_groups", groups4}, {"label", labels()}}, 5)}},
      {Task::GroupAssociationAlternating,
       {block({{"num_groups", groups5}, {"num_turns", values({10})}, {"label", labels()}}, 5)}},
      {Task::Iterate, {block({{"num_groups", groups4}}, 5)}},
      {Task::QuantityState, {block({{"num_steps", values({200})}}, 10)}},
      {Task::SetState,
       {block({{"num_steps", values({100})}, {"set_size", values({5, 10, 15, 20})}}, 10)}},
      {Task::DataBlocks, {block({{"num_blocks", groups5}, {"num_turns", values({10})}}, 10)}},
      {Task::TheoryOfMind,
       {block({{"num_steps", values({100})}, {"num_agents", values({2, 3, 4})}}, 20)}},
  };
  return c;
}

inline bool selected(const SnapshotConfig& c, Task t) {
  if (c.task && *c.task != t) return false;
  if (c.category && *c.category != category_of(t)) return false;
  return true;
}

/// Number of cases expand_snapshot would produce.
inline std::size_t planned_case_count(const SnapshotConfig& c) {
  std::size_t n = 0;
  for (const auto& g : c.grids)
    if (selected(c, g.task)) n += g.case_count();
  return n;
}

/// Vocabulary for a config: the dictionary, or a gibberish list derived from
/// the master seed.
inline Vocabulary vocabulary_for(const SnapshotConfig& c) {
  auto dict = load_vocabulary(c.vocabulary_path.empty() ? default_vocabulary_path()
                                                        : c.vocabulary_path);
  if (!c.gibberish) return dict;
  auto rng = Seed{c.master_seed, {"gibberish-vocabulary"}}.rng();
  return make_gibberish_vocabulary(dict, dict.size(), rng);
}

namespace detail {

template <class F>
void for_each_point(const GridBlock& b, std::size_t axis, std::vector<const Json*>& chosen,
                    F&& f) {
  if (axis == b.axes.size()) {
    f(chosen);
    return;
  }
  for (const auto& v : b.axes[axis].values) {
    chosen[axis] = &v;
    for_each_point(b, axis + 1, chosen, f);
  }
}

inline std::string with_case_id(const std::string& id, const std::string& what) {
  return what + " (case " + id + ")";
}

/// Rethrows a generator error with the case id attached, keeping its type.
[[noreturn]] inline void rethrow_for(const std::string& id) {
  try {
    throw;
  } catch (const BudgetTooSmall& e) {
    throw BudgetTooSmall(with_case_id(id, e.what()));
  } catch (const InsufficientVocabulary& e) {
    throw InsufficientVocabulary(with_case_id(id, e.what()));
  } catch (const DegenerateTagging& e) {
    throw DegenerateTagging(with_case_id(id, e.what()));
  } catch (const InvalidParams& e) {
    throw InvalidParams(with_case_id(id, e.what()));
  }
}

}  // namespace detail

/// Grid-point parameters for one task under a config's global overrides.
inline GenParams point_params(const SnapshotConfig& c, Task task, const GridBlock& b,
                              const std::vector<const Json*>& point) {
  GenParams p;
  const auto rel = relevant_fields(task);
  if (std::find(rel.begin(), rel.end(), "token_budget") != rel.end()) p.token_budget = c.budget;
  for (std::size_t i = 0; i < b.axes.size(); ++i) set_param(p, b.axes[i].name, *point[i]);
  if (c.steps && is_step_sized(task)) p.num_steps = *c.steps;
  if (c.iterate_from && task == Task::Iterate) p.iterate_from = *c.iterate_from;
  p.gibberish = c.gibberish;
  p.prompt_variant = c.prompt_variant;
  return p;
}

/// Every selected case in canonical order: grid order, axis order, then
/// sample index.
inline std::vector<TestCase> expand_snapshot(const SnapshotConfig& c, const Vocabulary& vocab) {
  std::vector<TestCase> out;
  out.reserve(planned_case_count(c));
  for (const auto& grid : c.grids) {
    if (!selected(c, grid.task)) continue;
    const std::string task(task_name(grid.task));
    for (const auto& b : grid.blocks) {
      std::vector<const Json*> point(b.axes.size());
      detail::for_each_point(b, 0, point, [&](const std::vector<const Json*>& pt) {
        const GenParams p = point_params(c, grid.task, b, pt);
        std::vector<std::string> names;
        for (const auto& a : b.axes) names.push_back(a.name);
        if (grid.task == Task::Iterate && p.iterate_from) names.push_back("iterate_from");
        const auto canon = canonical_params(p, names);
        for (std::size_t i = 0; i < b.samples; ++i) {
          const auto idx = std::to_string(i);
          const std::string id = task + "/" + canon + "/" + idx;
          try {
            auto tc = generate_case(grid.task, p, vocab, Seed{c.master_seed, {task, canon, idx}});
            tc.id = id;
            out.push_back(std::move(tc));
          } catch (const Error&) {
            detail::rethrow_for(id);
          }
        }
      });
    }
  }
  return out;
}

inline std::vector<TestCase> expand_snapshot(const SnapshotConfig& c) {
  return expand_snapshot(c, vocabulary_for(c));
}

inline void write_snapshot(const std::vector<TestCase>& cases, std::ostream& out) {
  for (const auto& c : cases) out << case_to_json(c).dump() << '\n';
}

inline void write_snapshot(const std::vector<TestCase>& cases, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write snapshot: " + path);
  write_snapshot(cases, out);
  if (!out) throw IoError("write failed: " + path);
}

inline std::vector<TestCase> read_snapshot(std::istream& in) {
  std::vector<TestCase> out;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (text::trim(line).empty()) continue;
    Json j;
    try {
      j = Json::parse(line);
    } catch (const nlohmann::json::exception& e) {
      throw MalformedLine(line_no, e.what());
    }
    try {
      out.push_back(case_from_json(j));
    } catch (const SchemaVersionMismatch&) {
      throw;
    } catch (const std::exception& e) {
      throw MalformedLine(line_no, e.what());
    }
  }
  return out;
}

inline std::vector<TestCase> read_snapshot(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open snapshot: " + path);
  return read_snapshot(in);
}

/// Applies a JSON config object on top of `c`. Recognised keys: seed,
/// context_tokens, tolerance, estimator, ratio, category, task, steps,
/// gibberish, prompt_variant, iterate_from, vocabulary, grids. A "grids"
/// entry replaces the named task's grid:
///   {"grids": {"count": [{"axes": {"repetition": [2, 4]}, "samples": 3}]}}
inline void apply_config_json(SnapshotConfig& c, const Json& j) {
  if (!j.is_object()) throw InvalidParams("config must be a JSON object");
  static const std::vector<std::string> known = {
      "seed", "context_tokens", "tolerance", "estimator", "ratio", "category", "task",
      "steps", "gibberish", "prompt_variant", "iterate_from", "vocabulary", "grids"};
  for (auto it = j.begin(); it != j.end(); ++it)
    if (std::find(known.begin(), known.end(), it.key()) == known.end())
      throw InvalidParams("unknown config key '" + it.key() + "'");
  try {
    if (j.contains("seed")) c.master_seed = j["seed"].get<std::uint64_t>();
    if (j.contains("context_tokens") || j.contains("tolerance") || j.contains("estimator") ||
        j.contains("ratio")) {
      Json b = c.budget;
      for (const auto* k : {"tolerance", "estimator", "ratio"})
        if (j.contains(k)) b[k] = j[k];
      if (j.contains("context_tokens")) b["target"] = j["context_tokens"];
      c.budget = b.get<TokenBudget>();
    }
    if (j.contains("category")) {
      auto cat = parse_category(j["category"].get<std::string>());
      if (!cat) throw InvalidParams("unknown category " + j["category"].dump());
      c.category = cat;
    }
    if (j.contains("task")) {
      auto t = parse_task(j["task"].get<std::string>());
      if (!t) throw InvalidParams("unknown task " + j["task"].dump());
      c.task = t;
    }
    if (j.contains("steps")) c.steps = j["steps"].get<std::int64_t>();
    if (j.contains("gibberish")) c.gibberish = j["gibberish"].get<bool>();
    if (j.contains("prompt_variant")) c.prompt_variant = j["prompt_variant"].get<std::string>();
    if (j.contains("iterate_from")) c.iterate_from = j["iterate_from"].get<IterateFrom>();
    if (j.contains("vocabulary")) c.vocabulary_path = j["vocabulary"].get<std::string>();
    if (j.contains("grids")) {
      for (auto it = j["grids"].begin(); it != j["grids"].end(); ++it) {
        auto t = parse_task(it.key());
        if (!t) throw InvalidParams("unknown task in grids: " + it.key());
        TaskGrid g{*t, {}};
        for (const auto& jb : it.value()) {
          GridBlock b;
          b.samples = jb.value("samples", std::size_t{1});
          if (jb.contains("axes"))
            for (auto ax = jb["axes"].begin(); ax != jb["axes"].end(); ++ax)
              b.axes.push_back({ax.key(), ax.value().get<std::vector<Json>>()});
          g.blocks.push_back(std::move(b));
        }
        auto existing = std::find_if(c.grids.begin(), c.grids.end(),
                                     [&](const TaskGrid& x) { return x.task == *t; });
        if (existing != c.grids.end())
          *existing = std::move(g);
        else
          c.grids.push_back(std::move(g));
      }
    }
  } catch (const nlohmann::json::exception& e) {
    throw InvalidParams(std::string("bad config value: ") + e.what());
  }
}

inline Json load_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path);
  try {
    return Json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw InvalidParams("cannot parse " + path + ": " + e.what());
  }
}

}  // namespace memprobe
