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

// Core data model: task identities, generation parameters, reference answers
// and test cases, with their JSON encodings.

#pragma once

#include <algorithm>
#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

#include "json.hpp"

#include "memprobe/corpus.hpp"
#include "memprobe/errors.hpp"
#include "memprobe/text.hpp"

namespace memprobe {

using Json = nlohmann::ordered_json;

inline constexpr int kSchemaVersion = 1;

// ---------------------------------------------------------------------------
// Task taxonomy

enum class Category {
  Search,
  RecallEdit,
  MatchCompare,
  SpotDifferences,
  SetsLists,
  StatefulProcessing,
  DataBlocks,
  CompositeStateTracking,
};

enum class Task {
  StringSearchWord,
  StringSearchSeq,
  KeyValueSearch,
  BatchSearch,
  SnapshotWords,
  ReplaceAll,
  OverwritePositions,
  SnapshotNumbers,
  FunctionalUpdates,
  ComparePositions,
  FindDuplicates,
  Count,
  CheckAssociation,
  CompareTwoLists,
  IdentifyOddGroup,
  PatchDifference,
  GroupMembership,
  GroupAssociation,
  GroupAssociationAlternating,
  Iterate,
  QuantityState,
  SetState,
  DataBlocks,
  TheoryOfMind,
};

enum class MetricKind { ExactMatch, RougeL, RougeLRecall, Jaccard };

struct TaskInfo {
  Task task;
  std::string_view name;
  Category category;
  MetricKind metric;
};

/// Canonical order: categories as in the capability table, tasks within each.
inline constexpr std::array<TaskInfo, 24> kTasks = {{
    {Task::StringSearchWord, "string_search_word", Category::Search, MetricKind::ExactMatch},
    {Task::StringSearchSeq, "string_search_seq", Category::Search, MetricKind::ExactMatch},
    {Task::KeyValueSearch, "key_value_search", Category::Search, MetricKind::ExactMatch},
    {Task::BatchSearch, "batch_search", Category::Search, MetricKind::RougeLRecall},
    {Task::SnapshotWords, "snapshot_words", Category::RecallEdit, MetricKind::RougeL},
    {Task::ReplaceAll, "replace_all", Category::RecallEdit, MetricKind::RougeL},
    {Task::OverwritePositions, "overwrite_positions", Category::RecallEdit, MetricKind::RougeL},
    {Task::SnapshotNumbers, "snapshot_numbers", Category::RecallEdit, MetricKind::RougeL},
    {Task::FunctionalUpdates, "functional_updates", Category::RecallEdit, MetricKind::RougeL},
    {Task::ComparePositions, "compare_positions", Category::MatchCompare, MetricKind::ExactMatch},
    {Task::FindDuplicates, "find_duplicates", Category::MatchCompare, MetricKind::ExactMatch},
    {Task::Count, "count", Category::MatchCompare, MetricKind::ExactMatch},
    {Task::CheckAssociation, "check_association", Category::MatchCompare, MetricKind::ExactMatch},
    {Task::CompareTwoLists, "compare_two_lists", Category::SpotDifferences, MetricKind::RougeLRecall},
    {Task::IdentifyOddGroup, "identify_odd_group", Category::SpotDifferences, MetricKind::ExactMatch},
    {Task::PatchDifference, "patch_difference", Category::SpotDifferences, MetricKind::ExactMatch},
    {Task::GroupMembership, "group_membership", Category::SetsLists, MetricKind::ExactMatch},
    {Task::GroupAssociation, "group_association", Category::SetsLists, MetricKind::ExactMatch},
    {Task::GroupAssociationAlternating, "group_association_alternating", Category::SetsLists, MetricKind::ExactMatch},
    {Task::Iterate, "iterate", Category::SetsLists, MetricKind::RougeL},
    {Task::QuantityState, "quantity_state", Category::StatefulProcessing, MetricKind::ExactMatch},
    {Task::SetState, "set_state", Category::StatefulProcessing, MetricKind::Jaccard},
    {Task::DataBlocks, "data_blocks", Category::DataBlocks, MetricKind::RougeL},
    {Task::TheoryOfMind, "theory_of_mind", Category::CompositeStateTracking, MetricKind::Jaccard},
}};

inline constexpr std::array<std::pair<Category, std::string_view>, 8>
    kCategories = {{
        {Category::Search, "search"},
        {Category::RecallEdit, "recall_edit"},
        {Category::MatchCompare, "match_compare"},
        {Category::SpotDifferences, "spot_differences"},
        {Category::SetsLists, "sets_lists"},
        {Category::StatefulProcessing, "stateful_processing"},
        {Category::DataBlocks, "data_blocks"},
        {Category::CompositeStateTracking, "composite_state_tracking"},
    }};

inline const TaskInfo& info(Task t) {
  return kTasks[static_cast<std::size_t>(t)];
}
inline std::string_view task_name(Task t) { return info(t).name; }
inline Category category_of(Task t) { return info(t).category; }
inline MetricKind metric_of(Task t) { return info(t).metric; }

inline std::string_view category_name(Category c) {
  return kCategories[static_cast<std::size_t>(c)].second;
}

inline std::optional<Task> parse_task(std::string_view name) {
  for (const auto& t : kTasks)
    if (t.name == name) return t.task;
  return std::nullopt;
}

inline std::optional<Category> parse_category(std::string_view name) {
  for (const auto& [c, n] : kCategories)
    if (n == name) return c;
  return std::nullopt;
}

inline std::string_view metric_name(MetricKind m) {
  switch (m) {
    case MetricKind::ExactMatch: return "exact_match";
    case MetricKind::RougeL: return "rouge_l";
    case MetricKind::RougeLRecall: return "rouge_l_recall";
    case MetricKind::Jaccard: return "jaccard";
  }
  return "?";
}

inline std::optional<MetricKind> parse_metric(std::string_view s) {
  for (auto m : {MetricKind::ExactMatch, MetricKind::RougeL,
                 MetricKind::RougeLRecall, MetricKind::Jaccard})
    if (metric_name(m) == s) return m;
  return std::nullopt;
}

/// Tasks whose context length is set by an operation count rather than a
/// token budget.
inline bool is_step_sized(Task t) {
  return t == Task::QuantityState || t == Task::SetState ||
         t == Task::TheoryOfMind;
}

// ---------------------------------------------------------------------------
// Generation parameters

enum class Label { Positive, Negative };
enum class Replacement { Word, Delete };
enum class UpdateFn { Add3, Subtract1, Multiply2 };
enum class ListChoice { First, Second };
enum class IterateFrom { Last, First };

NLOHMANN_JSON_SERIALIZE_ENUM(Label, {{Label::Positive, "positive"},
                                     {Label::Negative, "negative"}})
NLOHMANN_JSON_SERIALIZE_ENUM(Replacement, {{Replacement::Word, "word"},
                                           {Replacement::Delete, "null"}})
NLOHMANN_JSON_SERIALIZE_ENUM(UpdateFn, {{UpdateFn::Add3, "add3"},
                                        {UpdateFn::Subtract1, "subtract1"},
                                        {UpdateFn::Multiply2, "multiply2"}})
NLOHMANN_JSON_SERIALIZE_ENUM(ListChoice, {{ListChoice::First, "first"},
                                          {ListChoice::Second, "second"}})
NLOHMANN_JSON_SERIALIZE_ENUM(IterateFrom, {{IterateFrom::Last, "last"},
                                           {IterateFrom::First, "first"}})

inline std::int64_t apply_update(UpdateFn f, std::int64_t x) {
  switch (f) {
    case UpdateFn::Add3: return x + 3;
    case UpdateFn::Subtract1: return x - 1;
    case UpdateFn::Multiply2: return x * 2;
  }
  return x;
}

inline void to_json(Json& j, const TokenBudget& b) {
  const bool words = b.estimator.kind == TokenEstimator::Kind::WordsPerToken;
  j = Json{{"target", b.target_tokens},
           {"tolerance", b.tolerance_fraction},
           {"estimator", words ? "words_per_token" : "chars_per_token"},
           {"ratio", std::to_string(b.estimator.num) + "/" +
                         std::to_string(b.estimator.den)}};
}

inline void from_json(const Json& j, TokenBudget& b) {
  b.target_tokens = j.at("target").get<std::uint64_t>();
  b.tolerance_fraction = j.value("tolerance", 0.10);
  auto est = j.value("estimator", std::string("words_per_token"));
  auto ratio = j.value("ratio", std::string("4/3"));
  auto parts = text::split(ratio, "/");
  auto num = text::parse_int(parts[0]);
  auto den = parts.size() > 1 ? text::parse_int(parts[1]) : std::optional<std::int64_t>(1);
  if (!num || !den || *num <= 0 || *den <= 0)
    throw InvalidParams("bad estimator ratio '" + ratio + "'");
  if (est == "words_per_token")
    b.estimator = TokenEstimator::words_per_token(*num, *den);
  else if (est == "chars_per_token")
    b.estimator = TokenEstimator::chars_per_token(*num, *den);
  else
    throw InvalidParams("unknown estimator '" + est + "'");
}

/// Parameters for one grid point. Only the fields relevant to the task are
/// set; `gibberish` and `prompt_variant` apply to every task.
struct GenParams {
  std::optional<TokenBudget> token_budget;
  std::optional<double> query_depth;
  std::optional<double> second_depth;
  std::optional<Label> label;
  std::optional<std::int64_t> sequence_length;
  std::optional<std::int64_t> batch_size;
  std::optional<double> density;
  std::optional<std::int64_t> nth;
  std::optional<Replacement> replacement;
  std::optional<UpdateFn> function;
  std::optional<std::int64_t> repetition;
  std::optional<std::int64_t> n_attributes;
  std::optional<std::int64_t> num_diff_words;
  std::optional<ListChoice> chosen_list;
  std::optional<std::int64_t> words_per_group;
  std::optional<double> pct_difference;
  std::optional<std::int64_t> pattern_length;
  std::optional<double> cutoff_depth;
  std::optional<std::int64_t> num_groups;
  std::optional<std::int64_t> num_turns;
  std::optional<std::int64_t> num_steps;
  std::optional<std::int64_t> set_size;
  std::optional<std::int64_t> num_blocks;
  std::optional<std::int64_t> num_agents;
  std::optional<IterateFrom> iterate_from;
  bool gibberish = false;
  std::string prompt_variant = "v1";

  bool operator==(const GenParams&) const = default;
};

/// Calls f(name, field) for every optional field, in declaration order.
template <class P, class F>
void for_each_field(P& p, F&& f) {
  f("token_budget", p.token_budget);
  f("query_depth", p.query_depth);
  f("second_depth", p.second_depth);
  f("label", p.label);
  f("sequence_length", p.sequence_length);
  f("batch_size", p.batch_size);
  f("density", p.density);
  f("nth", p.nth);
  f("replacement", p.replacement);
  f("function", p.function);
  f("repetition", p.repetition);
  f("n_attributes", p.n_attributes);
  f("num_diff_words", p.num_diff_words);
  f("chosen_list", p.chosen_list);
  f("words_per_group", p.words_per_group);
  f("pct_difference", p.pct_difference);
  f("pattern_length", p.pattern_length);
  f("cutoff_depth", p.cutoff_depth);
  f("num_groups", p.num_groups);
  f("num_turns", p.num_turns);
  f("num_steps", p.num_steps);
  f("set_size", p.set_size);
  f("num_blocks", p.num_blocks);
  f("num_agents", p.num_agents);
  f("iterate_from", p.iterate_from);
}

inline void to_json(Json& j, const GenParams& p) {
  j = Json::object();
  for_each_field(p, [&](std::string_view name, const auto& field) {
    if (field) j[std::string(name)] = *field;
  });
  j["gibberish"] = p.gibberish;
  j["prompt_variant"] = p.prompt_variant;
}

/// Sets one named field from a JSON value. Unknown names throw InvalidParams.
inline void set_param(GenParams& p, std::string_view name, const Json& value) {
  if (name == "gibberish") {
    p.gibberish = value.get<bool>();
    return;
  }
  if (name == "prompt_variant") {
    p.prompt_variant = value.get<std::string>();
    return;
  }
  bool found = false;
  for_each_field(p, [&](std::string_view n, auto& field) {
    if (n != name) return;
    found = true;
    using T = typename std::decay_t<decltype(field)>::value_type;
    try {
      field = value.get<T>();
    } catch (const nlohmann::json::exception& e) {
      throw InvalidParams("bad value for '" + std::string(name) +
                          "': " + e.what());
    }
  });
  if (!found) throw InvalidParams("unknown parameter '" + std::string(name) + "'");
}

inline void from_json(const Json& j, GenParams& p) {
  p = GenParams{};
  for (auto it = j.begin(); it != j.end(); ++it) set_param(p, it.key(), it.value());
}

/// Fields a task reads (beyond gibberish / prompt_variant).
inline std::vector<std::string_view> relevant_fields(Task t) {
  switch (t) {
    case Task::StringSearchWord: return {"token_budget", "query_depth", "label"};
    case Task::StringSearchSeq: return {"token_budget", "sequence_length", "label"};
    case Task::KeyValueSearch: return {"token_budget", "query_depth"};
    case Task::BatchSearch: return {"token_budget", "batch_size"};
    case Task::SnapshotWords:
    case Task::SnapshotNumbers: return {"token_budget"};
    case Task::ReplaceAll: return {"token_budget", "density", "replacement"};
    case Task::OverwritePositions: return {"token_budget", "nth", "replacement"};
    case Task::FunctionalUpdates: return {"token_budget", "function"};
    case Task::ComparePositions: return {"token_budget", "query_depth", "second_depth"};
    case Task::FindDuplicates:
    case Task::Count: return {"token_budget", "repetition"};
    case Task::CheckAssociation: return {"token_budget", "n_attributes", "label"};
    case Task::CompareTwoLists: return {"token_budget", "num_diff_words", "chosen_list"};
    case Task::IdentifyOddGroup: return {"token_budget", "words_per_group", "pct_difference"};
    case Task::PatchDifference: return {"token_budget", "pattern_length", "cutoff_depth", "nth"};
    case Task::GroupMembership: return {"token_budget", "num_groups", "query_depth"};
    case Task::GroupAssociation: return {"token_budget", "num_groups", "label"};
    case Task::GroupAssociationAlternating:
      return {"token_budget", "num_groups", "num_turns", "label"};
    case Task::Iterate: return {"token_budget", "num_groups", "iterate_from"};
    case Task::QuantityState: return {"num_steps"};
    case Task::SetState: return {"num_steps", "set_size"};
    case Task::DataBlocks: return {"token_budget", "num_blocks", "num_turns"};
    case Task::TheoryOfMind: return {"num_steps", "num_agents"};
  }
  return {};
}

/// Fields that may be left unset (they have a task-level default).
inline bool field_optional(Task t, std::string_view name) {
  return t == Task::Iterate && name == "iterate_from";
}

/// Rejects extraneous fields, missing required fields, and out-of-range
/// fractions/counts.
inline void validate_params(Task t, const GenParams& p) {
  const auto rel = relevant_fields(t);
  auto relevant = [&](std::string_view n) {
    return std::find(rel.begin(), rel.end(), n) != rel.end();
  };
  for_each_field(p, [&](std::string_view name, const auto& field) {
    using T = typename std::decay_t<decltype(field)>::value_type;
    if (field && !relevant(name))
      throw InvalidParams("parameter '" + std::string(name) +
                          "' does not apply to task " +
                          std::string(task_name(t)));
    if (!field && relevant(name) && !field_optional(t, name))
      throw InvalidParams("task " + std::string(task_name(t)) +
                          " requires parameter '" + std::string(name) + "'");
    if constexpr (std::is_same_v<T, double>) {
      if (field && (*field < 0.0 || *field > 1.0))
        throw InvalidParams("parameter '" + std::string(name) +
                            "' must lie in [0, 1]");
    } else if constexpr (std::is_same_v<T, std::int64_t>) {
      if (field && *field < 1)
        throw InvalidParams("parameter '" + std::string(name) +
                            "' must be at least 1");
    }
  });
  if (p.token_budget && p.token_budget->target_tokens == 0)
    throw InvalidParams("token budget must be positive");
  if (p.prompt_variant != "v1" && p.prompt_variant != "v2")
    throw InvalidParams("unknown prompt variant '" + p.prompt_variant + "'");
}

/// "name=value,name=value" over the given fields (strings unquoted).
inline std::string canonical_params(const GenParams& p,
                                    const std::vector<std::string>& names) {
  Json j = p;
  std::string out;
  for (const auto& n : names) {
    if (!j.contains(n)) continue;
    if (!out.empty()) out += ",";
    const auto& v = j[n];
    out += n + "=" + (v.is_string() ? v.get<std::string>() : v.dump());
  }
  return out.empty() ? "_" : out;
}

// ---------------------------------------------------------------------------
// Answers

struct Binary {
  bool yes = false;
  bool operator==(const Binary&) const = default;
};
struct Text {
  std::string value;
  bool operator==(const Text&) const = default;
};
struct OrderedList {
  std::vector<std::string> items;
  bool operator==(const OrderedList&) const = default;
};
/// Sorted and duplicate-free; build with make_word_set.
struct WordSet {
  std::vector<std::string> items;
  bool operator==(const WordSet&) const = default;
};
struct Integer {
  std::int64_t value = 0;
  bool operator==(const Integer&) const = default;
};
/// Agent name -> held items, in agent order; item lists sorted.
struct AgentSets {
  std::vector<std::pair<std::string, std::vector<std::string>>> agents;
  bool operator==(const AgentSets&) const = default;
};

using Answer = std::variant<Binary, Text, OrderedList, WordSet, Integer, AgentSets>;

inline WordSet make_word_set(std::vector<std::string> items) {
  std::sort(items.begin(), items.end());
  items.erase(std::unique(items.begin(), items.end()), items.end());
  return WordSet{std::move(items)};
}

inline std::string_view answer_kind(const Answer& a) {
  static constexpr std::array<std::string_view, 6> names = {
      "binary", "text", "ordered_list", "word_set", "integer", "agent_sets"};
  return names[a.index()];
}

/// The canonical textual form of an answer; a response equal to it scores 1.
inline std::string render(const Answer& a) {
  struct Visitor {
    std::string operator()(const Binary& b) const { return b.yes ? "yes" : "no"; }
    std::string operator()(const Text& t) const { return t.value; }
    std::string operator()(const OrderedList& l) const { return text::join(l.items, ", "); }
    std::string operator()(const WordSet& s) const { return text::join(s.items, ", "); }
    std::string operator()(const Integer& i) const { return std::to_string(i.value); }
    std::string operator()(const AgentSets& s) const {
      std::string out;
      for (std::size_t i = 0; i < s.agents.size(); ++i) {
        if (i) out += "\n";
        out += s.agents[i].first + ":";
        if (!s.agents[i].second.empty())
          out += " " + text::join(s.agents[i].second, ", ");
      }
      return out;
    }
  };
  return std::visit(Visitor{}, a);
}

inline Json answer_to_json(const Answer& a) {
  Json value;
  std::visit(
      [&](const auto& v) {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, Binary>) value = v.yes ? "yes" : "no";
        else if constexpr (std::is_same_v<T, Text>) value = v.value;
        else if constexpr (std::is_same_v<T, OrderedList> || std::is_same_v<T, WordSet>)
          value = v.items;
        else if constexpr (std::is_same_v<T, Integer>) value = v.value;
        else {
          value = Json::object();
          for (const auto& [name, items] : v.agents) value[name] = items;
        }
      },
      a);
  return Json{{"kind", answer_kind(a)}, {"value", value}};
}

inline Answer answer_from_json(const Json& j) {
  const auto kind = j.at("kind").get<std::string>();
  const auto& v = j.at("value");
  if (kind == "binary") {
    auto s = v.get<std::string>();
    if (s != "yes" && s != "no") throw ResponseMalformed("binary answer must be yes/no");
    return Binary{s == "yes"};
  }
  if (kind == "text") return Text{v.get<std::string>()};
  if (kind == "ordered_list") return OrderedList{v.get<std::vector<std::string>>()};
  if (kind == "word_set") return make_word_set(v.get<std::vector<std::string>>());
  if (kind == "integer") return Integer{v.get<std::int64_t>()};
  if (kind == "agent_sets") {
    AgentSets s;
    for (auto it = v.begin(); it != v.end(); ++it)
      s.agents.emplace_back(it.key(), make_word_set(it.value().get<std::vector<std::string>>()).items);
    return s;
  }
  throw ResponseMalformed("unknown answer kind '" + kind + "'");
}

// ---------------------------------------------------------------------------
// Test cases

struct TestCase {
  std::string id;
  Task task = Task::StringSearchWord;
  GenParams params;
  std::string context;
  std::string instruction;
  Answer reference;
  MetricKind metric = MetricKind::ExactMatch;
  Seed seed;

  bool operator==(const TestCase&) const = default;
};

inline Json case_to_json(const TestCase& c) {
  Json seed_path = Json::array();
  seed_path.push_back(c.seed.master);
  for (const auto& p : c.seed.path) seed_path.push_back(p);
  return Json{{"schema_version", kSchemaVersion},
              {"id", c.id},
              {"category", category_name(category_of(c.task))},
              {"task", task_name(c.task)},
              {"params", c.params},
              {"context", c.context},
              {"instruction", c.instruction},
              {"reference", answer_to_json(c.reference)},
              {"metric", metric_name(c.metric)},
              {"seed_path", seed_path}};
}

inline TestCase case_from_json(const Json& j) {
  const auto version = j.at("schema_version").get<int>();
  if (version != kSchemaVersion)
    throw SchemaVersionMismatch("unsupported schema_version " +
                                std::to_string(version));
  TestCase c;
  c.id = j.at("id").get<std::string>();
  auto task = parse_task(j.at("task").get<std::string>());
  if (!task) throw ResponseMalformed("unknown task " + j.at("task").dump());
  c.task = *task;
  c.params = j.at("params").get<GenParams>();
  c.context = j.at("context").get<std::string>();
  c.instruction = j.at("instruction").get<std::string>();
  c.reference = answer_from_json(j.at("reference"));
  auto metric = parse_metric(j.at("metric").get<std::string>());
  if (!metric) throw ResponseMalformed("unknown metric " + j.at("metric").dump());
  c.metric = *metric;
  const auto& sp = j.at("seed_path");
  if (!sp.is_array() || sp.empty()) throw ResponseMalformed("seed_path must be a non-empty array");
  c.seed.master = sp[0].get<std::uint64_t>();
  for (std::size_t i = 1; i < sp.size(); ++i) c.seed.path.push_back(sp[i].get<std::string>());
  return c;
}

}  // namespace memprobe
