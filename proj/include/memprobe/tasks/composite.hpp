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

// Composite tests: suffix queries over interleaved labeled blocks, and
// per-agent basket tracking with swaps.
//
// Agent steps render one per line:
//
//   Step 1: Alice adds apple, pear to their own basket.
//   Step 2: Bob removes kiwi from their own basket.
//   Step 3: Bob swaps berry with Alice in exchange for banana.
//
// parse_agent_script also reads the compact form
// "Alice: add apple, pear, remove orange; Bob: swap berry with Alice for banana".

#pragma once

#include <algorithm>
#include <map>
#include <regex>
#include <set>
#include <string>
#include <vector>

#include "memprobe/tasks/sets_lists.hpp"
#include "memprobe/tasks/stateful.hpp"

namespace memprobe::tasks {

struct BlockStream {
  std::vector<std::string> labels;
  Segments blocks;
  std::string query_label;
  std::string query_element;
};

/// Elements after `element` in the concatenation of `label`'s segments.
inline std::vector<std::string> block_suffix(const Segments& blocks, const std::string& label,
                                             const std::string& element) {
  std::vector<std::string> joined;
  for (const auto& [l, members] : blocks)
    if (l == label) joined.insert(joined.end(), members.begin(), members.end());
  auto it = std::find(joined.begin(), joined.end(), element);
  if (it == joined.end()) return {};
  return {it + 1, joined.end()};
}

inline TestCase gen_data_blocks(const GenParams& params, const Vocabulary& vocab,
                                const Seed& seed) {
  const auto& budget = budget_of(params);
  const auto k = static_cast<std::size_t>(required(params.num_blocks, "num_blocks"));
  const auto turns = static_cast<std::size_t>(required(params.num_turns, "num_turns"));
  auto rng = seed.rng();

  const auto m = detail::fit_members(budget, vocab, 'L', k, std::max<std::size_t>(2, turns), turns);
  auto groups = detail::random_groups(vocab, 'L', k, m, rng);
  BlockStream stream;
  stream.labels = groups.labels;
  stream.blocks = groups.alternating(turns);
  const auto g = rng.below(k);
  stream.query_label = groups.labels[g];
  stream.query_element = groups.members[g][rng.below(m - 1)];

  auto context = labeled_segments(stream.blocks);
  require_in_band(context, budget);
  auto reference = block_suffix(stream.blocks, stream.query_label, stream.query_element);
  std::string instruction =
      (v2(params) ? "Collect every element of list " + text::quote(stream.query_label) +
                        " that comes after the element " + text::quote(stream.query_element) +
                        ", across all of its blocks."
                  : "For the list labeled " + text::quote(stream.query_label) +
                        ", return all the elements that appear after the element " +
                        text::quote(stream.query_element) + " in the same list, in order.") +
      " Answer with the words only, separated by commas.";
  return make_case(Task::DataBlocks, params, seed, std::move(context), std::move(instruction),
                   OrderedList{std::move(reference)});
}

struct AgentOp {
  enum class Kind { Add, Remove, Swap };
  Kind kind = Kind::Add;
  std::vector<std::string> items;  // Add / Remove
  std::string give;                // Swap
  std::string with;
  std::string receive;
  bool operator==(const AgentOp&) const = default;
};

struct AgentScript {
  std::vector<std::string> agents;
  std::vector<std::pair<std::string, AgentOp>> steps;
};

inline const std::vector<std::string>& agent_pool() {
  static const std::vector<std::string> names = {"Alice", "Bob", "Charley", "Dana"};
  return names;
}

inline constexpr std::size_t kAgentBasketCap = 8;

/// Left fold over the script. Removing an absent item is a no-op; a swap
/// whose items are not held throws InvalidSwap.
inline AgentSets simulate_agents(const AgentScript& script) {
  std::map<std::string, std::set<std::string>> state;
  for (const auto& a : script.agents) state[a];
  for (std::size_t i = 0; i < script.steps.size(); ++i) {
    const auto& [agent, op] = script.steps[i];
    auto& mine = state[agent];
    switch (op.kind) {
      case AgentOp::Kind::Add:
        mine.insert(op.items.begin(), op.items.end());
        break;
      case AgentOp::Kind::Remove:
        for (const auto& it : op.items) mine.erase(it);
        break;
      case AgentOp::Kind::Swap: {
        auto& theirs = state[op.with];
        if (!mine.count(op.give))
          throw InvalidSwap(i + 1, agent + " does not hold " + op.give);
        if (!theirs.count(op.receive))
          throw InvalidSwap(i + 1, op.with + " does not hold " + op.receive);
        mine.erase(op.give);
        theirs.erase(op.receive);
        mine.insert(op.receive);
        theirs.insert(op.give);
        break;
      }
    }
  }
  AgentSets out;
  for (const auto& a : script.agents)
    out.agents.emplace_back(a, std::vector<std::string>(state[a].begin(), state[a].end()));
  return out;
}

inline std::string render_agent_step(std::size_t step, const std::string& agent,
                                     const AgentOp& op) {
  std::string s = "Step " + std::to_string(step) + ": " + agent;
  switch (op.kind) {
    case AgentOp::Kind::Add:
      return s + " adds " + comma_list(op.items) + " to their own basket.";
    case AgentOp::Kind::Remove:
      return s + " removes " + comma_list(op.items) + " from their own basket.";
    case AgentOp::Kind::Swap:
      return s + " swaps " + op.give + " with " + op.with + " in exchange for " + op.receive + ".";
  }
  return s;
}

namespace detail {

inline std::vector<std::string> comma_items(const std::string& s) {
  std::vector<std::string> out;
  for (const auto& piece : text::split(s, ",")) {
    auto t = text::trim(piece);
    if (!t.empty()) out.push_back(std::move(t));
  }
  return out;
}

/// "add a, b, remove c, swap d with Bob for e" spoken by one agent.
inline void parse_compact_ops(const std::string& agent, const std::string& body,
                              std::vector<std::pair<std::string, AgentOp>>& out) {
  static const std::regex swap_re(R"(^swap\s+(\S+)\s+with\s+(\S+)\s+(?:in\s+exchange\s+)?for\s+(\S+)$)",
                                  std::regex::icase);
  AgentOp* current = nullptr;
  for (auto piece : comma_items(body)) {
    if (!piece.empty() && piece.back() == '.') piece.pop_back();
    std::smatch m;
    const auto lower = text::to_lower(piece);
    if (std::regex_match(piece, m, swap_re)) {
      AgentOp op{AgentOp::Kind::Swap, {}, m[1].str(), m[2].str(), m[3].str()};
      out.emplace_back(agent, std::move(op));
      current = nullptr;
    } else if (text::starts_with(lower, "add ") || text::starts_with(lower, "remove ")) {
      const bool add = text::starts_with(lower, "add ");
      AgentOp op;
      op.kind = add ? AgentOp::Kind::Add : AgentOp::Kind::Remove;
      op.items.push_back(text::trim(piece.substr(add ? 4 : 7)));
      out.emplace_back(agent, std::move(op));
      current = &out.back().second;
    } else if (current) {
      current->items.push_back(piece);
    }
  }
}

}  // namespace detail

/// Reads both the line-per-step rendering and the compact form. Agents are
/// listed in order of first appearance unless `agents` is given.
inline AgentScript parse_agent_script(const std::string& text,
                                      std::vector<std::string> agents = {}) {
  static const std::regex step_prefix(R"(^\s*step\s+\d+\s*:\s*)", std::regex::icase);
  static const std::regex add_re(R"(^(\S+)\s+adds\s+(.*?)\s+to\s+their\s+own\s+basket\.?$)");
  static const std::regex remove_re(
      R"(^(\S+)\s+removes\s+(.*?)\s+from\s+their\s+own\s+basket\.?$)");
  static const std::regex swap_re(
      R"(^(\S+)\s+swaps\s+(\S+)\s+with\s+(\S+)\s+in\s+exchange\s+for\s+(\S+?)\.?$)");

  AgentScript script;
  std::string normalized = text;
  std::replace(normalized.begin(), normalized.end(), ';', '\n');
  for (const auto& raw : text::split(normalized, "\n")) {
    auto line = std::regex_replace(text::trim(raw), step_prefix, "");
    if (line.empty()) continue;
    std::smatch m;
    if (std::regex_match(line, m, add_re)) {
      script.steps.emplace_back(m[1].str(),
                                AgentOp{AgentOp::Kind::Add, detail::comma_items(m[2].str()), {}, {}, {}});
    } else if (std::regex_match(line, m, remove_re)) {
      script.steps.emplace_back(
          m[1].str(), AgentOp{AgentOp::Kind::Remove, detail::comma_items(m[2].str()), {}, {}, {}});
    } else if (std::regex_match(line, m, swap_re)) {
      script.steps.emplace_back(m[1].str(),
                                AgentOp{AgentOp::Kind::Swap, {}, m[2].str(), m[3].str(), m[4].str()});
    } else if (const auto colon = line.find(':'); colon != std::string::npos) {
      detail::parse_compact_ops(text::trim(line.substr(0, colon)), line.substr(colon + 1),
                                script.steps);
    }
  }
  if (agents.empty()) {
    for (const auto& [agent, op] : script.steps) {
      for (const auto* name : {&agent, &op.with}) {
        if (name->empty()) continue;
        if (std::find(agents.begin(), agents.end(), *name) == agents.end()) agents.push_back(*name);
      }
    }
  }
  script.agents = std::move(agents);
  return script;
}

inline TestCase gen_theory_of_mind(const GenParams& params, const Vocabulary& vocab,
                                   const Seed& seed) {
  const auto steps = static_cast<std::size_t>(required(params.num_steps, "num_steps"));
  const auto n_agents = static_cast<std::size_t>(required(params.num_agents, "num_agents"));
  if (n_agents < 1 || n_agents > agent_pool().size())
    throw InvalidParams("num_agents must be between 1 and " + std::to_string(agent_pool().size()));
  auto rng = seed.rng();

  AgentScript script;
  script.agents.assign(agent_pool().begin(), agent_pool().begin() + static_cast<std::ptrdiff_t>(n_agents));
  auto free_items = sample_words(vocab, 2 * kAgentBasketCap * n_agents, rng);
  std::vector<std::vector<std::string>> held(n_agents);
  std::vector<std::string> lines;
  lines.reserve(steps);

  auto take = [&](std::vector<std::string>& from, std::size_t k) {
    std::vector<std::string> out;
    auto idx = rng.choose(from.size(), k);
    for (auto i : idx) out.push_back(from[i]);
    for (auto it = idx.rbegin(); it != idx.rend(); ++it)
      from.erase(from.begin() + static_cast<std::ptrdiff_t>(*it));
    rng.shuffle(out);
    return out;
  };

  for (std::size_t s = 0; s < steps; ++s) {
    const auto a = rng.below(n_agents);
    auto& mine = held[a];
    std::vector<std::size_t> partners;
    for (std::size_t b = 0; b < n_agents; ++b)
      if (b != a && !held[b].empty()) partners.push_back(b);

    std::vector<AgentOp::Kind> options;
    if (mine.size() < kAgentBasketCap && !free_items.empty()) options.push_back(AgentOp::Kind::Add);
    if (!mine.empty()) options.push_back(AgentOp::Kind::Remove);
    if (!mine.empty() && !partners.empty()) options.push_back(AgentOp::Kind::Swap);

    AgentOp op;
    op.kind = rng.pick(options);
    switch (op.kind) {
      case AgentOp::Kind::Add: {
        const auto k = std::min({kMaxItemsPerOp, kAgentBasketCap - mine.size(), free_items.size()});
        op.items = take(free_items, static_cast<std::size_t>(rng.between(1, static_cast<std::int64_t>(k))));
        mine.insert(mine.end(), op.items.begin(), op.items.end());
        break;
      }
      case AgentOp::Kind::Remove: {
        const auto k = std::min(kMaxItemsPerOp, mine.size());
        op.items = take(mine, static_cast<std::size_t>(rng.between(1, static_cast<std::int64_t>(k))));
        free_items.insert(free_items.end(), op.items.begin(), op.items.end());
        break;
      }
      case AgentOp::Kind::Swap: {
        const auto b = rng.pick(partners);
        auto& theirs = held[b];
        const auto gi = rng.below(mine.size());
        const auto ri = rng.below(theirs.size());
        op.give = mine[gi];
        op.receive = theirs[ri];
        op.with = script.agents[b];
        mine[gi] = op.receive;
        theirs[ri] = op.give;
        break;
      }
    }
    lines.push_back(render_agent_step(s + 1, script.agents[a], op));
    script.steps.emplace_back(script.agents[a], std::move(op));
  }

  AgentSets reference;
  for (std::size_t a = 0; a < n_agents; ++a)
    reference.agents.emplace_back(script.agents[a], make_word_set(held[a]).items);

  std::string instruction =
      "The people are " + text::join(script.agents, ", ") + ". Every basket starts empty. " +
      (v2(params) ? std::string("Track the steps above and give the contents of each "
                                "person's basket at the end.")
                  : std::string("Apply the steps above in order. Report the final items in "
                                "each person's basket.")) +
      " Answer with one line per person in the form Name: item, item.";
  return make_case(Task::TheoryOfMind, params, seed, text::join(lines, "\n"),
                   std::move(instruction), std::move(reference));
}

}  // namespace memprobe::tasks
