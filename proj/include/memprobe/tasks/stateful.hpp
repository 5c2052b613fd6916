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

// Stateful processing: a running quantity and a running set, each driven by
// a rendered sequence of operations.
//
// Contexts put one step per line:
//
//   Step 1: add 10 to total.
//   Step 2: subtract 2 from total.
//
//   Step 1: add apple, pear to the items in the basket.
//   Step 2: remove apple from the items in the basket.
//
// The parsers also accept the terse inline form ("add 10, subtract 2, add 7"
// and "add apple, pear; add orange; remove apple").

#pragma once

#include <algorithm>
#include <regex>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "memprobe/tasks/common.hpp"

namespace memprobe::tasks {

struct QuantityOp {
  enum class Kind { Add, Subtract };
  Kind kind = Kind::Add;
  std::int64_t amount = 0;
  bool operator==(const QuantityOp&) const = default;
};

struct SetOp {
  enum class Kind { Add, Remove };
  Kind kind = Kind::Add;
  std::vector<std::string> items;
  bool operator==(const SetOp&) const = default;
};

inline constexpr std::int64_t kMaxOperand = 20;
inline constexpr std::size_t kMaxItemsPerOp = 3;

/// Left fold over quantity operations.
inline std::int64_t simulate_ops(std::span<const QuantityOp> steps, std::int64_t initial) {
  for (const auto& op : steps)
    initial += op.kind == QuantityOp::Kind::Add ? op.amount : -op.amount;
  return initial;
}

/// Left fold over set operations. Adding a present item or removing an
/// absent one is a no-op.
inline WordSet simulate_ops(std::span<const SetOp> steps, const WordSet& initial) {
  std::set<std::string> state(initial.items.begin(), initial.items.end());
  for (const auto& op : steps) {
    for (const auto& item : op.items) {
      if (op.kind == SetOp::Kind::Add)
        state.insert(item);
      else
        state.erase(item);
    }
  }
  return WordSet{{state.begin(), state.end()}};
}

inline std::string render_quantity_step(std::size_t step, const QuantityOp& op) {
  const auto n = std::to_string(op.amount);
  return "Step " + std::to_string(step) + ": " +
         (op.kind == QuantityOp::Kind::Add ? "add " + n + " to total."
                                           : "subtract " + n + " from total.");
}

inline std::string render_set_step(std::size_t step, const SetOp& op) {
  return "Step " + std::to_string(step) + ": " +
         (op.kind == SetOp::Kind::Add ? "add " + comma_list(op.items) + " to the items in the basket."
                                      : "remove " + comma_list(op.items) +
                                            " from the items in the basket.");
}

/// Every "add N" / "subtract N" in reading order.
inline std::vector<QuantityOp> parse_quantity_ops(const std::string& text) {
  static const std::regex re(R"(\b(add|subtract)\s+(\d+))", std::regex::icase);
  std::vector<QuantityOp> out;
  for (auto it = std::sregex_iterator(text.begin(), text.end(), re); it != std::sregex_iterator();
       ++it) {
    const auto verb = text::to_lower((*it)[1].str());
    out.push_back({verb == "add" ? QuantityOp::Kind::Add : QuantityOp::Kind::Subtract,
                   *text::parse_int((*it)[2].str())});
  }
  return out;
}

/// Set operations from either the line-per-step or the ';'-separated form.
inline std::vector<SetOp> parse_set_ops(const std::string& text) {
  static const std::regex step_prefix(R"(^\s*step\s+\d+\s*:\s*)", std::regex::icase);
  static const std::regex op_re(
      R"(^(add|remove)\s+(.*?)(\s+(to|from)\s+the\s+items\s+in\s+the\s+basket)?\s*\.?\s*$)",
      std::regex::icase);
  std::vector<SetOp> out;
  std::string normalized = text;
  std::replace(normalized.begin(), normalized.end(), ';', '\n');
  for (const auto& raw : text::split(normalized, "\n")) {
    auto line = std::regex_replace(text::trim(raw), step_prefix, "");
    if (line.empty()) continue;
    std::smatch m;
    if (!std::regex_match(line, m, op_re)) continue;
    SetOp op;
    op.kind = text::to_lower(m[1].str()) == "add" ? SetOp::Kind::Add : SetOp::Kind::Remove;
    for (const auto& item : text::split(m[2].str(), ",")) {
      auto t = text::trim(item);
      if (!t.empty()) op.items.push_back(t);
    }
    out.push_back(std::move(op));
  }
  return out;
}

inline std::string quantity_instruction(const GenParams& p) {
  return v2(p) ? "Starting from 0, determine the final result after the operations. "
                 "Answer with the final number only."
               : "Starting from 0, apply the operations above in order. Your task is to "
                 "determine the final result of the operations. Answer with the final "
                 "number only.";
}

inline TestCase gen_quantity_state(const GenParams& params, const Seed& seed) {
  const auto steps = static_cast<std::size_t>(required(params.num_steps, "num_steps"));
  auto rng = seed.rng();

  std::int64_t running = 0;
  std::vector<std::string> lines;
  lines.reserve(steps);
  for (std::size_t i = 0; i < steps; ++i) {
    QuantityOp op;
    if (running == 0 || rng.coin()) {
      op = {QuantityOp::Kind::Add, rng.between(1, kMaxOperand)};
      running += op.amount;
    } else {
      op = {QuantityOp::Kind::Subtract, rng.between(1, std::min(kMaxOperand, running))};
      running -= op.amount;
    }
    lines.push_back(render_quantity_step(i + 1, op));
  }
  return make_case(Task::QuantityState, params, seed, text::join(lines, "\n"),
                   quantity_instruction(params), Integer{running});
}

inline TestCase gen_set_state(const GenParams& params, const Vocabulary& vocab,
                              const Seed& seed) {
  const auto steps = static_cast<std::size_t>(required(params.num_steps, "num_steps"));
  const auto cap = static_cast<std::size_t>(required(params.set_size, "set_size"));
  auto rng = seed.rng();

  const auto pool = sample_words(vocab, 2 * cap + 5, rng);
  std::vector<std::string> current;
  std::vector<std::string> lines;
  lines.reserve(steps);
  for (std::size_t i = 0; i < steps; ++i) {
    const bool last = i + 1 == steps;
    bool add;
    if (current.empty())
      add = true;
    else if (current.size() >= cap)
      add = false;
    else if (last && current.size() == 1)
      add = true;  // never finish on an empty set
    else
      add = rng.coin();

    SetOp op;
    if (add) {
      op.kind = SetOp::Kind::Add;
      std::vector<std::string> absent;
      for (const auto& w : pool)
        if (std::find(current.begin(), current.end(), w) == current.end()) absent.push_back(w);
      const auto k = static_cast<std::size_t>(
          rng.between(1, static_cast<std::int64_t>(std::min({kMaxItemsPerOp, cap - current.size()}))));
      for (auto idx : rng.choose(absent.size(), k)) op.items.push_back(absent[idx]);
      rng.shuffle(op.items);
      current.insert(current.end(), op.items.begin(), op.items.end());
    } else {
      op.kind = SetOp::Kind::Remove;
      std::size_t max_k = std::min(kMaxItemsPerOp, current.size());
      if (last) max_k = std::min(max_k, current.size() - 1);
      const auto k = static_cast<std::size_t>(rng.between(1, static_cast<std::int64_t>(max_k)));
      auto picked = rng.choose(current.size(), k);
      for (auto idx : picked) op.items.push_back(current[idx]);
      rng.shuffle(op.items);
      for (auto it = picked.rbegin(); it != picked.rend(); ++it)
        current.erase(current.begin() + static_cast<std::ptrdiff_t>(*it));
    }
    lines.push_back(render_set_step(i + 1, op));
  }

  std::string instruction =
      v2(params) ? "The basket starts empty. List the items in the basket after all the "
                   "steps. Answer with the items only, separated by commas."
                 : "The basket starts empty. Apply the steps above in order. Which items "
                   "are in the basket at the end? Answer with the items only, separated "
                   "by commas.";
  return make_case(Task::SetState, params, seed, text::join(lines, "\n"), std::move(instruction),
                   make_word_set(current));
}

}  // namespace memprobe::tasks
