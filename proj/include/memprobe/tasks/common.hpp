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

#pragma once

#include <cmath>
#include <string>
#include <unordered_set>
#include <utility>
#include <vector>

#include "memprobe/corpus.hpp"
#include "memprobe/model.hpp"
#include "memprobe/text.hpp"

namespace memprobe::tasks {

/// Placeholder word of the vocabulary's mean length, used to size contexts
/// before real words are drawn.
inline std::string probe_word(const Vocabulary& vocab) {
  return std::string(vocab.mean_length(), 'x');
}

inline const TokenBudget& budget_of(const GenParams& p) {
  if (!p.token_budget) throw InvalidParams("token_budget is required");
  return *p.token_budget;
}

inline bool v2(const GenParams& p) { return p.prompt_variant == "v2"; }

/// floor(depth * (n - 1)), the index a depth fraction maps to among n slots.
inline std::size_t depth_index(double depth, std::size_t n) {
  if (n == 0) return 0;
  auto idx = static_cast<std::size_t>(std::floor(depth * static_cast<double>(n - 1)));
  return std::min(idx, n - 1);
}

inline std::size_t round_count(double x) {
  return static_cast<std::size_t>(std::llround(x));
}

inline std::string words_line(const std::vector<std::string>& w) {
  return text::join(w, " ");
}

inline std::string comma_list(const std::vector<std::string>& w) {
  return text::join(w, ", ");
}

/// Renders "label: a, b, c; label: d, e" from (label, members) segments.
inline std::string labeled_segments(
    const std::vector<std::pair<std::string, std::vector<std::string>>>& segs) {
  std::string out;
  for (std::size_t i = 0; i < segs.size(); ++i) {
    if (i) out += "; ";
    out += segs[i].first + ": " + comma_list(segs[i].second);
  }
  return out;
}

/// Inverse of labeled_segments. Segments without a ':' are skipped.
inline std::vector<std::pair<std::string, std::vector<std::string>>> parse_labeled_segments(
    const std::string& s) {
  std::vector<std::pair<std::string, std::vector<std::string>>> out;
  for (const auto& seg : text::split(s, ";")) {
    const auto colon = seg.find(':');
    if (colon == std::string::npos) continue;
    std::vector<std::string> members;
    for (const auto& m : text::split(seg.substr(colon + 1), ",")) {
      auto t = text::trim(m);
      if (!t.empty()) members.push_back(std::move(t));
    }
    out.emplace_back(text::trim(seg.substr(0, colon)), std::move(members));
  }
  return out;
}

inline std::unordered_set<std::string> as_set(const std::vector<std::string>& v) {
  return {v.begin(), v.end()};
}

inline TestCase make_case(Task task, const GenParams& params, const Seed& seed,
                          std::string context, std::string instruction,
                          Answer reference) {
  TestCase c;
  c.task = task;
  c.params = params;
  c.context = std::move(context);
  c.instruction = std::move(instruction);
  c.reference = std::move(reference);
  c.metric = metric_of(task);
  c.seed = seed;
  return c;
}

inline std::int64_t required(const std::optional<std::int64_t>& v,
                             std::string_view name) {
  if (!v) throw InvalidParams("missing parameter '" + std::string(name) + "'");
  return *v;
}

inline double required(const std::optional<double>& v, std::string_view name) {
  if (!v) throw InvalidParams("missing parameter '" + std::string(name) + "'");
  return *v;
}

template <class E>
E required(const std::optional<E>& v, std::string_view name) {
  if (!v) throw InvalidParams("missing parameter '" + std::string(name) + "'");
  return *v;
}

}  // namespace memprobe::tasks
