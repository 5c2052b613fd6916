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

// Scoring of free-form responses: exact match, ROUGE-L (F1 and recall) and
// Jaccard set overlap, over a shared token normalization.

#pragma once

#include <algorithm>
#include <cctype>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "memprobe/model.hpp"

namespace memprobe {

struct Score {
  double value = 0.0;
  MetricKind metric = MetricKind::ExactMatch;
  std::optional<std::string> note;
};

inline Json score_to_json(const Score& s) {
  Json j{{"value", s.value}, {"metric", metric_name(s.metric)}};
  if (s.note) j["note"] = *s.note;
  return j;
}

inline Score score_from_json(const Json& j) {
  Score s;
  s.value = j.at("value").get<double>();
  auto m = parse_metric(j.at("metric").get<std::string>());
  if (!m) throw ResponseMalformed("unknown metric " + j.at("metric").dump());
  s.metric = *m;
  if (j.contains("note")) s.note = j["note"].get<std::string>();
  return s;
}

/// Lowercased tokens. Whitespace, ',' and ';' separate tokens; punctuation
/// is stripped from token edges ('-' is kept so negative numbers survive).
inline std::vector<std::string> normalize(std::string_view s) {
  static constexpr std::string_view edge = ".,;:!?\"'()[]{}<>*`";
  std::vector<std::string> out;
  std::string cur;
  auto flush = [&] {
    const auto b = cur.find_first_not_of(edge);
    if (b != std::string::npos) {
      const auto e = cur.find_last_not_of(edge);
      out.push_back(cur.substr(b, e - b + 1));
    }
    cur.clear();
  };
  for (char ch : s) {
    if (text::is_space(ch) || ch == ',' || ch == ';')
      flush();
    else
      cur += static_cast<char>(std::tolower(static_cast<unsigned char>(ch)));
  }
  flush();
  return out;
}

inline constexpr std::size_t kLcsTokenCap = 8192;

/// Token-level longest common subsequence, two-row dynamic programme.
inline std::size_t lcs_length(std::span<const std::string> a, std::span<const std::string> b) {
  if (a.size() < b.size()) std::swap(a, b);
  std::vector<std::size_t> prev(b.size() + 1, 0), cur(b.size() + 1, 0);
  for (std::size_t i = 1; i <= a.size(); ++i) {
    for (std::size_t j = 1; j <= b.size(); ++j)
      cur[j] = a[i - 1] == b[j - 1] ? prev[j - 1] + 1 : std::max(prev[j], cur[j - 1]);
    std::swap(prev, cur);
  }
  return prev[b.size()];
}

enum class RougeMode { F1, Recall };

inline Score rouge_l(std::string_view reference, std::string_view response, RougeMode mode) {
  Score s;
  s.metric = mode == RougeMode::F1 ? MetricKind::RougeL : MetricKind::RougeLRecall;
  auto ref = normalize(reference);
  auto gen = normalize(response);
  if (ref.size() > kLcsTokenCap || gen.size() > kLcsTokenCap) {
    ref.resize(std::min(ref.size(), kLcsTokenCap));
    gen.resize(std::min(gen.size(), kLcsTokenCap));
    s.note = "truncated to " + std::to_string(kLcsTokenCap) + " tokens";
  }
  if (ref.empty() || gen.empty()) return s;
  const double lcs = static_cast<double>(lcs_length(ref, gen));
  const double r = lcs / static_cast<double>(ref.size());
  const double p = lcs / static_cast<double>(gen.size());
  if (mode == RougeMode::Recall)
    s.value = r;
  else
    s.value = p + r > 0 ? 2 * p * r / (p + r) : 0.0;
  return s;
}

inline Score exact_match(const Answer& reference, std::string_view response) {
  Score s;
  s.metric = MetricKind::ExactMatch;
  const auto got = normalize(response);
  if (const auto* b = std::get_if<Binary>(&reference)) {
    auto it = std::find_if(got.begin(), got.end(),
                           [](const std::string& t) { return t == "yes" || t == "no"; });
    if (it == got.end()) {
      s.note = "no yes/no token";
      return s;
    }
    s.value = (*it == "yes") == b->yes ? 1.0 : 0.0;
    return s;
  }
  const auto want = normalize(render(reference));
  if (got == want) {
    s.value = 1.0;
  } else if (!want.empty() && got.size() <= 10 && got.size() > want.size() &&
             std::equal(want.rbegin(), want.rend(), got.rbegin())) {
    s.value = 1.0;
    s.note = "tail rule";
  } else if (got.empty()) {
    s.note = "empty response";
  }
  return s;
}

/// Normalized tokens minus reserved harness words.
inline std::set<std::string> extract_items(std::string_view s) {
  std::set<std::string> out;
  for (auto& t : normalize(s))
    if (!reserved_words().count(t)) out.insert(std::move(t));
  return out;
}

inline double jaccard_sets(const std::set<std::string>& a, const std::set<std::string>& b) {
  if (a.empty() && b.empty()) return 1.0;
  std::size_t inter = 0;
  for (const auto& x : a) inter += b.count(x);
  return static_cast<double>(inter) / static_cast<double>(a.size() + b.size() - inter);
}

namespace detail {

inline std::set<std::string> item_set(const std::vector<std::string>& items) {
  std::set<std::string> out;
  for (const auto& i : items)
    for (auto& t : normalize(i)) out.insert(std::move(t));
  return out;
}

/// Text following "Name:" up to the next known agent header, if present.
inline std::optional<std::string> agent_section(std::string_view response,
                                                const std::string& agent,
                                                const std::vector<std::string>& agents) {
  const auto lower = text::to_lower(response);
  auto header_at = [&](const std::string& name, std::size_t from) -> std::size_t {
    const auto key = text::to_lower(name);
    for (auto pos = lower.find(key, from); pos != std::string::npos;
         pos = lower.find(key, pos + 1)) {
      if (pos > 0 && std::isalpha(static_cast<unsigned char>(lower[pos - 1]))) continue;
      auto after = pos + key.size();
      while (after < lower.size() && (lower[after] == '*' || lower[after] == ' ')) ++after;
      if (after < lower.size() && lower[after] == ':') return pos;
    }
    return std::string::npos;
  };
  const auto start = header_at(agent, 0);
  if (start == std::string::npos) return std::nullopt;
  const auto body = lower.find(':', start) + 1;
  std::size_t end = lower.size();
  for (const auto& other : agents) {
    if (other == agent) continue;
    const auto pos = header_at(other, body);
    if (pos != std::string::npos) end = std::min(end, pos);
  }
  return std::string(response.substr(body, end - body));
}

}  // namespace detail

inline Score jaccard(const Answer& reference, std::string_view response) {
  Score s;
  s.metric = MetricKind::Jaccard;
  if (const auto* as = std::get_if<AgentSets>(&reference)) {
    std::vector<std::string> names;
    for (const auto& [n, items] : as->agents) names.push_back(n);
    if (names.empty()) {
      s.value = 1.0;
      return s;
    }
    double total = 0.0;
    std::size_t missing = 0;
    for (const auto& [n, items] : as->agents) {
      auto section = detail::agent_section(response, n, names);
      if (!section) {
        ++missing;
        continue;
      }
      total += jaccard_sets(detail::item_set(items), extract_items(*section));
    }
    s.value = total / static_cast<double>(names.size());
    if (missing) s.note = std::to_string(missing) + " agent section(s) missing";
    return s;
  }
  std::set<std::string> ref;
  if (const auto* ws = std::get_if<WordSet>(&reference))
    ref = detail::item_set(ws->items);
  else
    ref = extract_items(render(reference));
  s.value = jaccard_sets(ref, extract_items(response));
  return s;
}

/// Scores a response with the case's metric.
inline Score score_case(const TestCase& c, std::string_view response) {
  switch (c.metric) {
    case MetricKind::ExactMatch: return exact_match(c.reference, response);
    case MetricKind::RougeL: return rouge_l(render(c.reference), response, RougeMode::F1);
    case MetricKind::RougeLRecall: return rouge_l(render(c.reference), response, RougeMode::Recall);
    case MetricKind::Jaccard: return jaccard(c.reference, response);
  }
  return Score{};
}

}  // namespace memprobe
