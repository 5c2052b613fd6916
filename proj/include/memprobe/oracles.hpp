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

// Reference recomputation from rendered text alone. Each oracle reads the
// context and instruction of a case, never its params or seed, and rebuilds
// the answer without reusing generator bookkeeping.

#pragma once

#include <map>
#include <optional>
#include <regex>
#include <string>
#include <vector>

#include "memprobe/tasks/composite.hpp"
#include "memprobe/tasks/stateful.hpp"

namespace memprobe::oracle {

namespace detail {

inline std::string nth_quoted(const std::string& instruction, std::size_t i) {
  auto q = text::quoted(instruction);
  if (q.size() <= i) throw ResponseMalformed("instruction lacks quoted value #" + std::to_string(i));
  return q[i];
}

inline std::vector<std::string> words(const std::string& s) { return text::split_ws(s); }

inline std::vector<std::string> comma_words(const std::string& s) {
  std::vector<std::string> out;
  for (const auto& p : text::split(s, ",")) {
    auto t = text::trim(p);
    if (!t.empty()) out.push_back(std::move(t));
  }
  return out;
}

/// "every 3rd word" / "the 6th word that comes next" -> 3 / 6.
inline std::optional<std::size_t> ordinal_in(const std::string& s) {
  static const std::regex re(R"((\d+)(?:st|nd|rd|th)\b)");
  std::smatch m;
  if (!std::regex_search(s, m, re)) return std::nullopt;
  return static_cast<std::size_t>(std::stoul(m[1].str()));
}

inline std::vector<std::int64_t> numbers(const std::string& s) {
  std::vector<std::int64_t> out;
  for (const auto& w : words(s)) out.push_back(*text::parse_int(w));
  return out;
}

inline std::string join_numbers(const std::vector<std::int64_t>& v) {
  std::vector<std::string> s;
  for (auto x : v) s.push_back(std::to_string(x));
  return text::join(s, " ");
}

/// Label of the segment holding `w`, first match wins.
inline std::optional<std::string> label_of(const tasks::Segments& segs, const std::string& w) {
  for (const auto& [label, members] : segs)
    if (std::find(members.begin(), members.end(), w) != members.end()) return label;
  return std::nullopt;
}

inline Answer search_word(const TestCase& c) {
  const auto x = nth_quoted(c.instruction, 0);
  const auto ws = words(c.context);
  return Binary{std::find(ws.begin(), ws.end(), x) != ws.end()};
}

inline Answer search_seq(const TestCase& c) {
  const auto seq = words(nth_quoted(c.instruction, 0));
  const auto ws = words(c.context);
  return Binary{std::search(ws.begin(), ws.end(), seq.begin(), seq.end()) != ws.end()};
}

inline std::map<std::string, std::string> pairs(const std::string& context) {
  std::map<std::string, std::string> kv;
  for (const auto& item : comma_words(context)) {
    const auto colon = item.find(':');
    if (colon == std::string::npos) continue;
    kv.emplace(text::trim(item.substr(0, colon)), text::trim(item.substr(colon + 1)));
  }
  return kv;
}

inline Answer key_value(const TestCase& c) {
  const auto kv = pairs(c.context);
  return Text{kv.at(nth_quoted(c.instruction, 0))};
}

inline Answer batch(const TestCase& c) {
  const auto kv = pairs(c.context);
  std::vector<std::string> out;
  for (const auto& k : text::quoted(c.instruction)) out.push_back(kv.at(k));
  return OrderedList{std::move(out)};
}

inline Answer replace_all(const TestCase& c) {
  const auto q = text::quoted(c.instruction);
  const bool remove = c.instruction.find("remove every occurrence") != std::string::npos;
  std::vector<std::string> out;
  for (const auto& w : words(c.context)) {
    if (w != q.at(0))
      out.push_back(w);
    else if (!remove)
      out.push_back(q.at(1));
  }
  return Text{text::join(out, " ")};
}

inline Answer overwrite(const TestCase& c) {
  const auto k = ordinal_in(c.instruction).value();
  const auto q = text::quoted(c.instruction);
  const auto ws = words(c.context);
  std::vector<std::string> out;
  for (std::size_t i = 0; i < ws.size(); ++i) {
    if ((i + 1) % k != 0)
      out.push_back(ws[i]);
    else if (!q.empty())
      out.push_back(q[0]);
  }
  return Text{text::join(out, " ")};
}

inline Answer functional(const TestCase& c) {
  auto v = numbers(c.context);
  const auto& ins = c.instruction;
  for (auto& x : v) {
    if (ins.find("add 3") != std::string::npos)
      x += 3;
    else if (ins.find("subtract 1") != std::string::npos)
      x -= 1;
    else if (ins.find("multiply every number by 2") != std::string::npos)
      x *= 2;
    else
      throw ResponseMalformed("unrecognised update in instruction");
  }
  return Text{join_numbers(v)};
}

inline Answer compare_positions(const TestCase& c) {
  const auto ws = words(c.context);
  const auto x = std::find(ws.begin(), ws.end(), nth_quoted(c.instruction, 0));
  const auto y = std::find(ws.begin(), ws.end(), nth_quoted(c.instruction, 1));
  return Binary{x < y};
}

inline Answer duplicates(const TestCase& c) {
  std::map<std::string, int> counts;
  for (const auto& w : words(c.context)) ++counts[w];
  for (const auto& [w, n] : counts)
    if (n > 1) return Text{w};
  throw ResponseMalformed("no duplicated word");
}

inline Answer count(const TestCase& c) {
  const auto x = nth_quoted(c.instruction, 0);
  const auto ws = words(c.context);
  return Integer{static_cast<std::int64_t>(std::count(ws.begin(), ws.end(), x))};
}

inline Answer association(const TestCase& c) {
  const auto kv = pairs(c.context);
  return Binary{kv.at(nth_quoted(c.instruction, 0)) == kv.at(nth_quoted(c.instruction, 1))};
}

inline Answer two_lists(const TestCase& c) {
  std::vector<std::string> first, second;
  for (const auto& line : text::split(c.context, "\n")) {
    if (text::starts_with(line, "First list:")) first = comma_words(line.substr(11));
    if (text::starts_with(line, "Second list:")) second = comma_words(line.substr(12));
  }
  const auto f = c.instruction.find("first list");
  const auto s = c.instruction.find("second list");
  const bool chosen_first = f < s;
  const auto& a = chosen_first ? first : second;
  const auto& b = chosen_first ? second : first;
  std::vector<std::string> out;
  for (const auto& w : a)
    if (std::find(b.begin(), b.end(), w) == b.end()) out.push_back(w);
  return OrderedList{std::move(out)};
}

inline Answer odd_group(const TestCase& c) {
  auto segs = tasks::parse_labeled_segments(c.context);
  std::map<std::vector<std::string>, std::vector<std::string>> by_content;
  for (auto& [label, members] : segs) {
    std::sort(members.begin(), members.end());
    by_content[members].push_back(label);
  }
  if (by_content.size() == 1) return Text{"none"};
  for (const auto& [content, labels] : by_content)
    if (labels.size() == 1) return Text{labels[0]};
  throw ResponseMalformed("no unique odd group");
}

inline Answer patch(const TestCase& c) {
  const auto ws = words(c.context);
  std::size_t period = 1;
  for (; period < ws.size(); ++period) {
    bool ok = true;
    for (std::size_t i = 0; i + period < ws.size() && ok; ++i) ok = ws[i] == ws[i + period];
    if (ok) break;
  }
  const std::size_t k = c.instruction.find("next word") != std::string::npos
                            ? 1
                            : ordinal_in(c.instruction).value();
  return Text{ws[(ws.size() + k - 1) % period]};
}

inline Answer membership(const TestCase& c) {
  return Text{label_of(tasks::parse_labeled_segments(c.context), nth_quoted(c.instruction, 0)).value()};
}

inline Answer group_association(const TestCase& c) {
  const auto segs = tasks::parse_labeled_segments(c.context);
  return Binary{label_of(segs, nth_quoted(c.instruction, 0)).value() ==
                label_of(segs, nth_quoted(c.instruction, 1)).value()};
}

inline Answer iterate(const TestCase& c) {
  const bool last = c.instruction.find("last word") != std::string::npos;
  std::vector<std::string> out;
  for (const auto& [label, members] : tasks::parse_labeled_segments(c.context))
    out.push_back(last ? members.back() : members.front());
  return OrderedList{std::move(out)};
}

inline Answer data_blocks(const TestCase& c) {
  const auto label = nth_quoted(c.instruction, 0);
  const auto element = nth_quoted(c.instruction, 1);
  std::vector<std::string> joined;
  for (const auto& [l, members] : tasks::parse_labeled_segments(c.context))
    if (l == label) joined.insert(joined.end(), members.begin(), members.end());
  auto it = std::find(joined.begin(), joined.end(), element);
  if (it == joined.end()) throw ResponseMalformed("query element not in its list");
  return OrderedList{{it + 1, joined.end()}};
}

inline Answer theory_of_mind(const TestCase& c) {
  static const std::regex people(R"(The people are ([^.]*)\.)");
  std::smatch m;
  if (!std::regex_search(c.instruction, m, people))
    throw ResponseMalformed("instruction does not list the people");
  return tasks::simulate_agents(tasks::parse_agent_script(c.context, comma_words(m[1].str())));
}

}  // namespace detail

/// Rebuilds the reference of `c` from its context and instruction.
inline Answer recompute_reference(const TestCase& c) {
  using namespace detail;
  switch (c.task) {
    case Task::StringSearchWord: return search_word(c);
    case Task::StringSearchSeq: return search_seq(c);
    case Task::KeyValueSearch: return key_value(c);
    case Task::BatchSearch: return batch(c);
    case Task::SnapshotWords:
    case Task::SnapshotNumbers: return Text{text::join(words(c.context), " ")};
    case Task::ReplaceAll: return replace_all(c);
    case Task::OverwritePositions: return overwrite(c);
    case Task::FunctionalUpdates: return functional(c);
    case Task::ComparePositions: return compare_positions(c);
    case Task::FindDuplicates: return duplicates(c);
    case Task::Count: return count(c);
    case Task::CheckAssociation: return association(c);
    case Task::CompareTwoLists: return two_lists(c);
    case Task::IdentifyOddGroup: return odd_group(c);
    case Task::PatchDifference: return patch(c);
    case Task::GroupMembership: return membership(c);
    case Task::GroupAssociation:
    case Task::GroupAssociationAlternating: return group_association(c);
    case Task::Iterate: return iterate(c);
    case Task::QuantityState:
      return Integer{tasks::simulate_ops(std::span<const tasks::QuantityOp>(
                                             tasks::parse_quantity_ops(c.context)),
                                         0)};
    case Task::SetState: {
      const auto ops = tasks::parse_set_ops(c.context);
      return tasks::simulate_ops(std::span<const tasks::SetOp>(ops), WordSet{});
    }
    case Task::DataBlocks: return data_blocks(c);
    case Task::TheoryOfMind: return theory_of_mind(c);
  }
  throw ResponseMalformed("unknown task");
}

/// Empty when the oracle agrees with the stored reference, otherwise a
/// description naming the case.
inline std::optional<std::string> check_case(const TestCase& c) {
  try {
    const auto got = recompute_reference(c);
    if (got == c.reference) return std::nullopt;
    return c.id + ": oracle gives \"" + render(got) + "\" but reference is \"" +
           render(c.reference) + "\"";
  } catch (const std::exception& e) {
    return c.id + ": oracle failed: " + e.what();
  }
}

}  // namespace memprobe::oracle
