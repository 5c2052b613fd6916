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

// Shared fixtures and a reference re-derivation written independently of the
// library: it reads a case's text with plain stream and regex parsing and
// touches no generator or oracle code.

#pragma once

#include <algorithm>
#include <cstdio>
#include <map>
#include <optional>
#include <regex>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "memprobe/snapshot.hpp"

namespace memprobe::testing {

inline const Vocabulary& dictionary() {
  static const Vocabulary v = load_vocabulary(default_vocabulary_path());
  return v;
}

/// Default suite for a seed, built once per process.
inline const std::vector<TestCase>& default_suite(std::uint64_t seed = 0) {
  static std::map<std::uint64_t, std::vector<TestCase>> cache;
  auto it = cache.find(seed);
  if (it == cache.end()) it = cache.emplace(seed, expand_snapshot(default_config(seed), dictionary())).first;
  return it->second;
}

inline std::vector<const TestCase*> cases_of(const std::vector<TestCase>& suite, Task t) {
  std::vector<const TestCase*> out;
  for (const auto& c : suite)
    if (c.task == t) out.push_back(&c);
  return out;
}

namespace ref {

inline std::vector<std::string> tokens(const std::string& s) {
  std::istringstream in(s);
  std::vector<std::string> out;
  for (std::string w; in >> w;) out.push_back(w);
  return out;
}

inline std::vector<std::string> quoted(const std::string& s) {
  static const std::regex re("'([^']*)'");
  std::vector<std::string> out;
  for (auto it = std::sregex_iterator(s.begin(), s.end(), re); it != std::sregex_iterator(); ++it)
    out.push_back((*it)[1].str());
  return out;
}

inline std::string strip(const std::string& s) {
  const auto b = s.find_first_not_of(" \n\t");
  if (b == std::string::npos) return "";
  return s.substr(b, s.find_last_not_of(" \n\t") - b + 1);
}

inline std::vector<std::string> split_on(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream in(s);
  while (std::getline(in, cur, sep)) out.push_back(cur);
  return out;
}

inline std::vector<std::string> items(const std::string& s) {
  std::vector<std::string> out;
  for (const auto& p : split_on(s, ','))
    if (auto t = strip(p); !t.empty()) out.push_back(t);
  return out;
}

/// "A: x, y; B: z" -> [(A, [x, y]), (B, [z])], repeats kept in order.
inline std::vector<std::pair<std::string, std::vector<std::string>>> segments(const std::string& s) {
  std::vector<std::pair<std::string, std::vector<std::string>>> out;
  for (const auto& seg : split_on(s, ';')) {
    const auto colon = seg.find(':');
    out.emplace_back(strip(seg.substr(0, colon)), items(seg.substr(colon + 1)));
  }
  return out;
}

/// Members per label, concatenated across repeated segments.
inline std::map<std::string, std::vector<std::string>> merged(const std::string& s) {
  std::map<std::string, std::vector<std::string>> out;
  for (auto& [label, members] : segments(s))
    out[label].insert(out[label].end(), members.begin(), members.end());
  return out;
}

inline std::string label_holding(const std::string& context, const std::string& word) {
  for (const auto& [label, members] : merged(context))
    if (std::find(members.begin(), members.end(), word) != members.end()) return label;
  return "";
}

inline std::string join(const std::vector<std::string>& v, const std::string& sep) {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) out += (i ? sep : "") + v[i];
  return out;
}

inline std::vector<std::string> lines(const std::string& s) { return split_on(s, '\n'); }

inline WordSet word_set(std::vector<std::string> v) {
  std::sort(v.begin(), v.end());
  v.erase(std::unique(v.begin(), v.end()), v.end());
  return WordSet{v};
}

/// First integer in `s` captured by group 1 of `pattern`, if any.
inline std::optional<long long> number_after(const std::string& s, const std::string& pattern) {
  std::smatch m;
  if (!std::regex_search(s, m, std::regex(pattern))) return std::nullopt;
  return std::stoll(m[1].str());
}

inline bool mentions(const std::string& s, const std::string& phrase) {
  return s.find(phrase) != std::string::npos;
}

/// The reference implied by a case's rendered context and instruction alone.
inline Answer derive(const TestCase& c) {
  const auto q = quoted(c.instruction);
  const auto& ins = c.instruction;
  switch (c.task) {
    case Task::StringSearchWord: {
      const auto t = tokens(c.context);
      return Binary{std::find(t.begin(), t.end(), q.at(0)) != t.end()};
    }
    case Task::StringSearchSeq: {
      const auto t = tokens(c.context), needle = tokens(q.at(0));
      return Binary{std::search(t.begin(), t.end(), needle.begin(), needle.end()) != t.end()};
    }
    case Task::KeyValueSearch:
    case Task::BatchSearch: {
      std::map<std::string, std::string> kv;
      for (const auto& pair : split_on(c.context, ',')) {
        const auto colon = pair.find(':');
        kv[strip(pair.substr(0, colon))] = strip(pair.substr(colon + 1));
      }
      if (c.task == Task::KeyValueSearch) return Text{kv.at(q.at(0))};
      OrderedList out;
      for (const auto& k : q) out.items.push_back(kv.at(k));
      return out;
    }
    case Task::SnapshotWords:
    case Task::SnapshotNumbers:
      return Text{c.context};
    case Task::ReplaceAll: {
      std::vector<std::string> out;
      for (const auto& w : tokens(c.context)) {
        if (w != q.at(0))
          out.push_back(w);
        else if (!mentions(ins, "remove"))
          out.push_back(q.at(1));
      }
      return Text{join(out, " ")};
    }
    case Task::OverwritePositions: {
      const auto t = tokens(c.context);
      const auto nth = static_cast<std::size_t>(*number_after(ins, "(\\d+)(?:st|nd|rd|th) word"));
      std::vector<std::string> out;
      for (std::size_t i = 0; i < t.size(); ++i) {
        if ((i + 1) % nth != 0)
          out.push_back(t[i]);
        else if (!mentions(ins, "remove"))
          out.push_back(q.at(0));
      }
      return Text{join(out, " ")};
    }
    case Task::FunctionalUpdates: {
      const auto add = number_after(ins, "add (\\d+)");
      const auto sub = number_after(ins, "subtract (\\d+)");
      const auto mul = number_after(ins, "by (\\d+)");
      std::vector<std::string> out;
      for (const auto& w : tokens(c.context)) {
        long long x = std::stoll(w);
        if (add) x += *add;
        if (sub) x -= *sub;
        if (mul) x *= *mul;
        out.push_back(std::to_string(x));
      }
      return Text{join(out, " ")};
    }
    case Task::ComparePositions: {
      const auto t = tokens(c.context);
      return Binary{std::find(t.begin(), t.end(), q.at(0)) < std::find(t.begin(), t.end(), q.at(1))};
    }
    case Task::FindDuplicates: {
      std::map<std::string, int> n;
      for (const auto& w : tokens(c.context)) ++n[w];
      std::vector<std::string> repeated;
      for (const auto& [w, k] : n)
        if (k > 1) repeated.push_back(w);
      return Text{repeated.size() == 1 ? repeated[0] : "<ambiguous>"};
    }
    case Task::Count: {
      const auto t = tokens(c.context);
      return Integer{std::count(t.begin(), t.end(), q.at(0))};
    }
    case Task::CheckAssociation: {
      std::map<std::string, std::string> att;
      for (const auto& pair : split_on(c.context, ',')) {
        const auto colon = pair.find(':');
        att[strip(pair.substr(0, colon))] = strip(pair.substr(colon + 1));
      }
      return Binary{att.at(q.at(0)) == att.at(q.at(1))};
    }
    case Task::CompareTwoLists: {
      const auto nl = c.context.find('\n');
      const auto first = items(c.context.substr(c.context.find(':') + 1, nl - c.context.find(':') - 1));
      const auto rest = c.context.substr(nl + 1);
      const auto second = items(rest.substr(rest.find(':') + 1));
      const bool pick_first = ins.find("first") < ins.find("second");
      const auto& a = pick_first ? first : second;
      const std::set<std::string> b(pick_first ? second.begin() : first.begin(),
                                    pick_first ? second.end() : first.end());
      OrderedList out;
      for (const auto& w : a)
        if (!b.count(w)) out.items.push_back(w);
      return out;
    }
    case Task::IdentifyOddGroup: {
      auto segs = segments(c.context);
      std::map<std::vector<std::string>, std::vector<std::string>> by_content;
      for (auto& [label, members] : segs) {
        std::sort(members.begin(), members.end());
        by_content[members].push_back(label);
      }
      if (by_content.size() == 1) return Text{"none"};
      for (const auto& [content, labels] : by_content)
        if (labels.size() == 1 && by_content.size() == 2) return Text{labels[0]};
      return Text{"<ambiguous>"};
    }
    case Task::PatchDifference: {
      const auto t = tokens(c.context);
      std::size_t period = 1;
      while (period < t.size()) {
        bool ok = true;
        for (std::size_t i = period; i < t.size() && ok; ++i) ok = t[i] == t[i - period];
        if (ok) break;
        ++period;
      }
      const auto n = static_cast<std::size_t>(number_after(ins, "(\\d+)(?:st|nd|rd|th) word").value_or(1));
      return Text{t[(t.size() + n - 1) % period]};
    }
    case Task::GroupMembership:
      return Text{label_holding(c.context, q.at(0))};
    case Task::GroupAssociation:
    case Task::GroupAssociationAlternating:
      return Binary{label_holding(c.context, q.at(0)) == label_holding(c.context, q.at(1))};
    case Task::Iterate: {
      const auto m = merged(c.context);
      const bool first = mentions(ins, "first word");
      OrderedList out;
      for (std::size_t i = 1; m.count("L" + std::to_string(i)); ++i) {
        const auto& v = m.at("L" + std::to_string(i));
        out.items.push_back(first ? v.front() : v.back());
      }
      return out;
    }
    case Task::QuantityState: {
      long long total = 0;
      for (const auto& line : lines(c.context)) {
        int step = 0;
        long long n = 0;
        char verb[16] = {};
        if (std::sscanf(line.c_str(), "Step %d: %15s %lld", &step, verb, &n) != 3) continue;
        total += std::string(verb) == "add" ? n : -n;
      }
      return Integer{total};
    }
    case Task::SetState: {
      std::set<std::string> basket;
      static const std::regex re("^Step \\d+: (add|remove) (.*) (to|from) the items in the basket\\.$");
      for (const auto& line : lines(c.context)) {
        std::smatch m;
        if (!std::regex_match(line, m, re)) continue;
        for (const auto& w : items(m[2].str())) {
          if (m[1] == "add")
            basket.insert(w);
          else
            basket.erase(w);
        }
      }
      return WordSet{{basket.begin(), basket.end()}};
    }
    case Task::DataBlocks: {
      const auto m = merged(c.context);
      const auto l = m.find(q.at(0));
      if (l == m.end()) return Text{"<missing>"};
      const auto& v = l->second;
      auto it = std::find(v.begin(), v.end(), q.at(1));
      if (it == v.end()) return Text{"<missing>"};
      return OrderedList{{it + 1, v.end()}};
    }
    case Task::TheoryOfMind: {
      std::smatch people;
      std::regex_search(ins, people, std::regex("The people are ([^.]*)\\."));
      const auto names = items(people[1].str());
      std::map<std::string, std::set<std::string>> held;
      static const std::regex add_re("^Step \\d+: (\\w+) adds (.*) to their own basket\\.$");
      static const std::regex rm_re("^Step \\d+: (\\w+) removes (.*) from their own basket\\.$");
      static const std::regex swap_re("^Step \\d+: (\\w+) swaps (\\S+) with (\\w+) in exchange for (\\S+)\\.$");
      for (const auto& line : lines(c.context)) {
        std::smatch m;
        if (std::regex_match(line, m, add_re)) {
          for (const auto& w : items(m[2].str())) held[m[1]].insert(w);
        } else if (std::regex_match(line, m, rm_re)) {
          for (const auto& w : items(m[2].str())) held[m[1]].erase(w);
        } else if (std::regex_match(line, m, swap_re)) {
          held[m[1]].erase(m[2]);
          held[m[3]].insert(m[2]);
          held[m[3]].erase(m[4]);
          held[m[1]].insert(m[4]);
        }
      }
      AgentSets out;
      for (const auto& n : names)
        out.agents.emplace_back(n, std::vector<std::string>(held[n].begin(), held[n].end()));
      return out;
    }
  }
  return Text{"<unhandled>"};
}

}  // namespace ref

/// Count of cases whose stored reference differs from the derived one; the
/// first mismatching id is written to `first_bad`.
inline std::size_t reference_mismatches(const std::vector<TestCase>& cases, std::string* first_bad = nullptr) {
  std::size_t bad = 0;
  for (const auto& c : cases) {
    if (ref::derive(c) == c.reference) continue;
    if (bad++ == 0 && first_bad) *first_bad = c.id;
  }
  return bad;
}

}  // namespace memprobe::testing
