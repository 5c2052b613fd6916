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

// Match and compare: relative position, duplicate detection, counting and
// tag association.

#pragma once

#include <map>
#include <string>
#include <vector>

#include "memprobe/tasks/common.hpp"

namespace memprobe::tasks {

namespace detail {

inline std::size_t fit_plain_words(const TokenBudget& budget,
                                   const Vocabulary& vocab, std::size_t min_words) {
  const auto w = probe_word(vocab);
  return fit_units(budget, min_words, [&](std::size_t k) {
    return estimate_tokens(words_line(std::vector<std::string>(k, w)), budget);
  });
}

inline std::string tag_name(std::size_t i) { return "ATT_" + std::to_string(i + 1); }

inline std::string render_tagged(const std::vector<std::string>& words,
                                 const std::vector<std::size_t>& tags) {
  std::string out;
  for (std::size_t i = 0; i < words.size(); ++i) {
    if (i) out += ", ";
    out += words[i] + ": " + tag_name(tags[i]);
  }
  return out;
}

}  // namespace detail

/// Places x at floor(d1*(N-1)) and y at floor(d2*(N-1)); on collision y moves
/// one slot later (appended when x is last).
inline TestCase gen_compare_positions(const GenParams& params,
                                      const Vocabulary& vocab, const Seed& seed) {
  const auto& budget = budget_of(params);
  const double d1 = required(params.query_depth, "query_depth");
  const double d2 = required(params.second_depth, "second_depth");
  auto rng = seed.rng();

  const auto n = detail::fit_plain_words(budget, vocab, 2);
  auto words = sample_words(vocab, n + 2, rng);
  const std::string x = words[n];
  const std::string y = words[n + 1];
  words.resize(n);
  const std::size_t ix = depth_index(d1, n);
  std::size_t iy = depth_index(d2, n);
  words[ix] = x;
  if (iy == ix) {
    iy = ix + 1;
    if (iy == n)
      words.push_back(y);
    else
      words[iy] = y;
  } else {
    words[iy] = y;
  }

  auto context = words_line(words);
  require_in_band(context, budget);
  std::string instruction =
      (v2(params) ? "In the context, is the word " + text::quote(x) +
                        " placed before the word " + text::quote(y) + "?"
                  : "Does the word " + text::quote(x) + " appear before the word " +
                        text::quote(y) + " in the context?") +
      " Answer yes or no.";
  return make_case(Task::ComparePositions, params, seed, std::move(context),
                   std::move(instruction), Binary{ix < iy});
}

inline TestCase gen_find_duplicates(const GenParams& params,
                                    const Vocabulary& vocab, const Seed& seed) {
  const auto& budget = budget_of(params);
  const auto reps = static_cast<std::size_t>(required(params.repetition, "repetition"));
  auto rng = seed.rng();

  const auto n = detail::fit_plain_words(budget, vocab, reps + 1);
  // One duplicated word plus n - reps singletons.
  auto pool = sample_words(vocab, n - reps + 1, rng);
  const std::string dup = pool.back();
  pool.pop_back();
  auto positions = rng.choose(n, reps);
  std::vector<std::string> words;
  words.reserve(n);
  std::size_t pi = 0, fi = 0;
  for (std::size_t i = 0; i < n; ++i) {
    if (pi < positions.size() && positions[pi] == i) {
      words.push_back(dup);
      ++pi;
    } else {
      words.push_back(pool[fi++]);
    }
  }

  auto context = words_line(words);
  require_in_band(context, budget);
  std::string instruction =
      (v2(params) ? "Find the word that is repeated in the context."
                  : "Which word appears more than once in the context?") +
      std::string(" Answer with the word only.");
  return make_case(Task::FindDuplicates, params, seed, std::move(context),
                   std::move(instruction), Text{dup});
}

inline TestCase gen_count(const GenParams& params, const Vocabulary& vocab,
                          const Seed& seed) {
  const auto& budget = budget_of(params);
  const auto reps = static_cast<std::size_t>(required(params.repetition, "repetition"));
  auto rng = seed.rng();

  const auto n = detail::fit_plain_words(budget, vocab, reps);
  const std::string x = vocab.words()[rng.below(vocab.size())];
  // Whole-token embedding: no filler word contains x.
  std::unordered_set<std::string> exclude;
  for (const auto& w : vocab.words())
    if (w.find(x) != std::string::npos) exclude.insert(w);
  auto filler = sample_words(vocab, n - reps, rng, exclude);
  auto positions = rng.choose(n, reps);
  std::vector<std::string> words;
  words.reserve(n);
  std::size_t pi = 0, fi = 0;
  for (std::size_t i = 0; i < n; ++i) {
    if (pi < positions.size() && positions[pi] == i) {
      words.push_back(x);
      ++pi;
    } else {
      words.push_back(filler[fi++]);
    }
  }

  auto context = words_line(words);
  require_in_band(context, budget);
  std::string instruction =
      (v2(params) ? "Count the occurrences of the word " + text::quote(x) +
                        " in the context."
                  : "How many times does the word " + text::quote(x) +
                        " appear in the context?") +
      " Answer with a number only.";
  return make_case(Task::Count, params, seed, std::move(context),
                   std::move(instruction), Integer{static_cast<std::int64_t>(reps)});
}

inline TestCase gen_check_association(const GenParams& params,
                                      const Vocabulary& vocab, const Seed& seed) {
  const auto& budget = budget_of(params);
  const auto n_attr = static_cast<std::size_t>(required(params.n_attributes, "n_attributes"));
  const Label label = required(params.label, "label");
  auto rng = seed.rng();

  const auto w = probe_word(vocab);
  const auto n = fit_units(budget, 2, [&](std::size_t k) {
    return estimate_tokens(detail::render_tagged(std::vector<std::string>(k, w),
                                                 std::vector<std::size_t>(k, n_attr - 1)),
                           budget);
  });
  auto words = sample_words(vocab, n, rng);
  std::vector<std::size_t> tags(n);
  for (auto& t : tags) t = rng.below(n_attr);

  std::map<std::size_t, std::vector<std::size_t>> by_tag;
  for (std::size_t i = 0; i < n; ++i) by_tag[tags[i]].push_back(i);

  std::size_t a = 0, b = 0;
  if (label == Label::Positive) {
    std::vector<std::size_t> shared;
    for (const auto& [tag, members] : by_tag)
      if (members.size() >= 2) shared.push_back(tag);
    if (shared.empty()) {
      // Rebalance: give a second word the first word's tag.
      a = rng.below(n);
      do {
        b = rng.below(n);
      } while (b == a);
      tags[b] = tags[a];
    } else {
      const auto& members = by_tag[rng.pick(shared)];
      auto two = rng.choose(members.size(), 2);
      a = members[two[0]];
      b = members[two[1]];
      if (rng.coin()) std::swap(a, b);
    }
  } else {
    if (n_attr < 2) throw DegenerateTagging("a negative query needs two tags");
    a = rng.below(n);
    do {
      b = rng.below(n);
    } while (b == a);
    if (tags[a] == tags[b]) tags[b] = (tags[a] + 1 + rng.below(n_attr - 1)) % n_attr;
  }

  auto context = detail::render_tagged(words, tags);
  require_in_band(context, budget);
  std::string instruction =
      v2(params) ? "Do the words " + text::quote(words[a]) + " and " +
                       text::quote(words[b]) + " have the same attribute?"
                 : "Given the context with words and their assigned attributes in "
                   "the format of word: ATT_N, determine if the word " +
                       text::quote(words[a]) + " has the same attribute as the word " +
                       text::quote(words[b]) + "?";
  instruction += " Answer yes or no.";
  return make_case(Task::CheckAssociation, params, seed, std::move(context),
                   std::move(instruction), Binary{tags[a] == tags[b]});
}

}  // namespace memprobe::tasks
