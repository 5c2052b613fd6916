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

// Search: word / subsequence presence, key-value lookup, batched lookup.

#pragma once

#include <string>
#include <vector>

#include "memprobe/tasks/common.hpp"

namespace memprobe::tasks {

namespace detail {

inline std::string binary_suffix() { return " Answer yes or no."; }

inline std::string render_pairs(const std::vector<std::string>& keys,
                                const std::vector<std::string>& values) {
  std::string out;
  for (std::size_t i = 0; i < keys.size(); ++i) {
    if (i) out += ", ";
    out += keys[i] + ": " + values[i];
  }
  return out;
}

inline std::size_t fit_pairs(const TokenBudget& budget, const Vocabulary& vocab) {
  const auto w = probe_word(vocab);
  return fit_units(budget, 1, [&](std::size_t n) {
    std::vector<std::string> k(n, w);
    return estimate_tokens(render_pairs(k, k), budget);
  });
}

inline std::size_t fit_words(const TokenBudget& budget, const Vocabulary& vocab,
                             std::size_t min_words) {
  const auto w = probe_word(vocab);
  return fit_units(budget, min_words, [&](std::size_t n) {
    return estimate_tokens(words_line(std::vector<std::string>(n, w)), budget);
  });
}

}  // namespace detail

inline TestCase gen_string_search_word(const GenParams& params,
                                       const Vocabulary& vocab,
                                       const Seed& seed) {
  const auto& budget = budget_of(params);
  const double depth = required(params.query_depth, "query_depth");
  const Label label = required(params.label, "label");
  auto rng = seed.rng();

  const std::size_t n = detail::fit_words(budget, vocab, 1);
  auto words = sample_words(vocab, n + 1, rng);
  const std::string query = words.back();
  words.pop_back();
  if (label == Label::Positive) words[depth_index(depth, n)] = query;

  auto context = words_line(words);
  require_in_band(context, budget);
  std::string instruction =
      v2(params) ? "Is " + text::quote(query) + " present in the context?"
                 : "Given the context, determine if " + text::quote(query) +
                       " is present in the context.";
  instruction += detail::binary_suffix();
  return make_case(Task::StringSearchWord, params, seed, std::move(context),
                   std::move(instruction), Binary{label == Label::Positive});
}

inline TestCase gen_string_search_seq(const GenParams& params,
                                      const Vocabulary& vocab,
                                      const Seed& seed) {
  const auto& budget = budget_of(params);
  const auto len = static_cast<std::size_t>(
      required(params.sequence_length, "sequence_length"));
  const Label label = required(params.label, "label");
  auto rng = seed.rng();

  const std::size_t n = detail::fit_words(budget, vocab, len);
  // n context words plus one word absent from the whole context.
  auto words = sample_words(vocab, n + 1, rng);
  const std::string absent = words.back();
  words.pop_back();

  const std::size_t start = rng.below(n - len + 1);
  std::vector<std::string> query(words.begin() + static_cast<std::ptrdiff_t>(start),
                                 words.begin() + static_cast<std::ptrdiff_t>(start + len));
  if (label == Label::Negative) query[rng.below(len)] = absent;

  auto context = words_line(words);
  require_in_band(context, budget);
  const auto q = text::quote(words_line(query));
  std::string instruction =
      v2(params) ? "Is the sequence " + q + " present in the context?"
                 : "Given the context, determine if the sequence " + q +
                       " is present in the context.";
  instruction += detail::binary_suffix();
  return make_case(Task::StringSearchSeq, params, seed, std::move(context),
                   std::move(instruction), Binary{label == Label::Positive});
}

inline TestCase gen_key_value_search(const GenParams& params,
                                     const Vocabulary& vocab,
                                     const Seed& seed) {
  const auto& budget = budget_of(params);
  const double depth = required(params.query_depth, "query_depth");
  auto rng = seed.rng();

  const std::size_t pairs = detail::fit_pairs(budget, vocab);
  if (2 * pairs > vocab.size())
    throw VocabularyExhausted("key-value context needs " +
                              std::to_string(2 * pairs) + " distinct words");
  auto words = sample_words(vocab, 2 * pairs, rng);
  std::vector<std::string> keys(words.begin(), words.begin() + static_cast<std::ptrdiff_t>(pairs));
  std::vector<std::string> values(words.begin() + static_cast<std::ptrdiff_t>(pairs), words.end());
  const std::size_t target = depth_index(depth, pairs);

  auto context = detail::render_pairs(keys, values);
  require_in_band(context, budget);
  std::string instruction =
      v2(params) ? "Find the value associated with the key " +
                       text::quote(keys[target]) + "."
                 : "What is the value paired with the key " +
                       text::quote(keys[target]) + "?";
  instruction += " Answer with the value only.";
  return make_case(Task::KeyValueSearch, params, seed, std::move(context),
                   std::move(instruction), Text{values[target]});
}

inline TestCase gen_batch_search(const GenParams& params,
                                 const Vocabulary& vocab, const Seed& seed) {
  const auto& budget = budget_of(params);
  const auto batch = static_cast<std::size_t>(required(params.batch_size, "batch_size"));
  auto rng = seed.rng();

  const std::size_t pairs = detail::fit_pairs(budget, vocab);
  if (batch > pairs)
    throw BudgetTooSmall("batch of " + std::to_string(batch) +
                         " keys exceeds the " + std::to_string(pairs) +
                         " pairs that fit the budget");
  if (2 * pairs > vocab.size())
    throw VocabularyExhausted("key-value context needs " +
                              std::to_string(2 * pairs) + " distinct words");
  auto words = sample_words(vocab, 2 * pairs, rng);
  std::vector<std::string> keys(words.begin(), words.begin() + static_cast<std::ptrdiff_t>(pairs));
  std::vector<std::string> values(words.begin() + static_cast<std::ptrdiff_t>(pairs), words.end());

  // Distinct positions in draw order.
  auto picked = rng.choose(pairs, batch);
  rng.shuffle(picked);
  std::vector<std::string> qkeys, qvalues;
  for (auto i : picked) {
    qkeys.push_back(text::quote(keys[i]));
    qvalues.push_back(values[i]);
  }

  auto context = detail::render_pairs(keys, values);
  require_in_band(context, budget);
  std::string instruction =
      (v2(params) ? "Find the values associated with each of these keys: "
                  : "For each of the following keys, return the value paired with it: ") +
      comma_list(qkeys) +
      ". Answer with the values only, in the same order, separated by commas.";
  return make_case(Task::BatchSearch, params, seed, std::move(context),
                   std::move(instruction), OrderedList{std::move(qvalues)});
}

}  // namespace memprobe::tasks
