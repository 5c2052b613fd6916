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

// Spot the differences: list difference, odd group out, pattern continuation.

#pragma once

#include <string>
#include <vector>

#include "memprobe/tasks/common.hpp"

namespace memprobe::tasks {

namespace detail {

inline std::string render_two_lists(const std::vector<std::string>& x,
                                    const std::vector<std::string>& y) {
  return "First list: " + comma_list(x) + "\nSecond list: " + comma_list(y);
}

inline std::string group_label(std::size_t i) { return "G" + std::to_string(i + 1); }

inline std::string render_groups(const std::vector<std::vector<std::string>>& groups) {
  std::vector<std::pair<std::string, std::vector<std::string>>> segs;
  segs.reserve(groups.size());
  for (std::size_t i = 0; i < groups.size(); ++i) segs.emplace_back(group_label(i), groups[i]);
  return labeled_segments(segs);
}

}  // namespace detail

/// Words of `chosen` absent from `other`, in order of appearance.
inline std::vector<std::string> list_difference(const std::vector<std::string>& chosen,
                                                const std::vector<std::string>& other) {
  const auto other_set = as_set(other);
  std::vector<std::string> out;
  for (const auto& w : chosen)
    if (!other_set.count(w)) out.push_back(w);
  return out;
}

inline TestCase gen_compare_two_lists(const GenParams& params,
                                      const Vocabulary& vocab, const Seed& seed) {
  const auto& budget = budget_of(params);
  const auto diffs = static_cast<std::size_t>(required(params.num_diff_words, "num_diff_words"));
  const ListChoice chosen = required(params.chosen_list, "chosen_list");
  auto rng = seed.rng();

  const auto w = probe_word(vocab);
  const auto m = fit_units(budget, diffs, [&](std::size_t k) {
    std::vector<std::string> l(k, w);
    return estimate_tokens(detail::render_two_lists(l, l), budget);
  });
  // m list words plus `diffs` fresh replacements, all distinct.
  auto words = sample_words(vocab, m + diffs, rng);
  std::vector<std::string> x(words.begin(), words.begin() + static_cast<std::ptrdiff_t>(m));
  std::vector<std::string> y = x;
  auto positions = rng.choose(m, diffs);
  for (std::size_t i = 0; i < diffs; ++i) y[positions[i]] = words[m + i];

  auto reference = chosen == ListChoice::First ? list_difference(x, y) : list_difference(y, x);
  auto context = detail::render_two_lists(x, y);
  require_in_band(context, budget);
  const std::string a = chosen == ListChoice::First ? "first" : "second";
  const std::string b = chosen == ListChoice::First ? "second" : "first";
  std::string instruction =
      (v2(params) ? "List every word of the " + a + " list that is missing from the " + b + " list."
                  : "Report the words that appear in the " + a +
                        " list but not in the " + b + " list.") +
      " Answer with the words only, separated by commas.";
  return make_case(Task::CompareTwoLists, params, seed, std::move(context),
                   std::move(instruction), OrderedList{std::move(reference)});
}

inline TestCase gen_identify_odd_group(const GenParams& params,
                                       const Vocabulary& vocab, const Seed& seed) {
  const auto& budget = budget_of(params);
  const auto size = static_cast<std::size_t>(required(params.words_per_group, "words_per_group"));
  const double pct = required(params.pct_difference, "pct_difference");
  auto rng = seed.rng();

  const auto w = probe_word(vocab);
  const auto n_groups = fit_units(budget, 3, [&](std::size_t k) {
    return estimate_tokens(detail::render_groups(std::vector<std::vector<std::string>>(
                               k, std::vector<std::string>(size, w))),
                           budget);
  });
  const std::size_t changed = std::min(size, round_count(pct * static_cast<double>(size)));
  auto words = sample_words(vocab, size + changed, rng);
  std::vector<std::string> base(words.begin(), words.begin() + static_cast<std::ptrdiff_t>(size));
  std::vector<std::string> fresh(words.begin() + static_cast<std::ptrdiff_t>(size), words.end());

  std::vector<std::vector<std::string>> groups(n_groups, base);
  for (auto& g : groups) rng.shuffle(g);
  std::string reference = "none";
  if (changed > 0) {
    const std::size_t odd = rng.below(n_groups);
    auto positions = rng.choose(size, changed);
    for (std::size_t i = 0; i < changed; ++i) groups[odd][positions[i]] = fresh[i];
    reference = detail::group_label(odd);
  }

  auto context = detail::render_groups(groups);
  require_in_band(context, budget);
  std::string instruction =
      v2(params)
          ? "Every group holds the same words in a shuffled order, except possibly one "
            "group with some different words. Find that group. Answer with the group "
            "label only, or 'none' if all groups hold the same words."
          : "All groups contain the same words in a shuffled order, except possibly one "
            "group that contains some different words. Which group is different? Answer "
            "with the group label only, or 'none' if all groups contain the same words.";
  return make_case(Task::IdentifyOddGroup, params, seed, std::move(context),
                   std::move(instruction), Text{std::move(reference)});
}

/// round(depth * (L - 1)) leading pattern elements follow the full repeats.
inline std::size_t patch_cutoff_length(double cutoff_depth, std::size_t pattern_length) {
  return round_count(cutoff_depth * static_cast<double>(pattern_length - 1));
}

inline TestCase gen_patch_difference(const GenParams& params,
                                     const Vocabulary& vocab, const Seed& seed) {
  const auto& budget = budget_of(params);
  const auto len = static_cast<std::size_t>(required(params.pattern_length, "pattern_length"));
  const double cutoff_depth = required(params.cutoff_depth, "cutoff_depth");
  const auto nth = static_cast<std::size_t>(required(params.nth, "nth"));
  if (len < 2) throw InvalidParams("pattern_length must be at least 2");
  auto rng = seed.rng();

  const std::size_t cut = patch_cutoff_length(cutoff_depth, len);
  const auto w = probe_word(vocab);
  const auto repeats = fit_units(budget, 2, [&](std::size_t r) {
    return estimate_tokens(words_line(std::vector<std::string>(r * len + cut, w)), budget);
  });
  auto pattern = sample_words(vocab, len, rng);
  std::vector<std::string> words;
  words.reserve(repeats * len + cut);
  for (std::size_t r = 0; r < repeats; ++r) words.insert(words.end(), pattern.begin(), pattern.end());
  words.insert(words.end(), pattern.begin(), pattern.begin() + static_cast<std::ptrdiff_t>(cut));

  auto context = words_line(words);
  require_in_band(context, budget);
  const std::string which = nth == 1 ? "next word" : text::ordinal(nth) + " word that comes next";
  std::string instruction =
      (v2(params) ? "The context repeats one sequence of words several times and stops "
                    "partway through a repetition. If the sequence continued, what would "
                    "be the "
                  : "The context consists of a sequence of words that is repeated several "
                    "times, and the last repetition is cut off. Continuing the sequence, "
                    "what is the ") +
      which + "? Answer with the word only.";
  return make_case(Task::PatchDifference, params, seed, std::move(context),
                   std::move(instruction), Text{pattern[(cut + nth - 1) % len]});
}

}  // namespace memprobe::tasks
