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

// Compute on sets and lists: membership, association (plain and alternating
// segments) and iteration over list ends.

#pragma once

#include <string>
#include <utility>
#include <vector>

#include "memprobe/tasks/common.hpp"

namespace memprobe::tasks {

using Segments = std::vector<std::pair<std::string, std::vector<std::string>>>;

/// k labeled groups, every member word unique across all groups.
struct GroupedContext {
  std::vector<std::string> labels;
  std::vector<std::vector<std::string>> members;

  /// Each label's members split over `turns` segments, interleaved
  /// L1, L2, ..., Lk, L1, ...; earlier segments take the remainder.
  Segments alternating(std::size_t turns) const {
    Segments out;
    std::vector<std::size_t> offset(labels.size(), 0);
    for (std::size_t t = 0; t < turns; ++t) {
      for (std::size_t g = 0; g < labels.size(); ++g) {
        const auto m = members[g].size();
        const std::size_t take = m / turns + (t < m % turns ? 1 : 0);
        auto first = members[g].begin() + static_cast<std::ptrdiff_t>(offset[g]);
        out.emplace_back(labels[g], std::vector<std::string>(first, first + static_cast<std::ptrdiff_t>(take)));
        offset[g] += take;
      }
    }
    return out;
  }

  Segments plain() const {
    Segments out;
    for (std::size_t g = 0; g < labels.size(); ++g) out.emplace_back(labels[g], members[g]);
    return out;
  }
};

namespace detail {

inline std::vector<std::string> make_labels(char prefix, std::size_t k) {
  std::vector<std::string> out;
  for (std::size_t i = 0; i < k; ++i) out.push_back(prefix + std::to_string(i + 1));
  return out;
}

/// Members per group so that the rendering fits the budget.
inline std::size_t fit_members(const TokenBudget& budget, const Vocabulary& vocab,
                               char prefix, std::size_t k, std::size_t min_members,
                               std::size_t turns) {
  const auto w = probe_word(vocab);
  return fit_units(budget, min_members, [&](std::size_t m) {
    GroupedContext g{make_labels(prefix, k),
                     std::vector<std::vector<std::string>>(k, std::vector<std::string>(m, w))};
    return estimate_tokens(labeled_segments(turns ? g.alternating(turns) : g.plain()), budget);
  });
}

inline GroupedContext random_groups(const Vocabulary& vocab, char prefix, std::size_t k,
                                    std::size_t m, Rng& rng) {
  auto words = sample_words(vocab, k * m, rng);
  GroupedContext g;
  g.labels = make_labels(prefix, k);
  for (std::size_t i = 0; i < k; ++i)
    g.members.emplace_back(words.begin() + static_cast<std::ptrdiff_t>(i * m),
                           words.begin() + static_cast<std::ptrdiff_t>((i + 1) * m));
  return g;
}

}  // namespace detail

inline TestCase gen_group_membership(const GenParams& params,
                                     const Vocabulary& vocab, const Seed& seed) {
  const auto& budget = budget_of(params);
  const auto k = static_cast<std::size_t>(required(params.num_groups, "num_groups"));
  const double depth = required(params.query_depth, "query_depth");
  auto rng = seed.rng();

  const auto m = detail::fit_members(budget, vocab, 'S', k, 1, 0);
  auto groups = detail::random_groups(vocab, 'S', k, m, rng);
  const std::size_t flat = depth_index(depth, k * m);
  const std::string& query = groups.members[flat / m][flat % m];

  auto context = labeled_segments(groups.plain());
  require_in_band(context, budget);
  std::string instruction =
      (v2(params) ? "Find the set that includes the word " + text::quote(query) + "."
                  : "Which set contains the word " + text::quote(query) + "?") +
      " Answer with the set label only.";
  return make_case(Task::GroupMembership, params, seed, std::move(context),
                   std::move(instruction), Text{groups.labels[flat / m]});
}

inline TestCase gen_group_association(const GenParams& params,
                                      const Vocabulary& vocab, const Seed& seed,
                                      bool alternating) {
  const auto& budget = budget_of(params);
  const auto k = static_cast<std::size_t>(required(params.num_groups, "num_groups"));
  const Label label = required(params.label, "label");
  const std::size_t turns =
      alternating ? static_cast<std::size_t>(required(params.num_turns, "num_turns")) : 0;
  if (label == Label::Negative && k < 2)
    throw InvalidParams("a negative association query needs two groups");
  auto rng = seed.rng();

  const char prefix = alternating ? 'L' : 'S';
  const auto m = detail::fit_members(budget, vocab, prefix, k,
                                     std::max<std::size_t>(2, turns), turns);
  auto groups = detail::random_groups(vocab, prefix, k, m, rng);
  std::string x, y;
  if (label == Label::Positive) {
    const auto g = rng.below(k);
    auto two = rng.choose(m, 2);
    if (rng.coin()) std::swap(two[0], two[1]);
    x = groups.members[g][two[0]];
    y = groups.members[g][two[1]];
  } else {
    auto two = rng.choose(k, 2);
    if (rng.coin()) std::swap(two[0], two[1]);
    x = groups.members[two[0]][rng.below(m)];
    y = groups.members[two[1]][rng.below(m)];
  }

  auto context = labeled_segments(alternating ? groups.alternating(turns) : groups.plain());
  require_in_band(context, budget);
  const std::string unit = alternating ? "list" : "set";
  std::string instruction =
      (v2(params) ? "Check if the words " + text::quote(x) + " and " + text::quote(y) +
                        " belong to the same " + unit + "."
                  : "Determine if the word " + text::quote(x) + " and the word " +
                        text::quote(y) + " are in the same " + unit + ".") +
      " Answer yes or no.";
  return make_case(alternating ? Task::GroupAssociationAlternating : Task::GroupAssociation,
                   params, seed, std::move(context), std::move(instruction),
                   Binary{label == Label::Positive});
}

inline TestCase gen_iterate(const GenParams& params, const Vocabulary& vocab,
                            const Seed& seed) {
  const auto& budget = budget_of(params);
  const auto k = static_cast<std::size_t>(required(params.num_groups, "num_groups"));
  const IterateFrom from = params.iterate_from.value_or(IterateFrom::Last);
  auto rng = seed.rng();

  const auto m = detail::fit_members(budget, vocab, 'L', k, 2, 0);
  auto groups = detail::random_groups(vocab, 'L', k, m, rng);
  std::vector<std::string> reference;
  for (const auto& g : groups.members)
    reference.push_back(from == IterateFrom::Last ? g.back() : g.front());

  auto context = labeled_segments(groups.plain());
  require_in_band(context, budget);
  const std::string which = from == IterateFrom::Last ? "last" : "first";
  std::string instruction =
      (v2(params) ? "For every list from L1 to L" + std::to_string(k) + ", give its " +
                        which + " word."
                  : "Return the " + which + " word of each list, in order from L1 to L" +
                        std::to_string(k) + ".") +
      " Answer with the words only, separated by commas.";
  return make_case(Task::Iterate, params, seed, std::move(context), std::move(instruction),
                   OrderedList{std::move(reference)});
}

}  // namespace memprobe::tasks
