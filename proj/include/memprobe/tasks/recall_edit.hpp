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

// Recall and edit: verbatim snapshots, replace-all, positional overwrite and
// elementwise numeric updates.

#pragma once

#include <string>
#include <vector>

#include "memprobe/tasks/common.hpp"

namespace memprobe::tasks {

/// Applies an edit to a token sequence. Positions are 1-based: every token
/// whose position is divisible by `nth` is hit.
struct EditScript {
  static std::vector<std::string> replace_all(const std::vector<std::string>& base,
                                              const std::string& x,
                                              const std::optional<std::string>& y) {
    std::vector<std::string> out;
    out.reserve(base.size());
    for (const auto& w : base) {
      if (w != x)
        out.push_back(w);
      else if (y)
        out.push_back(*y);
    }
    return out;
  }

  static std::vector<std::string> overwrite_nth(const std::vector<std::string>& base,
                                                std::size_t nth,
                                                const std::optional<std::string>& y) {
    std::vector<std::string> out;
    out.reserve(base.size());
    for (std::size_t i = 0; i < base.size(); ++i) {
      if ((i + 1) % nth != 0)
        out.push_back(base[i]);
      else if (y)
        out.push_back(*y);
    }
    return out;
  }

  static std::vector<std::int64_t> apply(const std::vector<std::int64_t>& base,
                                         UpdateFn f) {
    std::vector<std::int64_t> out;
    out.reserve(base.size());
    for (auto v : base) out.push_back(apply_update(f, v));
    return out;
  }
};

namespace detail {

inline std::string numbers_line(const std::vector<std::int64_t>& v) {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) out += ' ';
    out += std::to_string(v[i]);
  }
  return out;
}

inline std::size_t fit_numbers(const TokenBudget& budget) {
  return fit_units(budget, 1, [&](std::size_t n) {
    return estimate_tokens(numbers_line(std::vector<std::int64_t>(n, 500)), budget);
  });
}

inline std::vector<std::int64_t> random_numbers(std::size_t n, Rng& rng) {
  std::vector<std::int64_t> v(n);
  for (auto& x : v) x = rng.between(0, 999);
  return v;
}

inline std::string copy_prefix(const GenParams& p) {
  return v2(p) ? "Copy the previous context but " : "Repeat the previous context and ";
}

}  // namespace detail

inline TestCase gen_snapshot(const GenParams& params, const Vocabulary& vocab,
                             const Seed& seed, bool numeric) {
  const auto& budget = budget_of(params);
  auto rng = seed.rng();
  std::string context;
  if (numeric) {
    const auto n = detail::fit_numbers(budget);
    context = detail::numbers_line(detail::random_numbers(n, rng));
  } else {
    const auto w = probe_word(vocab);
    const auto n = fit_units(budget, 1, [&](std::size_t k) {
      return estimate_tokens(words_line(std::vector<std::string>(k, w)), budget);
    });
    context = words_line(sample_words(vocab, n, rng));
  }
  require_in_band(context, budget);
  std::string instruction = v2(params)
                                ? "Copy the previous context exactly, word for word."
                                : "Repeat the previous context exactly.";
  Answer ref = Text{context};
  return make_case(numeric ? Task::SnapshotNumbers : Task::SnapshotWords, params,
                   seed, std::move(context), std::move(instruction), std::move(ref));
}

inline TestCase gen_replace_all(const GenParams& params, const Vocabulary& vocab,
                                const Seed& seed) {
  const auto& budget = budget_of(params);
  const double density = required(params.density, "density");
  const Replacement repl = required(params.replacement, "replacement");
  auto rng = seed.rng();

  const auto w = probe_word(vocab);
  const auto n = fit_units(budget, 1, [&](std::size_t k) {
    return estimate_tokens(words_line(std::vector<std::string>(k, w)), budget);
  });
  auto words = sample_words(vocab, n + 2, rng);
  const std::string x = words[n];
  const std::string y = words[n + 1];
  words.resize(n);
  for (auto pos : rng.choose(n, std::min(n, round_count(density * static_cast<double>(n)))))
    words[pos] = x;

  const std::optional<std::string> y_opt =
      repl == Replacement::Word ? std::optional<std::string>(y) : std::nullopt;
  auto reference = words_line(EditScript::replace_all(words, x, y_opt));
  auto context = words_line(words);
  require_in_band(context, budget);
  std::string instruction =
      detail::copy_prefix(params) +
      (y_opt ? "replace the word " + text::quote(x) + " with " + text::quote(y) + "."
             : "remove every occurrence of the word " + text::quote(x) + ".");
  return make_case(Task::ReplaceAll, params, seed, std::move(context),
                   std::move(instruction), Text{std::move(reference)});
}

inline TestCase gen_overwrite_positions(const GenParams& params,
                                        const Vocabulary& vocab,
                                        const Seed& seed) {
  const auto& budget = budget_of(params);
  const auto nth = static_cast<std::size_t>(required(params.nth, "nth"));
  const Replacement repl = required(params.replacement, "replacement");
  auto rng = seed.rng();

  const auto w = probe_word(vocab);
  const auto n = fit_units(budget, 1, [&](std::size_t k) {
    return estimate_tokens(words_line(std::vector<std::string>(k, w)), budget);
  });
  auto words = sample_words(vocab, n + 1, rng);
  const std::string y = words.back();
  words.pop_back();

  const std::optional<std::string> y_opt =
      repl == Replacement::Word ? std::optional<std::string>(y) : std::nullopt;
  auto reference = words_line(EditScript::overwrite_nth(words, nth, y_opt));
  auto context = words_line(words);
  require_in_band(context, budget);
  std::string instruction =
      detail::copy_prefix(params) +
      (y_opt ? "replace every " + text::ordinal(nth) + " word with " + text::quote(y) + "."
             : "remove every " + text::ordinal(nth) + " word.");
  return make_case(Task::OverwritePositions, params, seed, std::move(context),
                   std::move(instruction), Text{std::move(reference)});
}

inline std::string describe_update(UpdateFn f) {
  switch (f) {
    case UpdateFn::Add3: return "add 3 to every number";
    case UpdateFn::Subtract1: return "subtract 1 from every number";
    case UpdateFn::Multiply2: return "multiply every number by 2";
  }
  return "";
}

inline TestCase gen_functional_updates(const GenParams& params, const Seed& seed) {
  const auto& budget = budget_of(params);
  const UpdateFn f = required(params.function, "function");
  auto rng = seed.rng();

  const auto n = detail::fit_numbers(budget);
  auto base = detail::random_numbers(n, rng);
  auto context = detail::numbers_line(base);
  require_in_band(context, budget);
  auto reference = detail::numbers_line(EditScript::apply(base, f));
  std::string instruction =
      (v2(params) ? "Copy the previous list of numbers, but "
                  : "Repeat the previous list of numbers, but ") +
      describe_update(f) + ".";
  return make_case(Task::FunctionalUpdates, params, seed, std::move(context),
                   std::move(instruction), Text{std::move(reference)});
}

}  // namespace memprobe::tasks
