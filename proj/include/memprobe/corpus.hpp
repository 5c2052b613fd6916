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

// Seeded randomness, vocabularies and approximate token budgeting shared by
// every generator.

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <fstream>
#include <limits>
#include <random>
#include <string>
#include <string_view>
#include <unordered_set>
#include <utility>
#include <vector>

#include "memprobe/errors.hpp"
#include "memprobe/text.hpp"

#ifndef MEMPROBE_DATA_DIR
#define MEMPROBE_DATA_DIR "data"
#endif

namespace memprobe {

// ---------------------------------------------------------------------------
// Randomness

namespace detail {

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

inline std::uint64_t fnv1a(std::string_view s) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

}  // namespace detail

/// Deterministic random stream. The engine's output sequence is fixed by the
/// standard; the bounded helpers below avoid std distributions, whose
/// algorithms vary between standard libraries.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next() { return engine_(); }

  /// Uniform integer in [0, n). n must be positive.
  std::uint64_t below(std::uint64_t n) {
    const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() -
                                std::numeric_limits<std::uint64_t>::max() % n;
    std::uint64_t v;
    do {
      v = engine_();
    } while (v >= limit);
    return v % n;
  }

  /// Uniform integer in [lo, hi].
  std::int64_t between(std::int64_t lo, std::int64_t hi) {
    return lo + static_cast<std::int64_t>(
                    below(static_cast<std::uint64_t>(hi - lo) + 1));
  }

  /// Uniform real in [0, 1) with 53 bits of resolution.
  double unit() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  bool coin() { return (engine_() >> 63) != 0; }

  template <class T>
  void shuffle(std::vector<T>& v) {
    for (std::size_t i = v.size(); i > 1; --i) {
      std::swap(v[i - 1], v[below(i)]);
    }
  }

  /// k distinct indices from [0, n), in ascending order.
  std::vector<std::size_t> choose(std::size_t n, std::size_t k) {
    std::vector<std::size_t> idx(n);
    for (std::size_t i = 0; i < n; ++i) idx[i] = i;
    for (std::size_t i = 0; i < k; ++i) {
      std::swap(idx[i], idx[i + below(n - i)]);
    }
    idx.resize(k);
    std::sort(idx.begin(), idx.end());
    return idx;
  }

  template <class T>
  const T& pick(const std::vector<T>& v) {
    return v[below(v.size())];
  }

 private:
  std::mt19937_64 engine_;
};

/// A master seed plus the derivation path that leads to one case's stream.
struct Seed {
  std::uint64_t master = 0;
  std::vector<std::string> path;

  Seed child(std::string element) const {
    Seed s = *this;
    s.path.push_back(std::move(element));
    return s;
  }

  std::uint64_t value() const {
    std::uint64_t h = detail::splitmix64(master);
    for (const auto& p : path) h = detail::splitmix64(h ^ detail::fnv1a(p));
    return h;
  }

  Rng rng() const { return Rng(value()); }

  bool operator==(const Seed&) const = default;
};

// ---------------------------------------------------------------------------
// Vocabulary

enum class VocabMode { Dictionary, Gibberish };

/// Words the harness gives structural meaning to (answer keywords, agent
/// names, Jaccard extraction stopwords). They never appear as content.
inline const std::unordered_set<std::string>& reserved_words() {
  static const std::unordered_set<std::string> words = {
      "a",      "an",      "the",    "and",    "or",        "of",     "to",
      "in",     "is",      "are",    "with",   "has",       "have",   "contains",
      "items",  "item",    "set",    "sets",   "basket",    "final",  "none",
      "empty",  "nothing", "their",  "own",    "answer",    "yes",    "no",
      "alice",  "bob",     "charley", "dana",  "step",      "list",   "lists",
      "group",  "from",    "for",    "by",     "be",        "it",     "its",
      "this",   "that",    "which",  "each",   "all",       "as",     "at",
      "on",     "not",     "but",    "so",     "if",        "was",    "were",
      "holds",  "held",    "agent",  "agents", "remaining", "left",   "only",
      "after",  "then",    "following", "result", "add",  "adds",  "remove",
      "removes", "swap", "swaps",  "exchange", "subtract", "total"};
  return words;
}

inline bool is_plain_word(std::string_view w) {
  if (w.empty()) return false;
  for (char c : w)
    if (c < 'a' || c > 'z') return false;
  return true;
}

class Vocabulary {
 public:
  static constexpr std::size_t kMinDictionarySize = 10000;

  Vocabulary() = default;

  /// Validates uniqueness and the separator-free rule. Dictionary mode must
  /// hold at least kMinDictionarySize words.
  Vocabulary(std::vector<std::string> words, VocabMode mode)
      : words_(std::move(words)), mode_(mode) {
    index_.reserve(words_.size());
    for (const auto& w : words_) {
      for (char c : w) {
        if (text::is_space(c) || c == ',' || c == ':' || c == ';' ||
            c == '\'')
          throw InsufficientVocabulary("vocabulary entry '" + w +
                                       "' contains a separator");
      }
      if (w.empty()) throw InsufficientVocabulary("empty vocabulary entry");
      if (!index_.insert(w).second)
        throw InsufficientVocabulary("duplicate vocabulary entry '" + w + "'");
    }
    if (mode_ == VocabMode::Dictionary && words_.size() < kMinDictionarySize)
      throw InsufficientVocabulary(
          "dictionary vocabulary needs at least " +
          std::to_string(kMinDictionarySize) + " words, got " +
          std::to_string(words_.size()));
  }

  const std::vector<std::string>& words() const { return words_; }
  std::size_t size() const { return words_.size(); }
  VocabMode mode() const { return mode_; }
  bool contains(std::string_view w) const {
    return index_.count(std::string(w)) != 0;
  }

  /// Rounded mean word length; used to size probe renderings.
  std::size_t mean_length() const {
    if (words_.empty()) return 1;
    std::size_t total = 0;
    for (const auto& w : words_) total += w.size();
    return std::max<std::size_t>(
        1, (total + words_.size() / 2) / words_.size());
  }

 private:
  std::vector<std::string> words_;
  std::unordered_set<std::string> index_;
  VocabMode mode_ = VocabMode::Dictionary;
};

inline std::string default_vocabulary_path() {
  if (const char* env = std::getenv("MEMPROBE_VOCAB"); env && *env) return env;
  return std::string(MEMPROBE_DATA_DIR) + "/words.txt";
}

/// Loads a one-word-per-line file. Entries are lowercased and deduplicated;
/// anything that is not a plain a-z word, and reserved harness words, are
/// skipped.
inline Vocabulary load_vocabulary(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open vocabulary file: " + path);
  std::vector<std::string> words;
  std::unordered_set<std::string> seen;
  std::string line;
  while (std::getline(in, line)) {
    auto w = text::to_lower(text::trim(line));
    if (!is_plain_word(w) || reserved_words().count(w)) continue;
    if (seen.insert(w).second) words.push_back(std::move(w));
  }
  return Vocabulary(std::move(words), VocabMode::Dictionary);
}

// ---------------------------------------------------------------------------
// Sampling

/// n distinct words drawn uniformly without replacement from vocab minus
/// exclude, in draw order.
inline std::vector<std::string> sample_words(
    const Vocabulary& vocab, std::size_t n, Rng& rng,
    const std::unordered_set<std::string>& exclude = {}) {
  std::vector<std::size_t> candidates;
  candidates.reserve(vocab.size());
  const auto& words = vocab.words();
  for (std::size_t i = 0; i < words.size(); ++i) {
    if (exclude.empty() || !exclude.count(words[i])) candidates.push_back(i);
  }
  if (n > candidates.size())
    throw InsufficientVocabulary(
        "requested " + std::to_string(n) + " words but only " +
        std::to_string(candidates.size()) + " are available");
  std::vector<std::string> out;
  out.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    std::swap(candidates[i], candidates[i + rng.below(candidates.size() - i)]);
    out.push_back(words[candidates[i]]);
  }
  return out;
}

inline std::string gibberish_word(Rng& rng, std::size_t min_len,
                                  std::size_t max_len) {
  auto len = static_cast<std::size_t>(rng.between(
      static_cast<std::int64_t>(min_len), static_cast<std::int64_t>(max_len)));
  std::string w(len, 'a');
  for (auto& c : w) c = static_cast<char>('a' + rng.below(26));
  return w;
}

/// A vocabulary of unique gibberish words that are absent from `dictionary`
/// and from the reserved harness words.
inline Vocabulary make_gibberish_vocabulary(const Vocabulary& dictionary,
                                            std::size_t size, Rng& rng,
                                            std::size_t min_len = 4,
                                            std::size_t max_len = 10) {
  std::vector<std::string> words;
  std::unordered_set<std::string> seen;
  words.reserve(size);
  while (words.size() < size) {
    auto w = gibberish_word(rng, min_len, max_len);
    if (dictionary.contains(w) || reserved_words().count(w)) continue;
    if (seen.insert(w).second) words.push_back(std::move(w));
  }
  return Vocabulary(std::move(words), VocabMode::Gibberish);
}

// ---------------------------------------------------------------------------
// Token budgeting

struct TokenEstimator {
  enum class Kind { WordsPerToken, CharsPerToken };
  Kind kind = Kind::WordsPerToken;
  // Ratio kept rational so ceil() is exact: 4/3 words-per-token means
  // tokens = ceil(words * 4 / 3).
  std::uint64_t num = 4;
  std::uint64_t den = 3;

  static TokenEstimator words_per_token(std::uint64_t num, std::uint64_t den) {
    return {Kind::WordsPerToken, num, den};
  }
  static TokenEstimator chars_per_token(std::uint64_t num,
                                        std::uint64_t den = 1) {
    return {Kind::CharsPerToken, num, den};
  }

  bool operator==(const TokenEstimator&) const = default;
};

struct TokenBudget {
  std::uint64_t target_tokens = 4000;
  double tolerance_fraction = 0.10;
  TokenEstimator estimator;

  double lower() const {
    return static_cast<double>(target_tokens) * (1.0 - tolerance_fraction);
  }
  double upper() const {
    return static_cast<double>(target_tokens) * (1.0 + tolerance_fraction);
  }
  bool in_band(std::uint64_t tokens) const {
    auto t = static_cast<double>(tokens);
    return t >= lower() && t <= upper();
  }

  bool operator==(const TokenBudget&) const = default;
};

inline std::uint64_t ceil_div(std::uint64_t a, std::uint64_t b) {
  return (a + b - 1) / b;
}

/// CharsPerToken(r): ceil(len / r). WordsPerToken(r): ceil(words * r).
inline std::uint64_t estimate_tokens(std::string_view s,
                                     const TokenBudget& budget) {
  const auto& e = budget.estimator;
  if (e.kind == TokenEstimator::Kind::CharsPerToken) {
    return ceil_div(s.size() * e.den, e.num);
  }
  return ceil_div(text::count_ws_words(s) * e.num, e.den);
}

/// Number of structural units whose rendering lands closest to the budget
/// target. `estimate(n)` must be non-decreasing in n. Throws BudgetTooSmall
/// when the closest count is below `min_units` or outside the band.
template <class EstimateFn>
std::size_t fit_units(const TokenBudget& budget, std::size_t min_units,
                      EstimateFn&& estimate) {
  const auto target = budget.target_tokens;
  std::size_t lo = std::max<std::size_t>(min_units, 1);
  if (estimate(lo) > budget.upper())
    throw BudgetTooSmall("minimum structure needs " +
                         std::to_string(estimate(lo)) +
                         " tokens, budget allows " +
                         text::format_number(budget.upper()));
  if (estimate(lo) >= target) {
    if (!budget.in_band(estimate(lo)))
      throw BudgetTooSmall("minimum structure falls outside the budget band");
    return lo;
  }
  // Grow until the target is reached, then bisect for the first count at or
  // past it.
  std::size_t hi = lo * 2;
  while (estimate(hi) < target) {
    lo = hi;
    hi *= 2;
  }
  while (hi - lo > 1) {
    std::size_t mid = lo + (hi - lo) / 2;
    if (estimate(mid) < target)
      lo = mid;
    else
      hi = mid;
  }
  const auto below = estimate(lo);
  const auto above = estimate(hi);
  std::size_t best = (target - below <= above - target) ? lo : hi;
  const auto est = estimate(best);
  if (!budget.in_band(est)) {
    throw BudgetTooSmall("no unit count fits the token band (closest " +
                         std::to_string(est) + " tokens for target " +
                         std::to_string(target) + ")");
  }
  return best;
}

/// Throws BudgetTooSmall when a rendered context falls outside the band.
inline void require_in_band(std::string_view context,
                            const TokenBudget& budget) {
  const auto est = estimate_tokens(context, budget);
  if (!budget.in_band(est))
    throw BudgetTooSmall("rendered context estimates " + std::to_string(est) +
                         " tokens, outside band [" +
                         text::format_number(budget.lower()) + ", " +
                         text::format_number(budget.upper()) + "]");
}

/// Pads `core` with filler words interleaved at random positions until the
/// space-joined estimate enters the budget band. Core order is preserved and
/// filler never repeats a core word.
inline std::vector<std::string> fill_to_budget(
    const std::vector<std::string>& core, const Vocabulary& vocab,
    const TokenBudget& budget, Rng& rng) {
  const auto core_est = estimate_tokens(text::join(core, " "), budget);
  if (static_cast<double>(core_est) > budget.upper())
    throw BudgetTooSmall("core items already estimate " +
                         std::to_string(core_est) + " tokens");
  if (budget.in_band(core_est)) return core;

  std::unordered_set<std::string> exclude(core.begin(), core.end());
  std::vector<std::size_t> order;
  for (std::size_t i = 0; i < vocab.size(); ++i)
    if (!exclude.count(vocab.words()[i])) order.push_back(i);

  // Draw filler lazily (partial shuffle) until the estimate reaches the band.
  std::vector<std::string> filler;
  std::size_t words = core.size();
  std::size_t chars = 0;
  for (const auto& w : core) chars += w.size();
  auto estimate = [&] {
    const auto& e = budget.estimator;
    if (e.kind == TokenEstimator::Kind::CharsPerToken)
      return ceil_div((chars + (words ? words - 1 : 0)) * e.den, e.num);
    return ceil_div(words * e.num, e.den);
  };
  while (static_cast<double>(estimate()) < budget.lower()) {
    std::size_t k = filler.size();
    if (k >= order.size())
      throw InsufficientVocabulary("vocabulary too small to fill the budget");
    std::swap(order[k], order[k + rng.below(order.size() - k)]);
    filler.push_back(vocab.words()[order[k]]);
    ++words;
    chars += filler.back().size();
  }
  if (!budget.in_band(estimate()))
    throw BudgetTooSmall("filler overshoots the budget band");

  // Positions for core items among the final sequence, in ascending order.
  const std::size_t total = core.size() + filler.size();
  auto core_pos = rng.choose(total, core.size());
  std::vector<std::string> out;
  out.reserve(total);
  std::size_t ci = 0, fi = 0;
  for (std::size_t i = 0; i < total; ++i) {
    if (ci < core_pos.size() && core_pos[ci] == i)
      out.push_back(core[ci++]);
    else
      out.push_back(filler[fi++]);
  }
  return out;
}

}  // namespace memprobe
