//
// Copyright 2026 The mrqa-prep Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
//

#ifndef MRQA_AUGMENTER_H_
#define MRQA_AUGMENTER_H_

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "mrqa/format.h"
#include "mrqa/sampler.h"
#include "mrqa/segmenter.h"

namespace mrqa {

// |G(a) & G(b)| / |G(a) | G(b)| over sets of adjacent code-point pairs. A
// one-character token contributes the character itself. Case-sensitive.
// Throws InvalidArgument on an empty token.
double jaccard_2gram(std::string_view a, std::string_view b);

struct RemappedSpan {
  std::size_t start = 0;  // token indices into the paraphrase, inclusive
  std::size_t end = 0;
  double score = 0.0;
  bool exact = false;
};

inline constexpr double kExactMatchScore = 2.0;

// Locates an answer inside a paraphrased sentence. A verbatim (case-sensitive)
// occurrence wins with score 2. Otherwise every start token i is scored
// against the first answer token and every end token j against the last, both
// case-folded, and the best pair with i <= j < i + |answer| + max_span_slack
// is returned if its summed score reaches `threshold`.
std::optional<RemappedSpan> remap_answer(std::span<const std::string> paraphrase_tokens,
                                         std::span<const std::string> answer_tokens,
                                         double threshold, std::int64_t max_span_slack);

inline constexpr double kDefaultJaccardThreshold = 0.8;
inline constexpr std::int64_t kDefaultSpanSlack = 5;

struct AugmentConfig {
  double p_query = 0.2;
  double p_context = 0.4;
  ScoreMode mode;
  double jaccard_threshold = kDefaultJaccardThreshold;
  std::int64_t max_span_slack = kDefaultSpanSlack;
  std::uint64_t seed = 0;
};

struct ParaphraseRecord {
  enum class Kind { kQuery, kContextSentence };
  Kind kind = Kind::kQuery;
  std::string qid;          // kQuery
  std::string example_uid;  // kContextSentence
  std::int64_t sentence_index = 0;
  std::string original_text;
  std::string paraphrase_text;
};

struct ParaphraseIndex {
  std::unordered_map<std::string, std::string> queries;  // qid -> paraphrase
  std::unordered_map<std::string, std::map<std::int64_t, std::string>> sentences;
  // Records whose decoded paraphrase was empty; the original is kept.
  std::size_t kept_original = 0;

  void add(const ParaphraseRecord& record);
};

ParaphraseIndex read_paraphrases(const std::string& path);

// example_uid -> sentences.
using SentenceIndex = std::unordered_map<std::string, std::vector<std::string>>;
SentenceIndex read_sentences(const std::string& path);

// Splits after runs of . ! ? followed by whitespace. Meant for synthetic data.
std::vector<std::string> split_sentences_fallback(std::string_view text);

// Whitespace tokenization with byte offsets shifted by base_offset.
std::vector<Token> whitespace_tokenize(std::string_view text, std::int64_t base_offset = 0);

// Maps sentences onto context token ranges by walking non-whitespace
// characters. Throws InvalidArgument if the sentences do not reproduce the
// context up to whitespace.
std::vector<TokenRange> align_sentences(const Example& e, std::span<const std::string> sentences);

struct ParaphrasedContext {
  std::string context;
  std::vector<Token> tokens;
  std::vector<DetectedAnswer> answers;
};

// Replaces the given sentences and carries every detected answer over.
// Answers outside replaced sentences keep their text and shift; answers in a
// replaced sentence go through remap_answer; others are dropped. Returns
// nullopt when no answer survives.
std::optional<ParaphrasedContext> build_paraphrased_context(
    const Example& e, std::span<const TokenRange> sentences,
    const std::map<std::int64_t, std::string>& paraphrases, double threshold,
    std::int64_t max_span_slack);

inline constexpr std::string_view kAugmentedSuffix = "~aug";

struct AugmentStats {
  std::size_t originals = 0;
  std::size_t augmented = 0;
  std::size_t query_applied = 0;
  std::size_t context_applied = 0;
  std::size_t context_without_answer = 0;
  std::size_t query_chosen_unavailable = 0;
  std::size_t context_chosen_unavailable = 0;
  std::size_t unknown_targets = 0;
};

struct AugmentResult {
  std::vector<Example> examples;  // originals, then augmented copies
  AugmentStats stats;
};

// Per example, independently decides whether to use the query paraphrase and
// the context paraphrase. In random mode each side is a keyed Bernoulli draw;
// in weighted modes round(p * n) examples are drawn per side without
// replacement from the normalized difficulty scores. `sentences` may be null,
// in which case contexts are split with split_sentences_fallback.
AugmentResult merge_augmentations(std::span<const Example> dataset,
                                  const ParaphraseIndex& paraphrases,
                                  const SentenceIndex* sentences,
                                  const DifficultyTable* difficulty, const AugmentConfig& config);

}  // namespace mrqa

#endif  // MRQA_AUGMENTER_H_
