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

#include <algorithm>
#include <random>

#include <gtest/gtest.h>

#include "mrqa/augmenter.h"
#include "mrqa/error.h"
#include "support/synth.h"
#include "support/tempdir.h"

namespace mrqa {
namespace {

using Strings = std::vector<std::string>;

Example whitespace_example(const std::string& context, const std::string& answer,
                           const std::string& qid = "q1", std::size_t occurrence = 0) {
  Example e;
  e.dataset = "D";
  e.qa.qid = qid;
  e.example_uid = make_example_uid("D", qid);
  e.context = context;
  e.context_tokens = whitespace_tokenize(context);
  e.qa.question = "what is it ?";
  e.qa.question_tokens = whitespace_tokenize(e.qa.question);
  const Strings ans_words = [&] {
    Strings w;
    for (const auto& t : whitespace_tokenize(answer)) w.push_back(t.text);
    return w;
  }();
  std::size_t seen = 0;
  for (std::size_t i = 0; i + ans_words.size() <= e.context_tokens.size(); ++i) {
    bool ok = true;
    for (std::size_t k = 0; k < ans_words.size(); ++k) ok = ok && e.context_tokens[i + k].text == ans_words[k];
    if (ok && seen++ == occurrence) {
      e.qa.detected_answers.push_back(testing::answer_at(e, static_cast<std::int64_t>(i),
                                                         static_cast<std::int64_t>(i + ans_words.size() - 1)));
      break;
    }
  }
  e.qa.gold_answers = {answer};
  return e;
}

TEST(Jaccard, HandValues) {
  EXPECT_EQ(jaccard_2gram("cat", "cat"), 1.0);
  EXPECT_EQ(jaccard_2gram("night", "nacht"), 1.0 / 7.0);
  EXPECT_EQ(jaccard_2gram("einstein", "einsteins"), 1.0);
  EXPECT_EQ(jaccard_2gram("a", "a"), 1.0);
  EXPECT_EQ(jaccard_2gram("a", "ab"), 0.0);
  EXPECT_EQ(jaccard_2gram("Cat", "cat"), 1.0 / 3.0);
  // Multi-byte characters form one gram unit each.
  EXPECT_EQ(jaccard_2gram("éa", "éa"), 1.0);
  EXPECT_EQ(jaccard_2gram("éa", "èa"), 0.0);
  EXPECT_THROW(jaccard_2gram("", "a"), InvalidArgument);
}

// Direct set computation over std::string pairs.
double jaccard_oracle(const std::string& a, const std::string& b) {
  auto grams = [](const std::string& t) {
    std::set<std::string> g;
    if (t.size() == 1) g.insert(t);
    for (std::size_t i = 0; i + 1 < t.size(); ++i) g.insert(t.substr(i, 2));
    return g;
  };
  const auto ga = grams(a), gb = grams(b);
  std::size_t common = 0;
  for (const auto& x : ga) common += gb.count(x);
  return static_cast<double>(common) / static_cast<double>(ga.size() + gb.size() - common);
}

TEST(Jaccard, MatchesSetOracleAndIsSymmetric) {
  std::mt19937_64 rng(1);
  for (int c = 0; c < 2000; ++c) {
    std::string a(1 + rng() % 7, 'a'), b(1 + rng() % 7, 'a');
    for (char& ch : a) ch = static_cast<char>('a' + rng() % 4);
    for (char& ch : b) ch = static_cast<char>('a' + rng() % 4);
    EXPECT_DOUBLE_EQ(jaccard_2gram(a, b), jaccard_oracle(a, b)) << a << " " << b;
    EXPECT_EQ(jaccard_2gram(a, b), jaccard_2gram(b, a));
  }
}

TEST(Remap, ExactMatchWins) {
  const Strings para = {"In", "1905", "Albert", "Einstein", "wrote", "Albert", "Einstein"};
  const auto r = remap_answer(para, Strings{"Albert", "Einstein"}, 0.8, 5);
  ASSERT_TRUE(r);
  EXPECT_EQ(r->start, 2u);
  EXPECT_EQ(r->end, 3u);
  EXPECT_EQ(r->score, kExactMatchScore);
  EXPECT_TRUE(r->exact);
}

TEST(Remap, NearMatchViaBigrams) {
  const auto r = remap_answer(Strings{"the", "Einsteins", "wrote"}, Strings{"Einstein"}, 0.8, 5);
  ASSERT_TRUE(r);
  EXPECT_EQ(r->start, 1u);
  EXPECT_EQ(r->end, 1u);
  EXPECT_DOUBLE_EQ(r->score, 2.0);
  EXPECT_FALSE(r->exact);
}

TEST(Remap, CaseFoldedFuzzyCaseSensitiveExact) {
  const auto r = remap_answer(Strings{"met", "EINSTEIN", "there"}, Strings{"Einstein"}, 0.8, 5);
  ASSERT_TRUE(r);
  EXPECT_FALSE(r->exact);
  EXPECT_EQ(r->start, 1u);
}

TEST(Remap, BelowThresholdIsNone) {
  EXPECT_FALSE(remap_answer(Strings{"dog", "barks", "loud"}, Strings{"night"}, 0.8, 5));
  EXPECT_FALSE(remap_answer(Strings{}, Strings{"x"}, 0.8, 5));
}

TEST(Remap, SlackBoundsSpanLength) {
  const Strings para = {"Albert", "b", "c", "d", "Einstein"};
  const Strings ans = {"Albert", "Xx", "Einstein"};
  // Needs j - i = 4 <= |a| - 1 + slack.
  EXPECT_FALSE(remap_answer(para, ans, 1.5, 1));
  const auto r = remap_answer(para, ans, 1.5, 2);
  ASSERT_TRUE(r);
  EXPECT_EQ(r->end, 4u);
}

std::optional<RemappedSpan> remap_oracle(const Strings& para, const Strings& ans, double tau, std::int64_t slack) {
  for (std::size_t i = 0; i + ans.size() <= para.size(); ++i) {
    if (std::equal(ans.begin(), ans.end(), para.begin() + static_cast<std::ptrdiff_t>(i))) {
      return RemappedSpan{i, i + ans.size() - 1, 2.0, true};
    }
  }
  auto lower = [](std::string s) {
    for (char& c : s) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    return s;
  };
  std::optional<RemappedSpan> best;
  for (std::size_t i = 0; i < para.size(); ++i) {
    for (std::size_t j = i; j < para.size(); ++j) {
      if (static_cast<std::int64_t>(j - i) > static_cast<std::int64_t>(ans.size()) - 1 + slack) break;
      const double s = jaccard_oracle(lower(para[i]), lower(ans.front())) + jaccard_oracle(lower(para[j]), lower(ans.back()));
      if (!best || s > best->score) best = RemappedSpan{i, j, s, false};
    }
  }
  if (best && best->score >= tau) return best;
  return std::nullopt;
}

Strings random_tokens(std::mt19937_64& rng, std::size_t n) {
  static const Strings words = {"Ab", "ab", "abc", "bca", "cab", "b", "ca", "Abcd", "dcb", "a"};
  Strings out(n);
  for (auto& w : out) w = words[rng() % words.size()];
  return out;
}

TEST(Remap, MatchesBruteForce) {
  std::mt19937_64 rng(8);
  for (int c = 0; c < 1000; ++c) {
    const Strings para = random_tokens(rng, 1 + rng() % 12);
    const Strings ans = random_tokens(rng, 1 + rng() % 3);
    const double tau = 0.2 * static_cast<double>(rng() % 10);
    const std::int64_t slack = static_cast<std::int64_t>(rng() % 4);
    const auto got = remap_answer(para, ans, tau, slack);
    const auto want = remap_oracle(para, ans, tau, slack);
    ASSERT_EQ(got.has_value(), want.has_value());
    if (!got) continue;
    EXPECT_EQ(got->start, want->start);
    EXPECT_EQ(got->end, want->end);
    EXPECT_DOUBLE_EQ(got->score, want->score);
    EXPECT_EQ(got->exact, want->exact);
  }
}

TEST(Remap, IdentityParaphraseRecoversSpan) {
  std::mt19937_64 rng(10);
  int recovered = 0;
  for (int c = 0; c < 1000; ++c) {
    const Strings sent = testing::random_words(rng, 3 + rng() % 30);
    const std::size_t s = rng() % sent.size();
    const std::size_t t = std::min(sent.size() - 1, s + rng() % 4);
    const Strings ans(sent.begin() + static_cast<std::ptrdiff_t>(s), sent.begin() + static_cast<std::ptrdiff_t>(t + 1));
    const auto r = remap_answer(sent, ans, kDefaultJaccardThreshold, kDefaultSpanSlack);
    ASSERT_TRUE(r);
    // First occurrence of the answer, which is at or before s.
    const auto first = std::search(sent.begin(), sent.end(), ans.begin(), ans.end()) - sent.begin();
    recovered += r->exact && r->score == 2.0 && r->start == static_cast<std::size_t>(first) &&
                 r->end == r->start + ans.size() - 1;
  }
  EXPECT_EQ(recovered, 1000);
}

TEST(Remap, ThresholdMonotone) {
  std::mt19937_64 rng(12);
  std::vector<std::pair<Strings, Strings>> cases;
  for (int c = 0; c < 500; ++c) cases.emplace_back(random_tokens(rng, 2 + rng() % 10), random_tokens(rng, 1 + rng() % 3));
  std::size_t prev = SIZE_MAX;
  for (int k = 1; k <= 9; ++k) {
    const double tau = 0.2 * k;
    std::size_t fuzzy = 0;
    for (const auto& [p, a] : cases) {
      const auto r = remap_answer(p, a, tau, kDefaultSpanSlack);
      fuzzy += r && !r->exact;
    }
    EXPECT_LE(fuzzy, prev) << "tau " << tau;
    prev = fuzzy;
  }
}

TEST(Sentences, FallbackSplitterAndAlignment) {
  const Example e = whitespace_example("Einstein was born in Ulm.  He moved to Bern! Why? ok", "Ulm.");
  const Strings s = split_sentences_fallback(e.context);
  EXPECT_EQ(s, (Strings{"Einstein was born in Ulm.", "He moved to Bern!", "Why?", "ok"}));
  const auto ranges = align_sentences(e, s);
  EXPECT_EQ(ranges, (std::vector<TokenRange>{{0, 5}, {5, 9}, {9, 10}, {10, 11}}));
  EXPECT_THROW(align_sentences(e, Strings{"Einstein was"}), InvalidArgument);
  EXPECT_THROW(align_sentences(e, Strings{"Einstein is born"}), InvalidArgument);
}

TEST(ParaphrasedContext, NothingReplacedIsIdentity) {
  const Example e = whitespace_example("A b c. D e f.", "e");
  const auto ranges = align_sentences(e, split_sentences_fallback(e.context));
  const auto pc = build_paraphrased_context(e, ranges, {}, 0.8, 5);
  ASSERT_TRUE(pc);
  EXPECT_EQ(pc->context, e.context);
  EXPECT_EQ(pc->tokens, e.context_tokens);
  EXPECT_EQ(pc->answers, e.qa.detected_answers);
}

TEST(ParaphrasedContext, LaterSentenceReplacedKeepsEarlierAnswer) {
  const Example e = whitespace_example("Einstein was born in Ulm. He moved to Bern.", "Ulm.");
  const auto ranges = align_sentences(e, split_sentences_fallback(e.context));
  const auto pc = build_paraphrased_context(e, ranges, {{1, "Later on he relocated to Bern."}}, 0.8, 5);
  ASSERT_TRUE(pc);
  EXPECT_EQ(pc->context, "Einstein was born in Ulm. Later on he relocated to Bern.");
  ASSERT_EQ(pc->answers.size(), 1u);
  EXPECT_EQ(pc->answers[0], e.qa.detected_answers[0]);
  EXPECT_EQ(pc->tokens.size(), 11u);
  EXPECT_EQ(pc->tokens[10].text, "Bern.");
  EXPECT_EQ(pc->tokens[10].char_start, 51);
}

TEST(ParaphrasedContext, EarlierSentenceReplacedShiftsAnswer) {
  const Example e = whitespace_example("He moved to Bern. Einstein was born in Ulm.", "Ulm.");
  ASSERT_EQ(e.qa.detected_answers[0].char_span, (Span{39, 42}));
  const auto ranges = align_sentences(e, split_sentences_fallback(e.context));
  // "Later on he relocated to Bern." is 13 bytes and 2 tokens longer.
  const auto pc = build_paraphrased_context(e, ranges, {{0, "Later on he relocated to Bern."}}, 0.8, 5);
  ASSERT_TRUE(pc);
  const DetectedAnswer& d = pc->answers.at(0);
  EXPECT_EQ(d.text, "Ulm.");
  EXPECT_EQ(d.char_span, (Span{39 + 13, 42 + 13}));
  EXPECT_EQ(d.token_span, (Span{8 + 2, 8 + 2}));
  Example aug = e;
  aug.context = pc->context;
  aug.context_tokens = pc->tokens;
  aug.qa.detected_answers = pc->answers;
  EXPECT_TRUE(validate_example(aug).empty());
}

TEST(ParaphrasedContext, AnswerInReplacedSentenceRemapped) {
  const Example e = whitespace_example("In 1905 Einstein published. Papers followed.", "Einstein");
  const auto ranges = align_sentences(e, split_sentences_fallback(e.context));
  const auto pc = build_paraphrased_context(e, ranges, {{0, "The Einsteins published in 1905."}}, 0.8, 5);
  ASSERT_TRUE(pc);
  EXPECT_EQ(pc->answers.at(0).text, "Einsteins");
  EXPECT_EQ(pc->answers.at(0).token_span, (Span{1, 1}));
}

TEST(ParaphrasedContext, UnrecoverableAnswerDropsExample) {
  const Example e = whitespace_example("In 1905 Einstein published. Papers followed.", "Einstein");
  const auto ranges = align_sentences(e, split_sentences_fallback(e.context));
  EXPECT_FALSE(build_paraphrased_context(e, ranges, {{0, "A physicist wrote in that year."}}, 0.8, 5));
}

TEST(ParaphrasedContext, AnswerCrossingReplacedSentenceDropped) {
  const Example e = whitespace_example("A b c. D e f.", "c. D");
  const auto ranges = align_sentences(e, split_sentences_fallback(e.context));
  EXPECT_FALSE(build_paraphrased_context(e, ranges, {{1, "G h."}}, 0.8, 5));
}

std::vector<Example> corpus(std::size_t n) {
  std::vector<Example> xs;
  for (std::size_t i = 0; i < n; ++i) {
    xs.push_back(whitespace_example("Einstein was born in Ulm. He moved to Bern in " + std::to_string(1890 + i) + ".",
                                    "Ulm.", "q" + std::to_string(i)));
  }
  return xs;
}

ParaphraseIndex all_paraphrases(const std::vector<Example>& xs) {
  ParaphraseIndex idx;
  for (const auto& e : xs) {
    idx.add({ParaphraseRecord::Kind::kQuery, e.qa.qid, "", 0, e.qa.question, "which one is it ?"});
    idx.add({ParaphraseRecord::Kind::kContextSentence, "", e.example_uid, 1, "", "Then he went to Bern."});
  }
  return idx;
}

TEST(Merge, ZeroProbabilitiesPassThrough) {
  const auto xs = corpus(20);
  AugmentConfig cfg;
  cfg.p_query = cfg.p_context = 0;
  const auto r = merge_augmentations(xs, all_paraphrases(xs), nullptr, nullptr, cfg);
  EXPECT_EQ(r.examples, xs);
  cfg.mode.kind = ScoreKind::kHard;
  EXPECT_EQ(merge_augmentations(xs, all_paraphrases(xs), nullptr, nullptr, cfg).examples, xs);
}

TEST(Merge, AllQueriesDoublesDataset) {
  const auto xs = corpus(30);
  AugmentConfig cfg;
  cfg.p_query = 1;
  cfg.p_context = 0;
  const auto r = merge_augmentations(xs, all_paraphrases(xs), nullptr, nullptr, cfg);
  ASSERT_EQ(r.examples.size(), 60u);
  EXPECT_EQ(r.stats.query_applied, 30u);
  for (std::size_t i = 0; i < 30; ++i) {
    EXPECT_EQ(r.examples[i], xs[i]);
    const Example& a = r.examples[30 + i];
    EXPECT_EQ(a.qa.qid, xs[i].qa.qid + "~aug");
    EXPECT_EQ(a.example_uid, "D/" + xs[i].qa.qid + "~aug");
    EXPECT_EQ(a.qa.question, "which one is it ?");
    EXPECT_EQ(a.qa.gold_answers, xs[i].qa.gold_answers);
    EXPECT_TRUE(validate_example(a).empty());
  }
}

TEST(Merge, SizeAccountingAndValidity) {
  const auto xs = corpus(200);
  for (auto kind : {ScoreKind::kRandom, ScoreKind::kHard, ScoreKind::kSoft}) {
    AugmentConfig cfg;
    cfg.mode.kind = kind;
    cfg.seed = 5;
    auto idx = all_paraphrases(xs);
    idx.queries.erase("q3");
    const auto r = merge_augmentations(xs, idx, nullptr, nullptr, cfg);
    EXPECT_GE(r.examples.size(), xs.size());
    EXPECT_LE(r.examples.size(), 2 * xs.size());
    EXPECT_EQ(r.examples.size(), xs.size() + r.stats.augmented);
    EXPECT_GT(r.stats.context_applied, 0u);
    for (std::size_t i = xs.size(); i < r.examples.size(); ++i) {
      EXPECT_TRUE(validate_example(r.examples[i]).empty());
      for (const auto& d : r.examples[i].qa.detected_answers) {
        EXPECT_EQ(r.examples[i].context.substr(static_cast<std::size_t>(d.char_span.start), d.text.size()), d.text);
      }
    }
    if (kind != ScoreKind::kRandom) {
      // round(p * n) draws per side.
      EXPECT_EQ(r.stats.query_applied + r.stats.query_chosen_unavailable, 40u);
      EXPECT_EQ(r.stats.context_applied + r.stats.context_without_answer, 80u);
    }
    EXPECT_EQ(r.examples, merge_augmentations(xs, idx, nullptr, nullptr, cfg).examples);
  }
}

TEST(Merge, SentenceSidecarAndUnknownTargets) {
  const auto xs = corpus(4);
  ParaphraseIndex idx = all_paraphrases(xs);
  idx.add({ParaphraseRecord::Kind::kQuery, "nope", "", 0, "", "x"});
  SentenceIndex sents;
  sents[xs[0].example_uid] = {"Einstein was born in Ulm.", "He moved to Bern in 1890."};
  AugmentConfig cfg;
  cfg.p_query = 0;
  cfg.p_context = 1;
  const auto r = merge_augmentations(xs, idx, &sents, nullptr, cfg);
  EXPECT_EQ(r.stats.unknown_targets, 1u);
  EXPECT_EQ(r.stats.context_applied, 1u);
  EXPECT_EQ(r.stats.context_chosen_unavailable, 3u);
  ASSERT_EQ(r.examples.size(), 5u);
  EXPECT_EQ(r.examples[4].context, "Einstein was born in Ulm. Then he went to Bern.");
}

TEST(Merge, HardModeFrequencyMatchesDistribution) {
  const auto xs = corpus(2);
  DifficultyTable diff = {{"q0", 1.0}, {"q1", 0.0}};
  AugmentConfig cfg;
  cfg.mode = {ScoreKind::kHard, 0.01};
  cfg.p_query = 0.5;  // one draw out of two
  cfg.p_context = 0;
  const ParaphraseIndex idx = all_paraphrases(xs);
  const int trials = 20000;
  int easy_chosen = 0;
  for (int s = 0; s < trials; ++s) {
    cfg.seed = static_cast<std::uint64_t>(s);
    const auto r = merge_augmentations(xs, idx, nullptr, &diff, cfg);
    ASSERT_EQ(r.examples.size(), 3u);
    easy_chosen += r.examples[2].qa.qid == "q0~aug";
  }
  EXPECT_NEAR(easy_chosen / double(trials), 0.01 / 1.02, 0.003);
}

TEST(Paraphrases, ReadKeepsOriginalForEmpty) {
  testing::TempDir dir;
  testing::spit(dir.file("p.jsonl"),
                "{\"target_kind\":\"query\",\"qid\":\"a\",\"original\":\"x\",\"paraphrase\":\"y z\"}\n"
                "{\"target_kind\":\"query\",\"qid\":\"b\",\"original\":\"x\",\"paraphrase\":\"  \"}\n"
                "{\"target_kind\":\"context_sentence\",\"example_uid\":\"D/a\",\"sentence_index\":2,"
                "\"original\":\"s\",\"paraphrase\":\"t\"}\n");
  const auto idx = read_paraphrases(dir.file("p.jsonl"));
  EXPECT_EQ(idx.queries.size(), 1u);
  EXPECT_EQ(idx.queries.at("a"), "y z");
  EXPECT_EQ(idx.kept_original, 1u);
  EXPECT_EQ(idx.sentences.at("D/a").at(2), "t");
  testing::spit(dir.file("bad.jsonl"), "{\"target_kind\":\"passage\",\"paraphrase\":\"t\"}\n");
  EXPECT_THROW(read_paraphrases(dir.file("bad.jsonl")), ValidationError);
}

}  // namespace
}  // namespace mrqa
