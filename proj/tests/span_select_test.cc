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

#include <random>

#include <gtest/gtest.h>

#include "mrqa/error.h"
#include "mrqa/evaluator.h"
#include "mrqa/span_select.h"
#include "support/oracles.h"
#include "support/synth.h"
#include "support/tempdir.h"

namespace mrqa {
namespace {

// A random segment with packed_length <= max_packed.
Segment random_segment(std::mt19937_64& rng, std::int64_t max_packed, int c) {
  SegmentOptions o;
  o.max_seq_len = max_packed;
  o.doc_stride = 1 + static_cast<std::int64_t>(rng() % 8);
  const std::size_t q = 1 + rng() % 10;
  const Example e = testing::make_example(rng, "D", "q" + std::to_string(c), 1 + rng() % 80, q, 1);
  auto segs = segment_example(e, o);
  return segs[rng() % segs.size()];
}

LogitsRecord random_logits(std::mt19937_64& rng, const Segment& s) {
  std::normal_distribution<double> g(0.0, 3.0);
  LogitsRecord r;
  r.segment_uid = s.segment_uid;
  r.qid = s.qid;
  for (std::int64_t i = 0; i < s.packed_length; ++i) {
    r.start_logits.push_back(g(rng));
    r.end_logits.push_back(g(rng));
  }
  return r;
}

void expect_matches_oracle(const LogitsRecord& r, const Segment& s, const SelectOptions& o) {
  const auto got = best_spans_in_segment(r, s, o);
  const auto want = testing::brute_spans(r, s, o.max_answer_len, o.raw_logit_scores);
  ASSERT_EQ(got.size(), std::min(o.beam, want.size()));
  for (std::size_t k = 0; k < got.size(); ++k) {
    EXPECT_EQ(got[k].start_pos, want[k].start) << s.segment_uid << " rank " << k;
    EXPECT_EQ(got[k].end_pos, want[k].end);
    EXPECT_NEAR(got[k].score, want[k].score, 1e-9);
  }
}

TEST(SpanSelect, MatchesExhaustiveEnumeration) {
  std::mt19937_64 rng(99);
  for (int c = 0; c < 1000; ++c) {
    const Segment s = random_segment(rng, 16 + static_cast<std::int64_t>(rng() % 25), c);
    ASSERT_LE(s.packed_length, 40);
    SelectOptions o;
    o.beam = 1 + rng() % 8;
    o.max_answer_len = 1 + static_cast<std::int64_t>(rng() % 12);
    o.raw_logit_scores = c % 5 == 0;
    LogitsRecord r = random_logits(rng, s);
    if (c % 7 == 0) r.abstain_index = s.context_offset() + static_cast<std::int64_t>(rng() % s.context_window_tokens.size());
    expect_matches_oracle(r, s, o);
  }
}

TEST(SpanSelect, PeakedLogitsPickThatSpan) {
  std::mt19937_64 rng(1);
  const Segment s = random_segment(rng, 40, 0);
  LogitsRecord r = random_logits(rng, s);
  const std::int64_t p = s.context_offset() + 1;
  r.start_logits[static_cast<std::size_t>(p)] = 50;
  r.end_logits[static_cast<std::size_t>(p)] = 50;
  const auto c = best_spans_in_segment(r, s, SelectOptions{});
  EXPECT_EQ(c.at(0).start_pos, p);
  EXPECT_EQ(c.at(0).end_pos, p);
}

TEST(SpanSelect, AbstainExcludedEvenWhenPeaked) {
  std::mt19937_64 rng(2);
  for (int c = 0; c < 200; ++c) {
    const Segment s = random_segment(rng, 40, c);
    LogitsRecord r = random_logits(rng, s);
    r.start_logits[0] = 1e3;
    r.end_logits[0] = 1e3;
    for (const auto& cand : best_spans_in_segment(r, s, SelectOptions{})) {
      EXPECT_NE(cand.start_pos, 0);
      EXPECT_NE(cand.end_pos, 0);
      EXPECT_GE(cand.start_pos, s.context_offset());
    }
    expect_matches_oracle(r, s, SelectOptions{});
  }
}

TEST(SpanSelect, ShiftInvariance) {
  std::mt19937_64 rng(3);
  for (int c = 0; c < 300; ++c) {
    const Segment s = random_segment(rng, 40, c);
    const LogitsRecord r = random_logits(rng, s);
    LogitsRecord shifted = r;
    const double a = (c % 2 ? 7.25 : -3.5), b = c % 3 ? 0.0 : 11.0;
    for (double& x : shifted.start_logits) x += a;
    for (double& x : shifted.end_logits) x += b;
    SelectOptions o;
    o.beam = 10;
    const auto x = best_spans_in_segment(r, s, o);
    const auto y = best_spans_in_segment(shifted, s, o);
    ASSERT_EQ(x.size(), y.size());
    for (std::size_t k = 0; k < x.size(); ++k) {
      EXPECT_EQ(x[k].start_pos, y[k].start_pos);
      EXPECT_EQ(x[k].end_pos, y[k].end_pos);
    }
  }
}

TEST(SpanSelect, MaxLenOneGivesSingleTokens) {
  std::mt19937_64 rng(4);
  const Segment s = random_segment(rng, 40, 0);
  SelectOptions o;
  o.max_answer_len = 1;
  o.beam = 100;
  for (const auto& c : best_spans_in_segment(random_logits(rng, s), s, o)) EXPECT_EQ(c.start_pos, c.end_pos);
}

TEST(SpanSelect, TextIsExactContextSubstring) {
  std::mt19937_64 rng(5);
  for (int c = 0; c < 100; ++c) {
    SegmentOptions o;
    o.max_seq_len = 64;
    o.doc_stride = 16;
    const Example e = testing::make_example(rng, "D", "q", 150, 5, 1);
    for (const Segment& s : segment_example(e, o)) {
      SelectOptions so;
      so.beam = 20;
      for (const auto& cand : best_spans_in_segment(random_logits(rng, s), s, so)) {
        const Token& a = e.context_tokens[static_cast<std::size_t>(s.window.start + cand.start_pos - s.context_offset())];
        const Token& b = e.context_tokens[static_cast<std::size_t>(s.window.start + cand.end_pos - s.context_offset())];
        EXPECT_EQ(cand.text, e.context.substr(static_cast<std::size_t>(a.char_start),
                                              static_cast<std::size_t>(b.char_end() - a.char_start)));
      }
    }
  }
}

TEST(SpanSelect, MisalignedLogitsNameSegment) {
  std::mt19937_64 rng(6);
  const Segment s = random_segment(rng, 40, 0);
  LogitsRecord r = random_logits(rng, s);
  r.start_logits.pop_back();
  r.end_logits.pop_back();
  try {
    best_spans_in_segment(r, s, SelectOptions{});
    FAIL();
  } catch (const InvalidArgument& e) {
    EXPECT_NE(std::string(e.what()).find(s.segment_uid), std::string::npos);
  }
}

SpanCandidate cand(const std::string& uid, std::int64_t ws, std::int64_t s, double score, const std::string& text) {
  return SpanCandidate{uid, ws, s, s, score, text};
}

TEST(Aggregate, BestAcrossSegmentsAndDedup) {
  const Prediction p = aggregate_example(
      "q", {cand("b", 128, 5, 2.5, "x"), cand("a", 0, 9, 3.0, "y"), cand("a", 0, 7, 1.0, "x"), cand("b", 128, 6, 2.0, "z")}, 5);
  EXPECT_EQ(p.text, "y");
  EXPECT_EQ(p.score, 3.0);
  ASSERT_EQ(p.n_best.size(), 3u);
  EXPECT_EQ(p.n_best[1].text, "x");
  EXPECT_EQ(p.n_best[1].score, 2.5);
  EXPECT_EQ(p.n_best[2].text, "z");

  const Prediction d = aggregate_example("q", {cand("a", 0, 3, 1.0, "t"), cand("b", 128, 3, 2.0, "t")}, 5);
  ASSERT_EQ(d.n_best.size(), 1u);
  EXPECT_EQ(d.n_best[0].score, 2.0);
  EXPECT_THROW(aggregate_example("q", {}, 5), InvalidArgument);
}

TEST(Aggregate, TiesPreferEarlierWindowThenStart) {
  const Prediction p = aggregate_example(
      "q", {cand("b", 128, 4, 1.0, "late"), cand("a", 0, 9, 1.0, "early9"), cand("a", 0, 8, 1.0, "early8")}, 5);
  EXPECT_EQ(p.text, "early8");
  EXPECT_EQ(p.n_best[1].text, "early9");
}

TEST(Aggregate, MatchesBruteForceOverUnion) {
  std::mt19937_64 rng(7);
  for (int c = 0; c < 200; ++c) {
    SegmentOptions o;
    o.max_seq_len = 30;
    o.doc_stride = 6;
    const Example e = testing::make_example(rng, "D", "q" + std::to_string(c), 40 + rng() % 20, 3, 1);
    const auto segs = segment_example(e, o);
    std::vector<LogitsRecord> logits;
    for (const auto& s : segs) logits.push_back(random_logits(rng, s));
    SelectOptions so;
    so.beam = 3;
    const auto preds = select_predictions(segs, logits, so);
    ASSERT_EQ(preds.size(), 1u);
    // Union of each segment's own top-beam, best score overall.
    double best = -1e300;
    for (std::size_t i = 0; i < segs.size(); ++i) {
      const auto all = testing::brute_spans(logits[i], segs[i], so.max_answer_len);
      if (!all.empty()) best = std::max(best, all[0].score);
    }
    EXPECT_NEAR(preds[0].score, best, 1e-9);
    for (std::size_t k = 1; k < preds[0].n_best.size(); ++k) EXPECT_GE(preds[0].n_best[k - 1].score, preds[0].n_best[k].score);
  }
}

TEST(Select, OrderErrorsAndParallelEquivalence) {
  std::vector<Segment> segs;
  SegmentOptions o;
  o.max_seq_len = 48;
  o.doc_stride = 12;
  for (const auto& e : testing::make_dataset(21, "D", 40, 10, 120)) {
    for (auto& s : segment_example(e, o)) segs.push_back(std::move(s));
  }
  std::vector<LogitsRecord> logits;
  for (const auto& s : segs) logits.push_back(testing::synthetic_logits(s, 5));
  const auto a = select_predictions(segs, logits, SelectOptions{}, 1);
  const auto b = select_predictions(segs, logits, SelectOptions{}, 4);
  ASSERT_EQ(a.size(), 40u);
  EXPECT_EQ(predictions_to_json(a).dump(), predictions_to_json(b).dump());
  EXPECT_EQ(nbest_to_json(a).dump(), nbest_to_json(b).dump());
  EXPECT_EQ(a[0].example_uid, segs[0].example_uid);

  auto stray = logits;
  stray[0].segment_uid = "nowhere#0";
  EXPECT_THROW(select_predictions(segs, stray, SelectOptions{}), InvalidArgument);
  // Dropping every logits record of the first example leaves it unscored.
  std::vector<LogitsRecord> partial;
  for (const auto& l : logits) if (l.qid != segs[0].qid) partial.push_back(l);
  EXPECT_THROW(select_predictions(segs, partial, SelectOptions{}), InvalidArgument);
  std::vector<Prediction> dup = {a[0], a[0]};
  EXPECT_THROW(predictions_to_json(dup), InvalidArgument);
  EXPECT_EQ(predictions_to_json(std::vector<Prediction>{}).dump(), "{}");
}

TEST(Logits, JsonRoundTripAndValidation) {
  LogitsRecord r{"D/q#0", "q", {0.5, -1.0, 2.0}, {1.0, 0.0, -0.25}, 0};
  const auto back = logits_from_json(nlohmann::json::parse(logits_to_json(r).dump()), "l", 1);
  EXPECT_EQ(back.start_logits, r.start_logits);
  EXPECT_EQ(back.end_logits, r.end_logits);
  testing::TempDir dir;
  testing::spit(dir.file("l.jsonl"),
                logits_to_json(r).dump() + "\n" +
                    "{\"segment_uid\":\"x\",\"start_logits\":[1,NaN],\"end_logits\":[1,2]}\n");
  try {
    read_logits(dir.file("l.jsonl"));
    FAIL();
  } catch (const FormatError& e) {
    EXPECT_EQ(e.line(), 2u);
  }
  auto j = nlohmann::json::parse(logits_to_json(r).dump());
  j["end_logits"].push_back(1.0);
  EXPECT_THROW(logits_from_json(j, "l", 3), ValidationError);
  j = nlohmann::json::parse(logits_to_json(r).dump());
  j["abstain_index"] = 3;
  EXPECT_THROW(logits_from_json(j, "l", 3), ValidationError);
  j = nlohmann::json::parse(logits_to_json(r).dump());
  j["start_logits"][1] = "big";
  EXPECT_THROW(logits_from_json(j, "l", 3), ValidationError);
  j = nlohmann::json::parse(logits_to_json(r).dump());
  j["start_logits"][1] = 1e308 * 10;
  EXPECT_THROW(logits_from_json(j, "l", 3), ValidationError);
}

// Predictions written to disk and read back by the evaluator score the same
// as evaluating the in-memory texts.
TEST(Select, EvaluatorRoundTrip) {
  const auto xs = testing::make_dataset(31, "D", 30, 10, 100);
  std::vector<Segment> segs;
  for (const auto& e : xs) for (auto& s : segment_example(e, SegmentOptions{})) segs.push_back(std::move(s));
  std::vector<LogitsRecord> logits;
  for (const auto& s : segs) logits.push_back(testing::synthetic_logits(s, 1));
  const auto preds = select_predictions(segs, logits, SelectOptions{});
  Predictions mem;
  for (const auto& p : preds) mem[p.qid] = p.text;
  testing::TempDir dir;
  testing::spit(dir.file("p.json"), predictions_to_json(preds).dump());
  const auto a = evaluate(mem, xs);
  const auto b = evaluate(read_predictions(dir.file("p.json")), xs);
  EXPECT_EQ(a.macro_em, b.macro_em);
  EXPECT_EQ(a.macro_f1, b.macro_f1);
  EXPECT_GT(a.macro_f1, 0.0);
}

}  // namespace
}  // namespace mrqa
