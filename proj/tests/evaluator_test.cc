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
#include "mrqa/sampler.h"
#include "support/oracles.h"
#include "support/synth.h"
#include "support/tempdir.h"

namespace mrqa {
namespace {

using Strings = std::vector<std::string>;

Example gold(const std::string& ds, const std::string& qid, const Strings& answers) {
  Example e;
  e.dataset = ds;
  e.qa.qid = qid;
  e.example_uid = make_example_uid(ds, qid);
  e.qa.gold_answers = answers;
  return e;
}

TEST(Normalize, HandCases) {
  EXPECT_EQ(normalize_text("The Cat!"), "cat");
  EXPECT_EQ(normalize_text("cat"), "cat");
  EXPECT_EQ(normalize_text("a  an the"), "");
  EXPECT_EQ(normalize_text("  Theater, anthem; a-b  "), "theater anthem ab");
  EXPECT_EQ(normalize_text("the\tend\n"), "end");
  EXPECT_EQ(normalize_text("Ünïcode the café"), "Ünïcode café");
  EXPECT_EQ(normalize_text("thé"), "thé");
}

TEST(ScoreQuestion, HandCases) {
  auto one = [](const std::string& p, const std::string& g) { return score_question(p, Strings{g}); };
  EXPECT_EQ(one("The Cat", "cat").em, 1);
  EXPECT_EQ(one("The Cat", "cat").f1, 1.0);
  EXPECT_EQ(one("cat sat", "cat").em, 0);
  EXPECT_DOUBLE_EQ(one("cat sat", "cat").f1, 2.0 / 3.0);
  EXPECT_EQ(one("", "cat").f1, 0.0);
  EXPECT_EQ(one("x y z", "x").f1, 0.5);
  EXPECT_EQ(one("the", "a").em, 1);
  EXPECT_EQ(one("the", "a").f1, 1.0);
  EXPECT_DOUBLE_EQ(one("cat cat", "cat").f1, 2.0 / 3.0);
  const auto m = score_question("blue whale", Strings{"orca", "the blue whale", "whale"});
  EXPECT_EQ(m.em, 1);
  EXPECT_THROW(score_question("x", Strings{}), InvalidArgument);
}

TEST(ScoreQuestion, SymmetricAndBounded) {
  std::mt19937_64 rng(4);
  for (int c = 0; c < 2000; ++c) {
    const auto a = testing::random_words(rng, rng() % 6);
    const auto b = testing::random_words(rng, rng() % 6);
    std::string p, g;
    for (const auto& w : a) p += w + " ";
    for (const auto& w : b) g += w + " ";
    const auto x = score_question(p, Strings{g});
    const auto y = score_question(g, Strings{p});
    EXPECT_DOUBLE_EQ(x.f1, y.f1);
    EXPECT_GE(x.f1, 0.0);
    EXPECT_LE(x.f1, 1.0);
    if (x.em == 1) {
      EXPECT_EQ(x.f1, 1.0);
    }
  }
}

TEST(Evaluate, MeansMissingAndUnknown) {
  const std::vector<Example> xs = {gold("A", "1", {"cat"}), gold("A", "2", {"dog"}), gold("B", "3", {"x"})};
  const Predictions p = {{"1", "cat"}, {"2", "fish"}, {"zzz", "nothing"}};
  const EvalReport r = evaluate(p, xs);
  ASSERT_EQ(r.per_dataset.size(), 2u);
  EXPECT_EQ(r.per_dataset[0].dataset, "A");
  EXPECT_DOUBLE_EQ(r.per_dataset[0].f1, 50.0);
  EXPECT_DOUBLE_EQ(r.per_dataset[1].f1, 0.0);
  EXPECT_EQ(r.per_dataset[1].missing, 1u);
  EXPECT_EQ(r.missing_predictions, 1u);
  EXPECT_EQ(r.unknown_predictions, 1u);
  EXPECT_DOUBLE_EQ(r.macro_f1, 25.0);
}

TEST(Evaluate, MacroIgnoresDatasetSize) {
  std::vector<QuestionScore> s;
  for (int i = 0; i < 10; ++i) s.push_back({"a" + std::to_string(i), "A", 0, 0.8});
  s.push_back({"b", "B", 0, 0.6});
  EXPECT_NEAR(summarize(s).macro_f1, 70.0, 1e-12);
  const auto before = summarize(s).macro_f1;
  auto doubled = s;
  for (int i = 0; i < 10; ++i) doubled.push_back({"c" + std::to_string(i), "A", 0, 0.8});
  EXPECT_DOUBLE_EQ(summarize(doubled).macro_f1, before);
}

TEST(Evaluate, OutDomainTableFixture) {
  std::vector<Example> xs;
  Predictions p;
  for (const auto& row : testing::out_domain_fixture()) {
    for (int i = 0; i < row.questions; ++i) {
      const std::string qid = std::string(row.dataset) + "-" + std::to_string(i);
      xs.push_back(gold(row.dataset, qid, {"x"}));
      p[qid] = i < row.exact ? "x" : i < row.exact + row.half ? "x y z" : "w";
    }
  }
  const EvalReport r = evaluate(p, xs);
  ASSERT_EQ(r.per_dataset.size(), 6u);
  for (std::size_t k = 0; k < 6; ++k) {
    EXPECT_NEAR(r.per_dataset[k].em, testing::out_domain_fixture()[k].em, 1e-9);
    EXPECT_NEAR(r.per_dataset[k].f1, testing::out_domain_fixture()[k].f1, 1e-9);
  }
  EXPECT_NEAR(r.macro_em, testing::kOutDomainMacroEm, 0.005);
  EXPECT_NEAR(r.macro_f1, testing::kOutDomainMacroF1, 0.005);
  const std::string table = format_report_table(r);
  EXPECT_NE(table.find("Macro-Average"), std::string::npos);
  EXPECT_NE(table.find("56.19"), std::string::npos);
  EXPECT_NE(table.find("66.92"), std::string::npos);
}

TEST(Difficulty, ExportFeedsSampler) {
  testing::TempDir dir;
  const std::vector<Example> xs = {gold("A", "1", {"x"}), gold("A", "2", {"x"}), gold("A", "3", {"p b c d"})};
  const Predictions p = {{"1", "x"}, {"2", "y"}, {"3", "p q r s"}};
  const EvalReport r = evaluate(p, xs);
  export_difficulty(r, dir.file("d.jsonl"));
  const DifficultyTable t = read_difficulty(dir.file("d.jsonl"));
  EXPECT_EQ(t.at("1"), 1.0);
  EXPECT_EQ(t.at("2"), 0.0);
  EXPECT_DOUBLE_EQ(t.at("3"), 0.25);  // p = r = 1/4
  EXPECT_NEAR(score({ScoreKind::kHard, 0.01}, t.at("3")), 0.76, 1e-12);
  EXPECT_EQ(testing::slurp(dir.file("d.jsonl")).substr(0, 22), "{\"qid\":\"1\",\"f1\":1.0}\n{");

  export_difficulty(evaluate({}, std::vector<Example>{}), dir.file("e.jsonl"));
  EXPECT_EQ(testing::slurp(dir.file("e.jsonl")), "");
}

TEST(Predictions, ReadErrors) {
  testing::TempDir dir;
  testing::spit(dir.file("p.json"), "{\"a\": \"x\", \"b\": \"\"}");
  EXPECT_EQ(read_predictions(dir.file("p.json")).size(), 2u);
  testing::spit(dir.file("bad.json"), "{\"a\": 3}");
  EXPECT_THROW(read_predictions(dir.file("bad.json")), FormatError);
  testing::spit(dir.file("arr.json"), "[\"a\"]");
  EXPECT_THROW(read_predictions(dir.file("arr.json")), FormatError);
}

TEST(Report, JsonShape) {
  const std::vector<Example> xs = {gold("A", "1", {"cat"})};
  const auto j = report_to_json(evaluate({{"1", "cat"}}, xs));
  EXPECT_TRUE(j.contains("per_question"));
  EXPECT_TRUE(j.contains("per_dataset"));
  EXPECT_TRUE(j.contains("macro"));
}

}  // namespace
}  // namespace mrqa
