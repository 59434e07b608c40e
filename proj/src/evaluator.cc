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

#include "mrqa/evaluator.h"

#include <algorithm>
#include <cstdio>
#include <map>
#include <unordered_set>

#include "mrqa/error.h"
#include "mrqa/jsonl.h"

namespace mrqa {
namespace {

bool is_punct(unsigned char c) {
  return (c >= 33 && c <= 47) || (c >= 58 && c <= 64) || (c >= 91 && c <= 96) ||
         (c >= 123 && c <= 126);
}

// Approximates the regex \w class; non-ASCII bytes count as word characters.
bool is_word(unsigned char c) {
  return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') || c == '_' ||
         c >= 0x80;
}

bool is_space(char c) {
  return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' || c == '\v';
}

std::vector<std::string_view> split_ws(std::string_view s) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < s.size()) {
    while (i < s.size() && is_space(s[i])) ++i;
    const std::size_t b = i;
    while (i < s.size() && !is_space(s[i])) ++i;
    if (i > b) out.push_back(s.substr(b, i - b));
  }
  return out;
}

double token_f1(const std::string& pred, const std::string& gold) {
  const auto p = split_ws(pred);
  const auto g = split_ws(gold);
  if (p.empty() && g.empty()) return 1.0;
  if (p.empty() || g.empty()) return 0.0;
  std::map<std::string_view, int> counts;
  for (auto t : g) ++counts[t];
  int common = 0;
  for (auto t : p) {
    auto it = counts.find(t);
    if (it != counts.end() && it->second > 0) {
      --it->second;
      ++common;
    }
  }
  if (common == 0) return 0.0;
  const double precision = static_cast<double>(common) / static_cast<double>(p.size());
  const double recall = static_cast<double>(common) / static_cast<double>(g.size());
  return 2.0 * precision * recall / (precision + recall);
}

}  // namespace

std::string normalize_text(std::string_view s) {
  std::string text;
  text.reserve(s.size());
  for (char c : s) {
    const auto u = static_cast<unsigned char>(c);
    if (is_punct(u)) continue;
    text.push_back(c >= 'A' && c <= 'Z' ? static_cast<char>(c - 'A' + 'a') : c);
  }

  std::string no_articles;
  no_articles.reserve(text.size());
  for (std::size_t i = 0; i < text.size();) {
    const bool boundary_before = i == 0 || !is_word(static_cast<unsigned char>(text[i - 1]));
    std::size_t matched = 0;
    if (boundary_before) {
      for (std::string_view art : {"a", "an", "the"}) {
        if (text.compare(i, art.size(), art) == 0) {
          const std::size_t end = i + art.size();
          if (end == text.size() || !is_word(static_cast<unsigned char>(text[end]))) {
            matched = art.size();
            break;
          }
        }
      }
    }
    if (matched > 0) {
      no_articles.push_back(' ');
      i += matched;
    } else {
      no_articles.push_back(text[i++]);
    }
  }

  std::string out;
  for (auto tok : split_ws(no_articles)) {
    if (!out.empty()) out.push_back(' ');
    out.append(tok);
  }
  return out;
}

QuestionScore score_question(std::string_view prediction, std::span<const std::string> golds) {
  if (golds.empty()) throw InvalidArgument("score_question: no gold answers");
  QuestionScore q;
  const std::string p = normalize_text(prediction);
  for (const std::string& g : golds) {
    const std::string ng = normalize_text(g);
    if (p == ng) q.em = 1;
    q.f1 = std::max(q.f1, token_f1(p, ng));
  }
  if (q.em == 1) q.f1 = 1.0;
  return q;
}

Predictions read_predictions(const std::string& path) {
  const nlohmann::json j = read_json_file(path);
  if (!j.is_object()) throw FormatError(path, 1, "predictions must be a JSON object");
  Predictions out;
  for (auto it = j.begin(); it != j.end(); ++it) {
    if (!it.value().is_string()) {
      throw ValidationError(path, 1, "prediction for '" + it.key() + "' is not a string");
    }
    out[it.key()] = it.value().get<std::string>();
  }
  return out;
}

EvalReport summarize(std::vector<QuestionScore> scores) {
  EvalReport r;
  std::map<std::string, std::size_t> slot;
  std::vector<double> em_sum, f1_sum;
  for (const QuestionScore& q : scores) {
    auto [it, fresh] = slot.emplace(q.dataset, r.per_dataset.size());
    if (fresh) {
      r.per_dataset.push_back(DatasetScore{q.dataset});
      em_sum.push_back(0.0);
      f1_sum.push_back(0.0);
    }
    ++r.per_dataset[it->second].questions;
    em_sum[it->second] += q.em;
    f1_sum[it->second] += q.f1;
  }
  for (std::size_t i = 0; i < r.per_dataset.size(); ++i) {
    DatasetScore& d = r.per_dataset[i];
    d.em = 100.0 * em_sum[i] / static_cast<double>(d.questions);
    d.f1 = 100.0 * f1_sum[i] / static_cast<double>(d.questions);
    r.macro_em += d.em;
    r.macro_f1 += d.f1;
  }
  if (!r.per_dataset.empty()) {
    r.macro_em /= static_cast<double>(r.per_dataset.size());
    r.macro_f1 /= static_cast<double>(r.per_dataset.size());
  }
  r.per_question = std::move(scores);
  return r;
}

EvalReport evaluate(const Predictions& predictions, std::span<const Example> gold) {
  std::vector<QuestionScore> scores;
  scores.reserve(gold.size());
  std::unordered_set<std::string_view> known;
  std::map<std::string, std::size_t> missing_by_dataset;
  std::size_t missing = 0;
  for (const Example& e : gold) {
    known.insert(e.qa.qid);
    auto it = predictions.find(e.qa.qid);
    QuestionScore q;
    if (it == predictions.end()) {
      ++missing;
      ++missing_by_dataset[e.dataset];
    } else {
      q = score_question(it->second, e.qa.gold_answers);
    }
    q.qid = e.qa.qid;
    q.dataset = e.dataset;
    scores.push_back(std::move(q));
  }
  EvalReport r = summarize(std::move(scores));
  r.missing_predictions = missing;
  for (DatasetScore& d : r.per_dataset) {
    auto it = missing_by_dataset.find(d.dataset);
    d.missing = it == missing_by_dataset.end() ? 0 : it->second;
  }
  for (const auto& [qid, text] : predictions) r.unknown_predictions += known.count(qid) ? 0 : 1;
  return r;
}

std::string format_report_table(const EvalReport& report) {
  std::size_t width = std::string_view("Macro-Average").size();
  for (const DatasetScore& d : report.per_dataset) width = std::max(width, d.dataset.size());
  std::string out;
  char buf[256];
  auto row = [&](std::string_view name, const char* em, const char* f1) {
    std::snprintf(buf, sizeof(buf), "%-*.*s  %8s  %8s\n", static_cast<int>(width),
                  static_cast<int>(name.size()), name.data(), em, f1);
    out += buf;
  };
  auto num = [](double v) {
    char b[32];
    std::snprintf(b, sizeof(b), "%.2f", v);
    return std::string(b);
  };
  row("Dataset", "EM", "F1");
  out += std::string(width + 20, '-') + "\n";
  for (const DatasetScore& d : report.per_dataset) row(d.dataset, num(d.em).c_str(), num(d.f1).c_str());
  out += std::string(width + 20, '-') + "\n";
  row("Macro-Average", num(report.macro_em).c_str(), num(report.macro_f1).c_str());
  return out;
}

nlohmann::ordered_json report_to_json(const EvalReport& report) {
  using nlohmann::ordered_json;
  ordered_json j = ordered_json::object();
  ordered_json pq = ordered_json::array();
  for (const QuestionScore& q : report.per_question) {
    ordered_json o = ordered_json::object();
    o["qid"] = q.qid;
    o["dataset"] = q.dataset;
    o["em"] = q.em;
    o["f1"] = q.f1;
    pq.push_back(std::move(o));
  }
  ordered_json pd = ordered_json::object();
  for (const DatasetScore& d : report.per_dataset) {
    ordered_json o = ordered_json::object();
    o["questions"] = d.questions;
    o["missing"] = d.missing;
    o["em"] = d.em;
    o["f1"] = d.f1;
    pd[d.dataset] = std::move(o);
  }
  j["per_question"] = std::move(pq);
  j["per_dataset"] = std::move(pd);
  j["macro"] = ordered_json{{"em", report.macro_em}, {"f1", report.macro_f1}};
  j["missing_predictions"] = report.missing_predictions;
  j["unknown_predictions"] = report.unknown_predictions;
  return j;
}

void export_difficulty(const EvalReport& report, const std::string& path) {
  LineWriter out(path);
  for (const QuestionScore& q : report.per_question) {
    nlohmann::ordered_json o = nlohmann::ordered_json::object();
    o["qid"] = q.qid;
    o["f1"] = q.f1;
    out.write(o.dump());
  }
  out.close();
}

}  // namespace mrqa
