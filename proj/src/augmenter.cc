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

#include "mrqa/augmenter.h"

#include <algorithm>
#include <cmath>
#include <unordered_set>

#include "mrqa/error.h"
#include "mrqa/jsonl.h"
#include "mrqa/keyed_rng.h"

namespace mrqa {
namespace {

bool is_space(char c) {
  return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' || c == '\v';
}

// Lenient UTF-8 decoding: malformed bytes decode as themselves.
std::vector<char32_t> decode_utf8(std::string_view s) {
  std::vector<char32_t> out;
  out.reserve(s.size());
  for (std::size_t i = 0; i < s.size();) {
    const auto c = static_cast<unsigned char>(s[i]);
    std::size_t len = c < 0x80 ? 1 : (c >> 5) == 0x6 ? 2 : (c >> 4) == 0xE ? 3 : (c >> 3) == 0x1E ? 4 : 0;
    if (len == 0 || i + len > s.size()) {
      out.push_back(c);
      ++i;
      continue;
    }
    char32_t cp = len == 1 ? c : len == 2 ? (c & 0x1F) : len == 3 ? (c & 0x0F) : (c & 0x07);
    bool ok = true;
    for (std::size_t k = 1; k < len; ++k) {
      const auto cc = static_cast<unsigned char>(s[i + k]);
      if ((cc & 0xC0) != 0x80) {
        ok = false;
        break;
      }
      cp = (cp << 6) | (cc & 0x3F);
    }
    if (!ok) {
      out.push_back(c);
      ++i;
      continue;
    }
    out.push_back(cp);
    i += len;
  }
  return out;
}

using GramSet = std::vector<std::uint64_t>;

GramSet char_bigrams(std::string_view token) {
  const std::vector<char32_t> cps = decode_utf8(token);
  GramSet grams;
  if (cps.size() == 1) {
    grams.push_back((std::uint64_t{1} << 63) | cps[0]);
    return grams;
  }
  grams.reserve(cps.size() - 1);
  for (std::size_t i = 0; i + 1 < cps.size(); ++i) {
    grams.push_back((static_cast<std::uint64_t>(cps[i]) << 32) | cps[i + 1]);
  }
  std::sort(grams.begin(), grams.end());
  grams.erase(std::unique(grams.begin(), grams.end()), grams.end());
  return grams;
}

double jaccard(const GramSet& a, const GramSet& b) {
  std::size_t common = 0;
  for (std::size_t i = 0, j = 0; i < a.size() && j < b.size();) {
    if (a[i] == b[j]) {
      ++common;
      ++i;
      ++j;
    } else if (a[i] < b[j]) {
      ++i;
    } else {
      ++j;
    }
  }
  const std::size_t uni = a.size() + b.size() - common;
  return uni == 0 ? 0.0 : static_cast<double>(common) / static_cast<double>(uni);
}

std::string ascii_lower(std::string_view s) {
  std::string out(s);
  for (char& c : out) {
    if (c >= 'A' && c <= 'Z') c = static_cast<char>(c - 'A' + 'a');
  }
  return out;
}

std::string trim(std::string_view s) {
  std::size_t b = 0, e = s.size();
  while (b < e && is_space(s[b])) ++b;
  while (e > b && is_space(s[e - 1])) --e;
  return std::string(s.substr(b, e - b));
}

constexpr std::string_view kQueryTag = "augment-query";
constexpr std::string_view kContextTag = "augment-context";

}  // namespace

double jaccard_2gram(std::string_view a, std::string_view b) {
  if (a.empty() || b.empty()) throw InvalidArgument("jaccard_2gram: empty token");
  return jaccard(char_bigrams(a), char_bigrams(b));
}

std::optional<RemappedSpan> remap_answer(std::span<const std::string> paraphrase_tokens,
                                         std::span<const std::string> answer_tokens,
                                         double threshold, std::int64_t max_span_slack) {
  if (paraphrase_tokens.empty() || answer_tokens.empty()) return std::nullopt;

  auto hit = std::search(paraphrase_tokens.begin(), paraphrase_tokens.end(), answer_tokens.begin(),
                         answer_tokens.end());
  if (hit != paraphrase_tokens.end()) {
    const auto start = static_cast<std::size_t>(hit - paraphrase_tokens.begin());
    return RemappedSpan{start, start + answer_tokens.size() - 1, kExactMatchScore, true};
  }

  const GramSet first = char_bigrams(ascii_lower(answer_tokens.front()));
  const GramSet last = char_bigrams(ascii_lower(answer_tokens.back()));
  const std::size_t n = paraphrase_tokens.size();
  std::vector<double> start_score(n), end_score(n);
  for (std::size_t i = 0; i < n; ++i) {
    if (paraphrase_tokens[i].empty()) continue;
    const GramSet g = char_bigrams(ascii_lower(paraphrase_tokens[i]));
    start_score[i] = jaccard(g, first);
    end_score[i] = jaccard(g, last);
  }

  const auto reach = static_cast<std::int64_t>(answer_tokens.size()) - 1 + std::max<std::int64_t>(0, max_span_slack);
  std::optional<RemappedSpan> best;
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t j_end = std::min(n - 1, i + static_cast<std::size_t>(reach));
    for (std::size_t j = i; j <= j_end; ++j) {
      const double s = start_score[i] + end_score[j];
      if (!best || s > best->score) best = RemappedSpan{i, j, s, false};
    }
  }
  if (best && best->score >= threshold) return best;
  return std::nullopt;
}

void ParaphraseIndex::add(const ParaphraseRecord& record) {
  const std::string text = trim(record.paraphrase_text);
  if (text.empty()) {
    ++kept_original;
    return;
  }
  if (record.kind == ParaphraseRecord::Kind::kQuery) {
    queries[record.qid] = text;
  } else {
    sentences[record.example_uid][record.sentence_index] = text;
  }
}

ParaphraseIndex read_paraphrases(const std::string& path) {
  ParaphraseIndex index;
  LineReader reader(path);
  while (auto line = reader.next()) {
    if (line->find_first_not_of(" \t") == std::string_view::npos) continue;
    const std::size_t ln = reader.line_number();
    const auto j = parse_json_line(*line, path, ln);
    try {
      ParaphraseRecord r;
      const std::string kind = j.at("target_kind").get<std::string>();
      if (kind == "query") {
        r.kind = ParaphraseRecord::Kind::kQuery;
        r.qid = j.at("qid").get<std::string>();
      } else if (kind == "context_sentence") {
        r.kind = ParaphraseRecord::Kind::kContextSentence;
        r.example_uid = j.at("example_uid").get<std::string>();
        r.sentence_index = j.at("sentence_index").get<std::int64_t>();
      } else {
        throw ValidationError(path, ln, "target_kind must be 'query' or 'context_sentence'");
      }
      r.original_text = j.value("original", std::string());
      r.paraphrase_text = j.at("paraphrase").get<std::string>();
      index.add(r);
    } catch (const nlohmann::json::exception& e) {
      throw ValidationError(path, ln, std::string("bad paraphrase record: ") + e.what());
    }
  }
  return index;
}

SentenceIndex read_sentences(const std::string& path) {
  SentenceIndex index;
  LineReader reader(path);
  while (auto line = reader.next()) {
    if (line->find_first_not_of(" \t") == std::string_view::npos) continue;
    const std::size_t ln = reader.line_number();
    const auto j = parse_json_line(*line, path, ln);
    try {
      index[j.at("example_uid").get<std::string>()] =
          j.at("sentences").get<std::vector<std::string>>();
    } catch (const nlohmann::json::exception& e) {
      throw ValidationError(path, ln, std::string("bad sentence record: ") + e.what());
    }
  }
  return index;
}

std::vector<std::string> split_sentences_fallback(std::string_view text) {
  std::vector<std::string> out;
  std::size_t begin = 0;
  for (std::size_t i = 0; i < text.size(); ++i) {
    const char c = text[i];
    if (c != '.' && c != '!' && c != '?') continue;
    std::size_t k = i;
    while (k + 1 < text.size() && (text[k + 1] == '.' || text[k + 1] == '!' || text[k + 1] == '?')) ++k;
    if (k + 1 < text.size() && is_space(text[k + 1])) {
      std::string s = trim(text.substr(begin, k + 1 - begin));
      if (!s.empty()) out.push_back(std::move(s));
      begin = k + 1;
    }
    i = k;
  }
  std::string tail = trim(text.substr(begin));
  if (!tail.empty()) out.push_back(std::move(tail));
  return out;
}

std::vector<Token> whitespace_tokenize(std::string_view text, std::int64_t base_offset) {
  std::vector<Token> out;
  std::size_t i = 0;
  while (i < text.size()) {
    while (i < text.size() && is_space(text[i])) ++i;
    const std::size_t b = i;
    while (i < text.size() && !is_space(text[i])) ++i;
    if (i > b) out.push_back(Token{std::string(text.substr(b, i - b)), base_offset + static_cast<std::int64_t>(b)});
  }
  return out;
}

std::vector<TokenRange> align_sentences(const Example& e, std::span<const std::string> sentences) {
  const std::string& ctx = e.context;
  std::vector<std::int32_t> owner(ctx.size(), -1);
  std::size_t p = 0;
  for (std::size_t si = 0; si < sentences.size(); ++si) {
    for (char c : sentences[si]) {
      if (is_space(c)) continue;
      while (p < ctx.size() && is_space(ctx[p])) ++p;
      if (p >= ctx.size() || ctx[p] != c) {
        throw InvalidArgument(e.example_uid + ": sentence " + std::to_string(si) +
                              " does not match the context at byte " + std::to_string(p));
      }
      owner[p++] = static_cast<std::int32_t>(si);
    }
  }
  while (p < ctx.size() && is_space(ctx[p])) ++p;
  if (p != ctx.size()) {
    throw InvalidArgument(e.example_uid + ": sentences end before the context does");
  }

  std::vector<TokenRange> ranges(sentences.size());
  std::int64_t prev_owner = 0;
  std::int64_t cursor = 0;
  const auto n_tokens = static_cast<std::int64_t>(e.context_tokens.size());
  for (std::int64_t t = 0; t < n_tokens; ++t) {
    const auto at = static_cast<std::size_t>(e.context_tokens[static_cast<std::size_t>(t)].char_start);
    std::int64_t o = at < owner.size() ? owner[at] : -1;
    if (o < prev_owner) o = prev_owner;  // keep ranges contiguous
    for (; prev_owner < o; ++prev_owner) {
      ranges[static_cast<std::size_t>(prev_owner)] = {cursor, t};
      cursor = t;
    }
  }
  for (; prev_owner < static_cast<std::int64_t>(sentences.size()); ++prev_owner) {
    ranges[static_cast<std::size_t>(prev_owner)] = {cursor, n_tokens};
    cursor = n_tokens;
  }
  return ranges;
}

std::optional<ParaphrasedContext> build_paraphrased_context(
    const Example& e, std::span<const TokenRange> sentences,
    const std::map<std::int64_t, std::string>& paraphrases, double threshold,
    std::int64_t max_span_slack) {
  const auto& tokens = e.context_tokens;
  ParaphrasedContext out;
  out.context.reserve(e.context.size());
  out.tokens.reserve(tokens.size());

  const std::size_t n_tokens = tokens.size();
  std::vector<std::int64_t> new_index(n_tokens, -1);  // -1: token was replaced
  std::vector<std::int64_t> sentence_of(n_tokens, -1);
  // Per replaced sentence: first new token index and token count.
  std::map<std::int64_t, std::pair<std::int64_t, std::int64_t>> replaced;

  std::int64_t old_pos = 0;  // bytes of the original context consumed
  for (std::size_t si = 0; si < sentences.size(); ++si) {
    const TokenRange& r = sentences[si];
    if (r.size() <= 0) continue;
    for (std::int64_t t = r.start; t < r.end; ++t) sentence_of[static_cast<std::size_t>(t)] = static_cast<std::int64_t>(si);
    const std::int64_t s_begin = tokens[static_cast<std::size_t>(r.start)].char_start;
    const std::int64_t s_end = tokens[static_cast<std::size_t>(r.end - 1)].char_end();
    out.context.append(e.context, static_cast<std::size_t>(old_pos), static_cast<std::size_t>(s_begin - old_pos));
    const std::int64_t new_begin = static_cast<std::int64_t>(out.context.size());

    auto it = paraphrases.find(static_cast<std::int64_t>(si));
    if (it == paraphrases.end()) {
      const std::int64_t delta = new_begin - s_begin;
      for (std::int64_t t = r.start; t < r.end; ++t) {
        const Token& tok = tokens[static_cast<std::size_t>(t)];
        new_index[static_cast<std::size_t>(t)] = static_cast<std::int64_t>(out.tokens.size());
        out.tokens.push_back(Token{tok.text, tok.char_start + delta});
      }
      out.context.append(e.context, static_cast<std::size_t>(s_begin), static_cast<std::size_t>(s_end - s_begin));
    } else {
      const auto first = static_cast<std::int64_t>(out.tokens.size());
      std::vector<Token> pt = whitespace_tokenize(it->second, new_begin);
      replaced[static_cast<std::int64_t>(si)] = {first, static_cast<std::int64_t>(pt.size())};
      for (Token& tok : pt) out.tokens.push_back(std::move(tok));
      out.context.append(it->second);
    }
    old_pos = s_end;
  }
  out.context.append(e.context, static_cast<std::size_t>(old_pos), std::string::npos);

  auto text_of = [&](std::int64_t s, std::int64_t t) {
    const Token& a = out.tokens[static_cast<std::size_t>(s)];
    const Token& b = out.tokens[static_cast<std::size_t>(t)];
    return out.context.substr(static_cast<std::size_t>(a.char_start),
                              static_cast<std::size_t>(b.char_end() - a.char_start));
  };

  for (const DetectedAnswer& d : e.qa.detected_answers) {
    const Span& ts = d.token_span;
    if (ts.start < 0 || ts.start > ts.end || ts.end >= static_cast<std::int64_t>(n_tokens)) continue;
    const auto s = static_cast<std::size_t>(ts.start);
    const auto t = static_cast<std::size_t>(ts.end);
    DetectedAnswer nd;
    if (new_index[s] >= 0 && new_index[t] >= 0) {
      bool untouched = true;
      for (std::size_t k = s; k <= t; ++k) untouched = untouched && new_index[k] >= 0;
      if (!untouched) continue;
      nd.token_span = {new_index[s], new_index[t]};
    } else if (sentence_of[s] >= 0 && sentence_of[s] == sentence_of[t]) {
      const auto& [first, count] = replaced.at(sentence_of[s]);
      std::vector<std::string> para(static_cast<std::size_t>(count));
      for (std::int64_t k = 0; k < count; ++k) para[static_cast<std::size_t>(k)] = out.tokens[static_cast<std::size_t>(first + k)].text;
      std::vector<std::string> answer;
      for (std::size_t k = s; k <= t; ++k) answer.push_back(tokens[k].text);
      auto hit = remap_answer(para, answer, threshold, max_span_slack);
      if (!hit) continue;
      nd.token_span = {first + static_cast<std::int64_t>(hit->start), first + static_cast<std::int64_t>(hit->end)};
    } else {
      continue;  // crosses a replaced sentence boundary
    }
    nd.text = text_of(nd.token_span.start, nd.token_span.end);
    const Token& a = out.tokens[static_cast<std::size_t>(nd.token_span.start)];
    nd.char_span = {a.char_start, a.char_start + static_cast<std::int64_t>(nd.text.size()) - 1};
    out.answers.push_back(std::move(nd));
  }
  if (out.answers.empty()) return std::nullopt;
  return out;
}

AugmentResult merge_augmentations(std::span<const Example> dataset,
                                  const ParaphraseIndex& paraphrases,
                                  const SentenceIndex* sentences,
                                  const DifficultyTable* difficulty, const AugmentConfig& config) {
  if (!(config.p_query >= 0.0 && config.p_query <= 1.0) ||
      !(config.p_context >= 0.0 && config.p_context <= 1.0)) {
    throw InvalidArgument("augmentation probabilities must lie in [0, 1]");
  }
  AugmentResult result;
  const std::size_t n = dataset.size();
  result.stats.originals = n;

  {
    std::unordered_set<std::string_view> qids, uids;
    for (const Example& e : dataset) {
      qids.insert(e.qa.qid);
      uids.insert(e.example_uid);
    }
    for (const auto& [qid, text] : paraphrases.queries) result.stats.unknown_targets += qids.count(qid) ? 0 : 1;
    for (const auto& [uid, m] : paraphrases.sentences) result.stats.unknown_targets += uids.count(uid) ? 0 : m.size();
  }

  std::vector<bool> use_q(n, false), use_c(n, false);
  if (config.mode.kind == ScoreKind::kRandom) {
    for (std::size_t i = 0; i < n; ++i) {
      use_q[i] = keyed_uniform(config.seed, kQueryTag, dataset[i].example_uid) < config.p_query;
      use_c[i] = keyed_uniform(config.seed, kContextTag, dataset[i].example_uid) < config.p_context;
    }
  } else if (n > 0) {
    std::vector<double> scores(n);
    for (std::size_t i = 0; i < n; ++i) {
      const double f1 = difficulty ? difficulty_f1(*difficulty, dataset[i].qa.qid) : 0.0;
      scores[i] = score(config.mode, f1);
    }
    const std::vector<double> probs = normalize(scores);
    const auto k_q = static_cast<std::size_t>(std::llround(config.p_query * static_cast<double>(n)));
    const auto k_c = static_cast<std::size_t>(std::llround(config.p_context * static_cast<double>(n)));
    for (std::size_t i : weighted_sample_indices(probs, k_q, keyed_bits(config.seed, kQueryTag, "")))
      use_q[i] = true;
    for (std::size_t i : weighted_sample_indices(probs, k_c, keyed_bits(config.seed, kContextTag, "")))
      use_c[i] = true;
  }

  result.examples.assign(dataset.begin(), dataset.end());
  for (std::size_t i = 0; i < n; ++i) {
    if (!use_q[i] && !use_c[i]) continue;
    const Example& e = dataset[i];
    Example aug = e;
    bool applied = false;

    if (use_q[i]) {
      auto it = paraphrases.queries.find(e.qa.qid);
      if (it != paraphrases.queries.end()) {
        aug.qa.question = it->second;
        aug.qa.question_tokens = whitespace_tokenize(it->second);
        applied = true;
        ++result.stats.query_applied;
      } else {
        ++result.stats.query_chosen_unavailable;
      }
    }

    if (use_c[i]) {
      auto it = paraphrases.sentences.find(e.example_uid);
      std::vector<std::string> fallback;
      const std::vector<std::string>* sents = nullptr;
      if (sentences != nullptr) {
        auto s = sentences->find(e.example_uid);
        if (s != sentences->end()) sents = &s->second;
      } else {
        fallback = split_sentences_fallback(e.context);
        sents = &fallback;
      }
      if (it == paraphrases.sentences.end() || sents == nullptr) {
        ++result.stats.context_chosen_unavailable;
      } else {
        const std::vector<TokenRange> ranges = align_sentences(e, *sents);
        std::map<std::int64_t, std::string> usable;
        for (const auto& [idx, text] : it->second) {
          if (idx >= 0 && idx < static_cast<std::int64_t>(ranges.size())) usable.emplace(idx, text);
        }
        auto pc = build_paraphrased_context(e, ranges, usable, config.jaccard_threshold,
                                            config.max_span_slack);
        if (pc) {
          aug.context = std::move(pc->context);
          aug.context_tokens = std::move(pc->tokens);
          aug.qa.detected_answers = std::move(pc->answers);
          applied = true;
          ++result.stats.context_applied;
        } else {
          ++result.stats.context_without_answer;
        }
      }
    }

    if (!applied) continue;
    aug.qa.qid += kAugmentedSuffix;
    aug.example_uid = make_example_uid(aug.dataset, aug.qa.qid);
    result.examples.push_back(std::move(aug));
    ++result.stats.augmented;
  }
  return result;
}

}  // namespace mrqa
