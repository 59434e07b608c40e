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

#include "mrqa/sampler.h"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "mrqa/error.h"
#include "mrqa/jsonl.h"
#include "mrqa/keyed_rng.h"

namespace mrqa {
namespace {

constexpr std::string_view kCapTag = "cap";
constexpr std::string_view kWeightedTag = "weighted-sample";

// Binary indexed tree over non-negative weights.
class Fenwick {
 public:
  explicit Fenwick(std::span<const double> w) { rebuild(w); }

  void rebuild(std::span<const double> w) {
    tree_.assign(w.size() + 1, 0.0);
    for (std::size_t i = 0; i < w.size(); ++i) tree_[i + 1] = w[i];
    for (std::size_t i = 1; i < tree_.size(); ++i) {
      const std::size_t parent = i + (i & (~i + 1));
      if (parent < tree_.size()) tree_[parent] += tree_[i];
    }
  }

  void add(std::size_t index, double delta) {
    for (std::size_t i = index + 1; i < tree_.size(); i += i & (~i + 1)) tree_[i] += delta;
  }

  // Smallest index whose inclusive prefix sum exceeds target.
  std::size_t find(double target) const {
    std::size_t pos = 0;
    std::size_t step = 1;
    while (step * 2 < tree_.size()) step *= 2;
    for (; step > 0; step /= 2) {
      if (pos + step < tree_.size() && tree_[pos + step] <= target) {
        pos += step;
        target -= tree_[pos];
      }
    }
    return pos;
  }

 private:
  std::vector<double> tree_;
};

}  // namespace

std::int64_t CapConfig::cap_for(std::string_view dataset) const {
  auto it = per_dataset_caps.find(dataset);
  return it == per_dataset_caps.end() ? default_cap : it->second;
}

CapSelector::CapSelector(CapConfig config) : config_(std::move(config)) {}

std::uint64_t CapSelector::key_of(std::string_view uid) const {
  return keyed_bits(config_.seed, kCapTag, uid);
}

void CapSelector::add(std::string_view dataset, std::string_view example_uid) {
  if (finalized_) throw InvalidArgument("CapSelector::add after finalize");
  auto it = datasets_.find(dataset);
  if (it == datasets_.end()) it = datasets_.emplace(std::string(dataset), PerDataset{}).first;
  it->second.ranks.push_back(Rank{key_of(example_uid), std::string(example_uid)});
  ++it->second.count;
}

void CapSelector::finalize() {
  for (auto& [name, ds] : datasets_) {
    const std::int64_t cap = std::max<std::int64_t>(0, config_.cap_for(name));
    const auto n = static_cast<std::int64_t>(ds.ranks.size());
    ds.capped = n > cap;
    if (ds.capped && cap > 0) {
      auto nth = ds.ranks.begin() + (cap - 1);
      std::nth_element(ds.ranks.begin(), nth, ds.ranks.end());
      ds.threshold = *nth;
    }
    ds.ranks.clear();
    ds.ranks.shrink_to_fit();
  }
  finalized_ = true;
}

bool CapSelector::keep(std::string_view dataset, std::string_view example_uid) const {
  if (!finalized_) throw InvalidArgument("CapSelector::keep before finalize");
  auto it = datasets_.find(dataset);
  if (it == datasets_.end()) return false;
  const PerDataset& ds = it->second;
  if (!ds.capped) return true;
  if (config_.cap_for(dataset) <= 0) return false;
  const Rank r{key_of(example_uid), std::string(example_uid)};
  return !(ds.threshold < r);
}

std::int64_t CapSelector::total(std::string_view dataset) const {
  auto it = datasets_.find(dataset);
  return it == datasets_.end() ? 0 : it->second.count;
}

std::vector<Example> cap_by_dataset(std::span<const Example> examples, const CapConfig& config) {
  CapSelector selector(config);
  for (const Example& e : examples) selector.add(e.dataset, e.example_uid);
  selector.finalize();
  std::vector<Example> out;
  for (const Example& e : examples) {
    if (selector.keep(e.dataset, e.example_uid)) out.push_back(e);
  }
  return out;
}

ScoreKind parse_score_kind(std::string_view name) {
  if (name == "random") return ScoreKind::kRandom;
  if (name == "hard") return ScoreKind::kHard;
  if (name == "moderate") return ScoreKind::kModerate;
  if (name == "soft") return ScoreKind::kSoft;
  throw InvalidArgument("unknown score mode '" + std::string(name) + "'");
}

std::string_view score_kind_name(ScoreKind kind) {
  switch (kind) {
    case ScoreKind::kRandom:
      return "random";
    case ScoreKind::kHard:
      return "hard";
    case ScoreKind::kModerate:
      return "moderate";
    case ScoreKind::kSoft:
      return "soft";
  }
  return "?";
}

double score(const ScoreMode& mode, double f1) {
  if (!(f1 >= 0.0 && f1 <= 1.0)) {
    throw InvalidArgument("f1 must lie in [0, 1], got " + std::to_string(f1));
  }
  if (!(mode.epsilon > 0.0)) throw InvalidArgument("epsilon must be positive");
  switch (mode.kind) {
    case ScoreKind::kRandom:
      return 1.0;
    case ScoreKind::kHard:
      return 1.0 - f1 + mode.epsilon;
    case ScoreKind::kModerate:
      return 2.0 - f1;
    case ScoreKind::kSoft:
      return 3.0 - f1;
  }
  return 1.0;
}

std::vector<double> normalize(std::span<const double> scores) {
  if (scores.empty()) throw InvalidArgument("cannot normalize an empty score list");
  double total = 0.0;
  for (double s : scores) {
    if (!(s > 0.0) || !std::isfinite(s)) {
      throw InvalidArgument("scores must be positive and finite");
    }
    total += s;
  }
  std::vector<double> out(scores.size());
  for (std::size_t i = 0; i < scores.size(); ++i) out[i] = scores[i] / total;
  return out;
}

std::vector<std::size_t> weighted_sample_indices(std::span<const double> probs, std::size_t k,
                                                 std::uint64_t seed) {
  const std::size_t n = probs.size();
  if (k > n) {
    throw InvalidArgument("cannot draw " + std::to_string(k) + " items from a population of " +
                          std::to_string(n));
  }
  std::vector<double> weight(probs.begin(), probs.end());
  for (double w : weight) {
    if (!(w >= 0.0) || !std::isfinite(w)) {
      throw InvalidArgument("probabilities must be non-negative and finite");
    }
  }

  std::vector<std::size_t> chosen;
  chosen.reserve(k);
  std::vector<bool> taken(n, false);
  Fenwick tree(weight);
  double remaining = std::accumulate(weight.begin(), weight.end(), 0.0);
  double rebuilt_at = remaining;
  KeyedStream rng(seed, kWeightedTag);

  auto rebuild = [&] {
    remaining = 0.0;
    for (std::size_t i = 0; i < n; ++i) remaining += taken[i] ? 0.0 : weight[i];
    if (remaining <= 0.0) {
      // Only zero-weight items are left: fall back to uniform over them.
      for (std::size_t i = 0; i < n; ++i) weight[i] = taken[i] ? 0.0 : 1.0;
      remaining = static_cast<double>(n - chosen.size());
    }
    tree.rebuild(weight);
    rebuilt_at = remaining;
  };

  while (chosen.size() < k) {
    if (remaining <= 0.5 * rebuilt_at || remaining <= 0.0) rebuild();
    const double target = rng.next_uniform() * remaining;
    std::size_t idx = tree.find(target);
    if (idx >= n || taken[idx] || weight[idx] <= 0.0) {
      // Rounding pushed the target past the last live item.
      idx = n;
      for (std::size_t j = n; j-- > 0;) {
        if (!taken[j] && weight[j] > 0.0) {
          idx = j;
          break;
        }
      }
      if (idx == n) {
        rebuild();
        continue;
      }
    }
    taken[idx] = true;
    chosen.push_back(idx);
    tree.add(idx, -weight[idx]);
    remaining -= weight[idx];
    weight[idx] = 0.0;
  }
  return chosen;
}

std::vector<std::string> weighted_sample(std::span<const std::string> population,
                                         std::span<const double> probs, std::size_t k,
                                         std::uint64_t seed) {
  if (population.size() != probs.size()) {
    throw InvalidArgument("population and probabilities differ in length");
  }
  std::vector<std::string> out;
  for (std::size_t i : weighted_sample_indices(probs, k, seed)) out.push_back(population[i]);
  return out;
}

DifficultyTable read_difficulty(const std::string& path) {
  DifficultyTable table;
  LineReader reader(path);
  while (auto line = reader.next()) {
    if (line->find_first_not_of(" \t") == std::string_view::npos) continue;
    const auto j = parse_json_line(*line, path, reader.line_number());
    if (!j.is_object() || !j.contains("qid") || !j.contains("f1") || !j["qid"].is_string() ||
        !j["f1"].is_number()) {
      throw ValidationError(path, reader.line_number(), "expected {\"qid\": string, \"f1\": number}");
    }
    const double f1 = j["f1"].get<double>();
    if (!(f1 >= 0.0 && f1 <= 1.0)) {
      throw ValidationError(path, reader.line_number(), "f1 outside [0, 1]");
    }
    table[j["qid"].get<std::string>()] = f1;
  }
  return table;
}

double difficulty_f1(const DifficultyTable& table, std::string_view qid) {
  auto it = table.find(std::string(qid));
  return it == table.end() ? 0.0 : it->second;
}

}  // namespace mrqa
