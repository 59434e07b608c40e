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

#ifndef MRQA_SAMPLER_H_
#define MRQA_SAMPLER_H_

#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "mrqa/format.h"

namespace mrqa {

inline constexpr std::int64_t kDefaultDatasetCap = 120000;
inline constexpr std::int64_t kSearchQaCap = 100000;

struct CapConfig {
  std::int64_t default_cap = kDefaultDatasetCap;
  std::map<std::string, std::int64_t, std::less<>> per_dataset_caps = {{"SearchQA", kSearchQaCap}};
  std::uint64_t seed = 0;

  std::int64_t cap_for(std::string_view dataset) const;
};

// Chooses, per dataset, a uniform random subset of at most cap examples. Each
// example gets a keyed random rank; survivors are the `cap` lowest ranks, so
// membership is independent of input order and needs only example ids.
class CapSelector {
 public:
  explicit CapSelector(CapConfig config);

  void add(std::string_view dataset, std::string_view example_uid);
  void finalize();
  bool keep(std::string_view dataset, std::string_view example_uid) const;

  std::int64_t total(std::string_view dataset) const;

 private:
  struct Rank {
    std::uint64_t key;
    std::string uid;
    bool operator<(const Rank& o) const { return key != o.key ? key < o.key : uid < o.uid; }
  };
  struct PerDataset {
    std::vector<Rank> ranks;
    std::int64_t count = 0;
    bool capped = false;
    Rank threshold;
  };

  std::uint64_t key_of(std::string_view uid) const;

  CapConfig config_;
  std::map<std::string, PerDataset, std::less<>> datasets_;
  bool finalized_ = false;
};

// Survivors keep their relative input order.
std::vector<Example> cap_by_dataset(std::span<const Example> examples, const CapConfig& config);

enum class ScoreKind { kRandom, kHard, kModerate, kSoft };

struct ScoreMode {
  ScoreKind kind = ScoreKind::kRandom;
  double epsilon = 0.01;
};

ScoreKind parse_score_kind(std::string_view name);
std::string_view score_kind_name(ScoreKind kind);

// hard: 1 - f1 + epsilon, moderate: 2 - f1, soft: 3 - f1, random: 1.
double score(const ScoreMode& mode, double f1);

// P_i = S_i / sum_j S_j. Throws on empty input or non-positive scores.
std::vector<double> normalize(std::span<const double> scores);

// Draws k distinct indices without replacement: each draw picks index i with
// probability proportional to its remaining weight, then removes it.
std::vector<std::size_t> weighted_sample_indices(std::span<const double> probs, std::size_t k,
                                                 std::uint64_t seed);
std::vector<std::string> weighted_sample(std::span<const std::string> population,
                                         std::span<const double> probs, std::size_t k,
                                         std::uint64_t seed);

// qid -> F1 of a reference model.
using DifficultyTable = std::unordered_map<std::string, double>;

DifficultyTable read_difficulty(const std::string& path);
// Unknown qids count as maximally hard (f1 = 0).
double difficulty_f1(const DifficultyTable& table, std::string_view qid);

}  // namespace mrqa

#endif  // MRQA_SAMPLER_H_
