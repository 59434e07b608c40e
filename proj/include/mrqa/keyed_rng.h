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

#ifndef MRQA_KEYED_RNG_H_
#define MRQA_KEYED_RNG_H_

#include <cstdint>
#include <string_view>

// Counter-based randomness. Every draw is a pure function of
// (seed, purpose tag, item key, counter), so per-item decisions do not depend
// on processing order or thread count.
namespace mrqa {

std::uint64_t splitmix64(std::uint64_t x);
std::uint64_t fnv1a64(std::string_view s, std::uint64_t h = 0xcbf29ce484222325ULL);

// Uniform in [0, 1) with 53 bits of precision.
inline double to_unit(std::uint64_t bits) {
  return static_cast<double>(bits >> 11) * 0x1.0p-53;
}

std::uint64_t keyed_bits(std::uint64_t seed, std::string_view tag, std::string_view key,
                         std::uint64_t counter = 0);

inline double keyed_uniform(std::uint64_t seed, std::string_view tag, std::string_view key,
                            std::uint64_t counter = 0) {
  return to_unit(keyed_bits(seed, tag, key, counter));
}

// Sequential stream for order-dependent procedures.
class KeyedStream {
 public:
  KeyedStream(std::uint64_t seed, std::string_view tag, std::string_view key = {});
  std::uint64_t next_bits();
  double next_uniform() { return to_unit(next_bits()); }

 private:
  std::uint64_t base_;
  std::uint64_t counter_ = 0;
};

}  // namespace mrqa

#endif  // MRQA_KEYED_RNG_H_
