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

#include "mrqa/keyed_rng.h"

namespace mrqa {
namespace {

std::uint64_t base_key(std::uint64_t seed, std::string_view tag, std::string_view key) {
  std::uint64_t h = fnv1a64(tag);
  h = fnv1a64(std::string_view("\x1f", 1), h);
  h = fnv1a64(key, h);
  return splitmix64(splitmix64(seed) ^ h);
}

}  // namespace

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::uint64_t fnv1a64(std::string_view s, std::uint64_t h) {
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::uint64_t keyed_bits(std::uint64_t seed, std::string_view tag, std::string_view key,
                         std::uint64_t counter) {
  return splitmix64(base_key(seed, tag, key) + counter * 0x9e3779b97f4a7c15ULL);
}

KeyedStream::KeyedStream(std::uint64_t seed, std::string_view tag, std::string_view key)
    : base_(base_key(seed, tag, key)) {}

std::uint64_t KeyedStream::next_bits() {
  return splitmix64(base_ + (counter_++) * 0x9e3779b97f4a7c15ULL);
}

}  // namespace mrqa
