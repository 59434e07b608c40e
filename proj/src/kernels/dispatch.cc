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

#include <atomic>
#include <cmath>
#include <string>
#include <vector>

#include "mrqa/error.h"
#include "mrqa/kernels.h"

namespace mrqa::kernels {
namespace {

const KernelTable& detect() {
#if defined(__x86_64__) || defined(_M_X64)
  if (__builtin_cpu_supports("avx2")) return avx2_table();
#endif
#if defined(__aarch64__)
  return neon_table();
#endif
  return scalar_table();
}

std::atomic<const KernelTable*> g_forced{nullptr};

}  // namespace

bool isa_supported(Isa isa) {
  switch (isa) {
    case Isa::kScalar:
      return true;
    case Isa::kAvx2:
#if defined(__x86_64__) || defined(_M_X64)
      return __builtin_cpu_supports("avx2");
#else
      return false;
#endif
    case Isa::kNeon:
#if defined(__aarch64__)
      return true;
#else
      return false;
#endif
  }
  return false;
}

const KernelTable& active() {
  if (const KernelTable* forced = g_forced.load(std::memory_order_relaxed)) return *forced;
  static const KernelTable& best = detect();
  return best;
}

void force_isa(Isa isa) {
  if (!isa_supported(isa)) {
    throw InvalidArgument("instruction set '" + std::string(isa_name(isa)) +
                          "' is not supported on this CPU");
  }
  const KernelTable* table = &scalar_table();
#if defined(__x86_64__) || defined(_M_X64)
  if (isa == Isa::kAvx2) table = &avx2_table();
#endif
#if defined(__aarch64__)
  if (isa == Isa::kNeon) table = &neon_table();
#endif
  g_forced.store(table, std::memory_order_relaxed);
}

void reset_isa() { g_forced.store(nullptr, std::memory_order_relaxed); }

std::string_view isa_name(Isa isa) {
  switch (isa) {
    case Isa::kScalar:
      return "scalar";
    case Isa::kAvx2:
      return "avx2";
    case Isa::kNeon:
      return "neon";
  }
  return "?";
}

Isa parse_isa(std::string_view name) {
  if (name == "scalar") return Isa::kScalar;
  if (name == "avx2") return Isa::kAvx2;
  if (name == "neon") return Isa::kNeon;
  throw InvalidArgument("unknown instruction set '" + std::string(name) + "'");
}

void log_softmax(std::span<const double> x, std::span<double> out) {
  const KernelTable& k = active();
  const std::size_t n = x.size();
  const double m = k.reduce_max(x.data(), n);
  thread_local std::vector<double> scratch;
  scratch.resize(n);
  for (std::size_t i = 0; i < n; ++i) scratch[i] = std::exp(x[i] - m);
  const double lse = m + std::log(k.reduce_sum(scratch.data(), n));
  k.add_scalar(x.data(), -lse, out.data(), n);
}

}  // namespace mrqa::kernels
