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

#ifndef MRQA_KERNELS_H_
#define MRQA_KERNELS_H_

#include <cstddef>
#include <span>
#include <string_view>

// Data-parallel inner loops used by span scoring. Each kernel has a scalar
// reference and vector variants; all variants are bit-identical because the
// scalar reference reproduces the 4-lane accumulation order of reduce_sum.
namespace mrqa::kernels {

enum class Isa { kScalar, kAvx2, kNeon };

struct KernelTable {
  Isa isa;
  double (*reduce_max)(const double* x, std::size_t n);
  // Sum in canonical order: four interleaved partial sums over full blocks of
  // four, combined as (s0 + s1) + (s2 + s3), then the tail left to right.
  double (*reduce_sum)(const double* x, std::size_t n);
  // out[i] = x[i] + c
  void (*add_scalar)(const double* x, double c, double* out, std::size_t n);
  // Index of the first maximum; n must be > 0.
  std::size_t (*argmax)(const double* x, std::size_t n);
};

const KernelTable& scalar_table();
#if defined(__x86_64__) || defined(_M_X64)
const KernelTable& avx2_table();
#endif
#if defined(__aarch64__)
const KernelTable& neon_table();
#endif

bool isa_supported(Isa isa);
// Best supported table unless overridden by force_isa().
const KernelTable& active();
// Pins dispatch to one variant. Throws InvalidArgument if unsupported.
void force_isa(Isa isa);
void reset_isa();
std::string_view isa_name(Isa isa);
Isa parse_isa(std::string_view name);  // "scalar", "avx2", "neon"

inline double reduce_max(std::span<const double> x) { return active().reduce_max(x.data(), x.size()); }
inline double reduce_sum(std::span<const double> x) { return active().reduce_sum(x.data(), x.size()); }
inline std::size_t argmax(std::span<const double> x) { return active().argmax(x.data(), x.size()); }
inline void add_scalar(std::span<const double> x, double c, std::span<double> out) {
  active().add_scalar(x.data(), c, out.data(), x.size());
}

// out[i] = x[i] - log(sum_j exp(x[j])). x must be non-empty and finite;
// out may alias x.
void log_softmax(std::span<const double> x, std::span<double> out);

}  // namespace mrqa::kernels

#endif  // MRQA_KERNELS_H_
