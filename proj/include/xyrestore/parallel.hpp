// Copyright 2026 The xyrestore Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <exception>
#include <execution>
#include <numeric>
#include <random>
#include <vector>

namespace xyrestore {

/**
 * Calls f(k) for k in [0, n) with the standard parallel execution policy.
 * Callers write results into slot k, so the outcome does not depend on the
 * schedule. If any call throws, the exception of the lowest k is rethrown
 * after all calls finished.
 */
template <class F>
void parallel_for(std::size_t n, F&& f) {
  std::vector<std::size_t> indices(n);
  std::iota(indices.begin(), indices.end(), std::size_t{0});
  std::vector<std::exception_ptr> errors(n);
  std::for_each(
      std::execution::par, indices.begin(), indices.end(), [&](std::size_t k) {
        try {
          f(k);
        } catch (...) {
          errors[k] = std::current_exception();
        }
      });
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

/**
 * Engine for one independent stream of a seeded run. Work item k draws from
 * stream k, which keeps results identical for any thread count.
 */
inline std::mt19937_64 stream_engine(std::uint64_t seed, std::uint64_t stream) {
  std::seed_seq seq{
      static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
      static_cast<std::uint32_t>(stream), static_cast<std::uint32_t>(stream >> 32)};
  return std::mt19937_64(seq);
}

}  // namespace xyrestore
