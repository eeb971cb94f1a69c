// Copyright 2026 The qtransfer Authors
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
#include <vector>

#include <omp.h>

namespace qtransfer {

/// Work is cut into chunks of a fixed size that does not depend on the
/// worker count. Each chunk is reduced serially, and the chunk partials are
/// merged serially in chunk order, so the result is bit-identical for any
/// number of workers.
inline constexpr std::size_t kReductionChunk = 256;

/// workers <= 0 means "OpenMP default".
inline int resolve_workers(int workers) {
  return workers > 0 ? workers : omp_get_max_threads();
}

template <typename Partial, typename ChunkFn, typename MergeFn>
Partial chunked_reduce(std::size_t count, int workers, Partial identity, ChunkFn&& run_chunk,
                       MergeFn&& merge, std::size_t chunk = kReductionChunk) {
  const std::size_t n_chunks = (count + chunk - 1) / chunk;
  std::vector<Partial> partials(n_chunks, identity);
  const auto n = static_cast<long long>(n_chunks);
#pragma omp parallel for schedule(dynamic, 1) num_threads(resolve_workers(workers))
  for (long long c = 0; c < n; ++c) {
    const auto begin = static_cast<std::size_t>(c) * chunk;
    const auto end = std::min(count, begin + chunk);
    partials[static_cast<std::size_t>(c)] = run_chunk(begin, end);
  }
  Partial total = std::move(identity);
  for (auto& p : partials) merge(total, p);
  return total;
}

}  // namespace qtransfer
