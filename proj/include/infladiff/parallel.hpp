#pragma once

#include <cstddef>
#include <functional>

namespace infladiff {

/// Worker cap: INFLADIFF_THREADS if set and positive, else hardware concurrency.
unsigned worker_count();

/// Splits [0, n) into at most worker_count() contiguous chunks and runs
/// body(chunk_index, begin, end) for each. Chunk boundaries depend only on n
/// and the chunk count, never on scheduling.
void parallel_chunks(std::size_t n, std::size_t chunks,
                     const std::function<void(std::size_t, std::size_t, std::size_t)>& body);

}  // namespace infladiff
