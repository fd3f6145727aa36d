#pragma once

#include <cstddef>
#include <functional>

namespace cumlab {

/// Worker count: CUMLAB_THREADS when set to a positive integer, otherwise
/// the hardware concurrency (at least 1).
int worker_count();

/// Splits [0, total) into contiguous chunks and runs fn(chunk, begin, end) on
/// up to worker_count() threads. Returns the number of chunks; callers merge
/// per-chunk results in chunk order.
std::size_t parallel_chunks(std::size_t total, const std::function<void(std::size_t, std::size_t, std::size_t)>& fn);

/// The chunk count parallel_chunks will use for this total.
std::size_t chunk_count(std::size_t total);

} // namespace cumlab
