#pragma once

#include <cstddef>
#include <functional>

namespace selfprompt {

// Worker count: hardware concurrency capped by the SELFPROMPT_THREADS
// environment variable (values < 1 are ignored).
std::size_t worker_count();

// Runs fn(begin, end) over contiguous chunks of [0, count). Chunks are
// independent; callers must not write shared state across chunks, which
// keeps results identical to a sequential run.
void parallel_for(std::size_t count, const std::function<void(std::size_t, std::size_t)>& fn);

}  // namespace selfprompt
