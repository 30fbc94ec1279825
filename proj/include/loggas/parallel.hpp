#pragma once

#include <cstddef>
#include <functional>

namespace loggas {

// Worker count used by parallel loops. 0 means hardware concurrency.
void set_thread_count(unsigned n);
unsigned thread_count();

// Runs body(i) for i in [0, n) split into contiguous blocks. Each index is
// processed by exactly one worker, so results written per index do not
// depend on the worker count.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

} // namespace loggas
