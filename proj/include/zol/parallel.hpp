#pragma once

#include <cstddef>
#include <functional>

namespace zol {

/// Caps the number of worker threads used by vote-parallel training loops.
/// 0 restores the hardware default. Never changes results, only wallclock.
void set_max_threads(unsigned n);
unsigned max_threads();

/// Runs fn(0..count-1), possibly on worker threads. Each index must be
/// independent; exceptions are rethrown on the calling thread.
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& fn);

}  // namespace zol
