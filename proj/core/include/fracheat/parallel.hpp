#pragma once

#include <functional>

namespace fracheat {

/// Parallelism cap, from FRACHEAT_THREADS (default: hardware concurrency).
int thread_cap();

/// Runs fn(i) for i in [0, count) on up to thread_cap() threads.
///
/// Work is split into fixed-size blocks independent of the thread count, and
/// every index writes only its own outputs, so results are bitwise identical
/// for any cap.  fn must not throw.
void parallel_for(int count, const std::function<void(int)>& fn);

}  // namespace fracheat
