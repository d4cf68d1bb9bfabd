#pragma once

#include <functional>

namespace bt {

// Worker count: BT_THREADS if set (clamped to [1, 64]), else the hardware
// concurrency.  Results never depend on it; work items write disjoint slots.
int thread_count();

// Runs fn(0..count-1) across threads.  Body exceptions are captured and the
// first one rethrown on the calling thread after all workers join.
void parallel_for(int count, const std::function<void(int)>& fn);

}  // namespace bt
