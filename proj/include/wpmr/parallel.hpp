#pragma once

#include <functional>

namespace wpmr {

// Worker cap: WPMR_THREADS env, set_thread_count(), or hardware concurrency.
int thread_count();
void set_thread_count(int n);

// Static partition of [0, n) across workers; fn must be thread-safe.
void parallel_for(long n, const std::function<void(long)>& fn);

}  // namespace wpmr
