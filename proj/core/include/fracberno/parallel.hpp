#pragma once

#include <cstddef>
#include <functional>

namespace fracberno {

/// Worker count: FRACBERNO_THREADS if set and positive, else the hardware
/// concurrency (at least 1).
int thread_count();
void set_thread_count(int n);

/// Runs body(i) for i in [0, n) on up to thread_count() threads. Each index is
/// handled by exactly one worker; callers write results to slot i, so the
/// outcome does not depend on scheduling.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

}  // namespace fracberno
