#pragma once

#include <cstddef>
#include <functional>

namespace intentbench {

/// Worker count: hardware concurrency, capped by INTENTBENCH_THREADS when set.
std::size_t thread_budget();

/// Runs body(i) for i in [0, count). Each index is handled by exactly one
/// worker; callers write into per-index slots so results do not depend on
/// scheduling. Exceptions from body are rethrown (lowest index first).
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& body);

}  // namespace intentbench
