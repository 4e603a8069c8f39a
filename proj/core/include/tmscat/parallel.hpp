#pragma once

#include <cstddef>
#include <functional>

namespace tmscat {

/// Worker count from TMSCAT_THREADS (default 1; invalid values fall back to 1).
std::size_t thread_count();

/// Runs body(i) for i in [0, count) on up to thread_count() workers.
/// Each index writes its own slot, so results are ordered regardless of scheduling.
/// The first exception thrown by any body is rethrown after all workers join.
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& body);

}  // namespace tmscat
