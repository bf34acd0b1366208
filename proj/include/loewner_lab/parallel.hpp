#pragma once

#include <cstddef>
#include <functional>

namespace loewner_lab {

/// Worker cap: LOEWNER_LAB_THREADS if set and positive, otherwise the
/// hardware concurrency (at least 1).
unsigned worker_count();

/// Runs body(i) for i in [0, n). Exceptions from workers are rethrown on the
/// calling thread (the first one wins).
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

}  // namespace loewner_lab
