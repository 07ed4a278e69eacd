#pragma once

#include <cstddef>
#include <functional>
#include <span>

namespace onebit {

// Worker cap: min(hardware threads, ONEBIT_THREADS when set). Re-read on
// every call so tests can vary it.
unsigned worker_count();

// Runs fn(i) for i in [0, count) across workers. Callers own determinism:
// every invocation must write only to its own slot of a preallocated
// buffer, so results are independent of the worker count.
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& fn);

// Pairwise (cascade) summation; the reduction tree depends only on the
// element order, never on thread scheduling.
double pairwise_sum(std::span<const double> values);

} // namespace onebit
