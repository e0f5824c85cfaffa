#pragma once

#include <cstddef>
#include <functional>

namespace mhdlab {

/// Runs body(i) for i in [0, count) on up to `jobs` threads (jobs ≤ 1 runs inline).
/// Each index must write only its own output slot; reductions happen afterwards in index order.
/// The exception from the lowest failing index is rethrown.
void parallel_for(std::size_t count, int jobs, const std::function<void(std::size_t)>& body);

}  // namespace mhdlab
