#pragma once

#include <cstddef>
#include <functional>

namespace homtype {

/// Worker count: HOMTYPE_THREADS when set and positive, else hardware concurrency.
std::size_t thread_count();

/// Runs fn(i) for i in [0, n) over contiguous chunks. fn must only write to
/// slots owned by its index; callers merge afterwards.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn);

}  // namespace homtype
