#ifndef NETFLOW_PARALLEL_HPP
#define NETFLOW_PARALLEL_HPP

#include <cstddef>
#include <functional>

namespace netflow {

/// NETFLOW_THREADS if set and positive, else the number of logical cores (at least 1).
std::size_t default_thread_count();

/// Runs body(i) for i in [0, count) on up to `threads` workers. The first
/// exception thrown by any worker is rethrown after all workers join.
void parallel_for(std::size_t count, std::size_t threads, const std::function<void(std::size_t)>& body);

} // namespace netflow

#endif
