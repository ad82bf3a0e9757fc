#pragma once

#include <cstddef>
#include <functional>
#include <span>

namespace curvatura {

/// Worker cap for parallel loops; values < 1 reset to the hardware concurrency.
void set_thread_count(int threads);
int thread_count();

/// Runs fn(i) for i in [0, count) on up to thread_count() workers using a static
/// contiguous partition. If any call throws, the exception with the lowest index
/// is rethrown after all workers finish. Calls made from inside a worker run
/// serially on that worker.
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& fn);

/// Fixed-shape pairwise summation; the result depends only on the input order.
double pairwise_sum(std::span<const double> values);

}  // namespace curvatura
