#pragma once

#include <cstddef>
#include <functional>

namespace phlab {

/// Worker count used by the sampled kernels. Affects wall time only;
/// every kernel writes to disjoint slots or reduces in a fixed order.
void set_thread_count(int n);
int thread_count();

/// Calls body(begin, end) on contiguous, disjoint chunks covering [0, n).
void parallel_for(std::size_t n, const std::function<void(std::size_t, std::size_t)>& body);

/// Sum of block(begin, end) over fixed blocks of kSumBlock indices, added in
/// block order. The result does not depend on the thread count.
inline constexpr std::size_t kSumBlock = 4096;
double parallel_sum(std::size_t n, const std::function<double(std::size_t, std::size_t)>& block);

}  // namespace phlab
