#ifndef PDC_PARALLEL_HPP
#define PDC_PARALLEL_HPP

#include <cstddef>
#include <functional>

namespace pdc {

/// Worker count for jobs <= 0: the hardware concurrency (at least 1).
int resolve_jobs(int jobs);

/// Runs body(i) for i in [0, n) on up to `jobs` threads with dynamic scheduling.
/// The first exception thrown by any body is rethrown after all workers stop.
void parallel_for(std::size_t n, int jobs, const std::function<void(std::size_t)>& body);

}  // namespace pdc

#endif  // PDC_PARALLEL_HPP
