#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <vector>

namespace vfp {

inline double sq(double x) { return x * x; }

/// Pairwise (cascade) summation. The reduction tree depends only on n, so
/// results are bitwise reproducible for a fixed input order.
double pairwise_sum(const double* x, std::size_t n);
double pairwise_sum(const std::vector<double>& x);

/// Number of workers: min(VFP_THREADS, hardware concurrency), at least 1.
/// VFP_THREADS is re-read on every call so tests can change it at runtime.
int worker_count();

/// Runs fn(begin, end) over [0, n) split into chunks of size `grain`.
/// The chunk layout depends only on (n, grain), never on the worker count,
/// and chunks write to disjoint outputs, so results are identical for any
/// VFP_THREADS setting.
void parallel_for(std::size_t n, std::size_t grain,
                  const std::function<void(std::size_t, std::size_t)>& fn);

}  // namespace vfp
