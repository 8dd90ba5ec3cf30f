#pragma once

#include <complex>
#include <cstddef>
#include <functional>
#include <span>

namespace fraclab {

// Global worker count for parallel_for. 1 by default; the CLI sets it from
// --threads / FRACLAB_THREADS. Results never depend on it: workers only fill
// disjoint slices of precomputed evaluation arrays, and every reduction goes
// through pairwise_sum in a fixed tree order.

void set_thread_count(int k);  // k <= 0 selects hardware concurrency
int thread_count();

/// Runs fn(begin, end) over a partition of [0, n) across the configured
/// worker count. fn must write only to disjoint per-index state.
void parallel_for(std::size_t n,
                  const std::function<void(std::size_t, std::size_t)>& fn);

/// Fixed-topology pairwise summation: result depends only on the contents
/// and order of v, never on thread count.
double pairwise_sum(std::span<const double> v);
std::complex<double> pairwise_sum(std::span<const std::complex<double>> v);

}  // namespace fraclab
