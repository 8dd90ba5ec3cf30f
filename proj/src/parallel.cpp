#include "fraclab/parallel.hpp"

#include <atomic>
#include <thread>
#include <vector>

namespace fraclab {

namespace {

std::atomic<int> g_threads{1};

template <typename T>
T pairwise_sum_impl(std::span<const T> v) {
  if (v.size() <= 8) {
    T acc{};
    for (const T& x : v) acc += x;
    return acc;
  }
  const std::size_t half = v.size() / 2;
  return pairwise_sum_impl(v.subspan(0, half)) +
         pairwise_sum_impl(v.subspan(half));
}

}  // namespace

void set_thread_count(int k) {
  if (k <= 0) {
    unsigned hw = std::thread::hardware_concurrency();
    k = hw == 0 ? 1 : static_cast<int>(hw);
  }
  g_threads.store(k);
}

int thread_count() { return g_threads.load(); }

void parallel_for(std::size_t n,
                  const std::function<void(std::size_t, std::size_t)>& fn) {
  const int workers = thread_count();
  if (n == 0) return;
  if (workers <= 1 || n < 256) {
    fn(0, n);
    return;
  }
  const std::size_t t = std::min<std::size_t>(workers, n);
  std::vector<std::thread> pool;
  pool.reserve(t);
  for (std::size_t w = 0; w < t; ++w) {
    const std::size_t begin = n * w / t;
    const std::size_t end = n * (w + 1) / t;
    pool.emplace_back([&fn, begin, end] { fn(begin, end); });
  }
  for (auto& th : pool) th.join();
}

double pairwise_sum(std::span<const double> v) {
  return pairwise_sum_impl(v);
}

std::complex<double> pairwise_sum(std::span<const std::complex<double>> v) {
  return pairwise_sum_impl(v);
}

}  // namespace fraclab
