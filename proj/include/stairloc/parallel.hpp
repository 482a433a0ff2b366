#pragma once

#include <cstddef>
#include <cstdint>
#include <exception>
#include <vector>

namespace stairloc {

// Worker count used by parallel_map (and every other OpenMP region).
void set_thread_count(int threads);
int thread_count();

// out[i] = fn(i) for i < n on the OpenMP pool. Results are keyed by index, so
// the output never depends on the schedule; the first exception by index is
// rethrown after the loop.
template <class T, class Fn>
std::vector<T> parallel_map(std::size_t n, Fn&& fn) {
  std::vector<T> out(n);
  std::vector<std::exception_ptr> errors(n);
  const auto count = static_cast<std::int64_t>(n);
#pragma omp parallel for schedule(dynamic, 1)
  for (std::int64_t i = 0; i < count; ++i) {
    const auto k = static_cast<std::size_t>(i);
    try {
      out[k] = fn(k);
    } catch (...) {
      errors[k] = std::current_exception();
    }
  }
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  return out;
}

// Reference implementation for tests and the benchmark.
template <class T, class Fn>
std::vector<T> serial_map(std::size_t n, Fn&& fn) {
  std::vector<T> out;
  out.reserve(n);
  for (std::size_t i = 0; i < n; ++i) out.push_back(fn(i));
  return out;
}

}  // namespace stairloc
