#pragma once

#include <algorithm>
#include <cstdint>
#include <exception>
#include <thread>
#include <vector>

namespace qinfer::detail {

// Runs body(begin, end) over contiguous chunks of [0, n) on up to
// hardware_concurrency threads and rethrows the first worker exception.
// Callers must make results independent of the chunking; every caller here
// addresses randomness by item index.
template <typename Body>
void parallel_chunks(std::uint64_t n, Body&& body) {
  const std::uint64_t hw = std::max(1U, std::thread::hardware_concurrency());
  const std::uint64_t workers = std::min<std::uint64_t>(hw, std::max<std::uint64_t>(1, n / 1024));
  if (workers <= 1) {
    body(std::uint64_t{0}, n);
    return;
  }
  std::vector<std::exception_ptr> errors(workers);
  {
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    const std::uint64_t chunk = (n + workers - 1) / workers;
    for (std::uint64_t w = 0; w < workers; ++w) {
      const std::uint64_t begin = w * chunk;
      const std::uint64_t end = std::min(n, begin + chunk);
      if (begin >= end) break;
      pool.emplace_back([&body, &errors, begin, end, w] {
        try {
          body(begin, end);
        } catch (...) {
          errors[w] = std::current_exception();
        }
      });
    }
  }
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

}  // namespace qinfer::detail
