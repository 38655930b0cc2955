#include "parallel.hpp"

#include <algorithm>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

#include "config.hpp"

namespace eeclass {

namespace {
thread_local bool t_inside_worker = false;
}

void parallel_for(std::size_t n,
                  const std::function<void(std::size_t, std::size_t)>& chunk_fn) {
  if (n == 0) return;
  const std::size_t workers =
      std::min<std::size_t>(static_cast<std::size_t>(threads()), n);
  if (workers <= 1 || t_inside_worker || n < 2) {
    chunk_fn(0, n);
    return;
  }

  const std::size_t chunk = (n + workers - 1) / workers;
  std::vector<std::thread> pool;
  pool.reserve(workers - 1);
  std::exception_ptr err;
  std::mutex err_mutex;

  auto run = [&](std::size_t begin, std::size_t end) {
    t_inside_worker = true;
    try {
      chunk_fn(begin, end);
    } catch (...) {
      std::lock_guard<std::mutex> lock(err_mutex);
      if (!err) err = std::current_exception();
    }
    t_inside_worker = false;
  };

  for (std::size_t w = 1; w < workers; ++w) {
    const std::size_t begin = w * chunk;
    const std::size_t end = std::min(n, begin + chunk);
    if (begin >= end) break;
    pool.emplace_back(run, begin, end);
  }
  run(0, std::min(chunk, n));
  for (auto& t : pool) t.join();
  if (err) std::rethrow_exception(err);
}

}  // namespace eeclass
