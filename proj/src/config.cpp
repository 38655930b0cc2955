#include "config.hpp"

#include <atomic>
#include <thread>

namespace eeclass {

namespace {
std::atomic<int> g_threads{0};

int hardware_threads() {
  unsigned n = std::thread::hardware_concurrency();
  return n == 0 ? 1 : static_cast<int>(n);
}
}  // namespace

void set_threads(int n) { g_threads.store(n > 0 ? n : 0); }

int threads() {
  int n = g_threads.load();
  return n > 0 ? n : hardware_threads();
}

}  // namespace eeclass
