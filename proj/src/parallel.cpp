#include "fracmax/parallel.hpp"

#include <atomic>
#include <cstdlib>
#include <string>

namespace fracmax {
namespace {

std::atomic<unsigned> configured{0};
std::atomic<bool> explicitly_set{false};

unsigned resolve(unsigned n) {
  if (n != 0) return n;
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : hw;
}

}  // namespace

void set_thread_count(unsigned n) {
  configured = resolve(n);
  explicitly_set = true;
}

unsigned thread_count() {
  if (!explicitly_set) {
    unsigned n = 0;
    if (const char* env = std::getenv("FRACMAX_THREADS")) {
      try {
        n = static_cast<unsigned>(std::stoul(env));
      } catch (...) {
        n = 0;
      }
    }
    set_thread_count(n);
  }
  return configured;
}

}  // namespace fracmax
