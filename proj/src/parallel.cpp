#include "ppfl/parallel.hpp"

#include <atomic>

namespace ppfl::par {

namespace {
std::atomic<int> g_threads{0};
}

int max_threads() { return g_threads.load(std::memory_order_relaxed); }

void set_threads(int n) { g_threads.store(n < 0 ? 0 : n, std::memory_order_relaxed); }

}  // namespace ppfl::par
