#include "gstbn/parallel.hpp"

#include <atomic>

namespace gstbn {

namespace {
std::atomic<unsigned> g_threads{0};
}

void set_thread_count(unsigned threads) noexcept { g_threads.store(threads); }

unsigned thread_count() noexcept {
    const unsigned configured = g_threads.load();
    if (configured != 0) return configured;
    return std::max(1u, std::thread::hardware_concurrency());
}

}  // namespace gstbn
