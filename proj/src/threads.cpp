#include "tokeval/threads.hpp"

#include <algorithm>
#include <cstdlib>
#include <string>
#include <thread>
#include <vector>

namespace tokeval {

int resolve_thread_count(int requested) {
    if (requested > 0) return requested;
    if (const char* env = std::getenv("TOKEVAL_THREADS")) {
        try {
            const int v = std::stoi(env);
            if (v > 0) return v;
        } catch (...) {
            // fall through to hardware concurrency
        }
    }
    const unsigned hw = std::thread::hardware_concurrency();
    return hw > 0 ? static_cast<int>(hw) : 1;
}

size_t chunk_count(size_t n, int threads) {
    if (threads <= 1 || n < 2) return n == 0 ? 0 : 1;
    return std::min<size_t>(static_cast<size_t>(threads), n);
}

void parallel_chunks(size_t n, int threads,
                     const std::function<void(size_t, size_t, size_t)>& fn) {
    const size_t chunks = chunk_count(n, threads);
    if (chunks == 0) return;
    if (chunks == 1) {
        fn(0, 0, n);
        return;
    }
    std::vector<std::thread> workers;
    workers.reserve(chunks);
    for (size_t c = 0; c < chunks; ++c) {
        const size_t begin = n * c / chunks;
        const size_t end = n * (c + 1) / chunks;
        workers.emplace_back([&fn, c, begin, end] { fn(c, begin, end); });
    }
    for (auto& w : workers) w.join();
}

}  // namespace tokeval
