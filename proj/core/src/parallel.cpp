#include "fslab/parallel.hpp"

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <thread>

namespace fslab {

int worker_count() {
    if (const char* env = std::getenv("FSLAB_THREADS")) {
        int n = std::atoi(env);
        if (n >= 1) return n;
    }
    unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : static_cast<int>(hw);
}

int chunk_count(std::int64_t n) {
    if (n <= 0) return 0;
    return static_cast<int>(std::min<std::int64_t>(n, 64));
}

void parallel_chunks(std::int64_t n,
                     const std::function<void(int, std::int64_t, std::int64_t)>& fn) {
    const int chunks = chunk_count(n);
    if (chunks == 0) return;

    auto run_chunk = [&](int c) {
        const std::int64_t begin = n * c / chunks;
        const std::int64_t end = n * (c + 1) / chunks;
        if (begin < end) fn(c, begin, end);
    };

    const int workers = std::min(worker_count(), chunks);
    if (workers <= 1) {
        for (int c = 0; c < chunks; ++c) run_chunk(c);
        return;
    }

    std::atomic<int> next{0};
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(workers));
    for (int w = 0; w < workers; ++w) {
        pool.emplace_back([&] {
            for (int c = next.fetch_add(1); c < chunks; c = next.fetch_add(1)) run_chunk(c);
        });
    }
    for (auto& t : pool) t.join();
}

} // namespace fslab
