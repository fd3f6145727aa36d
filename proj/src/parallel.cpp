#include "cumlab/parallel.hpp"

#include <algorithm>
#include <cstdlib>
#include <string>
#include <thread>
#include <vector>

namespace cumlab {

int worker_count()
{
    if (const char* env = std::getenv("CUMLAB_THREADS")) {
        try {
            const int n = std::stoi(env);
            if (n > 0)
                return n;
        } catch (const std::exception&) {
        }
    }
    return std::max(1u, std::thread::hardware_concurrency());
}

std::size_t chunk_count(std::size_t total)
{
    // Fixed chunking independent of the thread count keeps merges reproducible.
    constexpr std::size_t kChunks = 64;
    return std::max<std::size_t>(1, std::min(total, kChunks));
}

std::size_t parallel_chunks(std::size_t total, const std::function<void(std::size_t, std::size_t, std::size_t)>& fn)
{
    const std::size_t chunks = chunk_count(total);
    auto bounds = [&](std::size_t c) { return total * c / chunks; };
    const std::size_t workers = std::min<std::size_t>(static_cast<std::size_t>(worker_count()), chunks);
    if (workers <= 1) {
        for (std::size_t c = 0; c < chunks; ++c)
            fn(c, bounds(c), bounds(c + 1));
        return chunks;
    }
    std::vector<std::thread> pool;
    for (std::size_t w = 0; w < workers; ++w) {
        pool.emplace_back([&, w] {
            for (std::size_t c = w; c < chunks; c += workers)
                fn(c, bounds(c), bounds(c + 1));
        });
    }
    for (auto& t : pool)
        t.join();
    return chunks;
}

} // namespace cumlab
