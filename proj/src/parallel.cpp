#include "radarmi/parallel.hpp"

#include <cstdlib>
#include <exception>
#include <mutex>
#include <string>
#include <thread>
#include <vector>

#include "radarmi/errors.hpp"

namespace radarmi {

std::size_t resolve_thread_count(std::size_t items) {
    std::size_t cap = 0;
    if (const char* env = std::getenv("RADAR_MI_THREADS"); env && *env) {
        char* end = nullptr;
        const unsigned long long parsed = std::strtoull(env, &end, 10);
        if (*end != '\0' || std::string(env).find('-') != std::string::npos)
            throw config_error("RADAR_MI_THREADS must be a non-negative integer, got '" +
                               std::string(env) + "'");
        cap = static_cast<std::size_t>(parsed);
    }
    if (cap == 0) {
        const unsigned hw = std::thread::hardware_concurrency();
        cap = hw == 0 ? 1 : hw;
    }
    if (items == 0) return 1;
    return std::min(cap, items);
}

void parallel_for(std::size_t count, const std::function<void(std::size_t)>& body) {
    if (count == 0) return;
    const std::size_t threads = resolve_thread_count(count);
    if (threads <= 1) {
        for (std::size_t i = 0; i < count; ++i) body(i);
        return;
    }

    std::exception_ptr failure;
    std::mutex failure_mutex;
    std::vector<std::thread> pool;
    pool.reserve(threads);
    for (std::size_t t = 0; t < threads; ++t) {
        pool.emplace_back([&, t] {
            const std::size_t begin = t * count / threads;
            const std::size_t end = (t + 1) * count / threads;
            for (std::size_t i = begin; i < end; ++i) {
                try {
                    body(i);
                } catch (...) {
                    std::lock_guard<std::mutex> lock(failure_mutex);
                    if (!failure) failure = std::current_exception();
                    return;
                }
            }
        });
    }
    for (std::thread& th : pool) th.join();
    if (failure) std::rethrow_exception(failure);
}

} // namespace radarmi
