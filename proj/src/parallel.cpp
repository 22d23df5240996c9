#include "funnel/parallel.hpp"

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <string>
#include <thread>
#include <vector>

namespace funnel {

unsigned worker_count()
{
    if (const char* env = std::getenv("FUNNEL_THREADS")) {
        try {
            const long v = std::stol(env);
            if (v > 0) {
                return static_cast<unsigned>(v);
            }
        } catch (const std::exception&) {
            // fall through to the hardware default
        }
    }
    return std::max(1u, std::thread::hardware_concurrency());
}

void parallel_for(std::size_t n, const std::function<void(std::size_t, std::size_t)>& body)
{
    if (n == 0) {
        return;
    }
    const unsigned workers = static_cast<unsigned>(std::min<std::size_t>(worker_count(), n));
    if (workers <= 1) {
        body(0, n);
        return;
    }
    // Small chunks handed out dynamically keep the load balanced when cell
    // costs vary wildly (early exits versus full trajectories).
    const std::size_t chunk = std::max<std::size_t>(1, n / (static_cast<std::size_t>(workers) * 16));
    std::atomic<std::size_t> next{0};
    std::exception_ptr error;
    std::mutex error_mutex;
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w) {
        pool.emplace_back([&] {
            for (;;) {
                const std::size_t begin = next.fetch_add(chunk);
                if (begin >= n) {
                    return;
                }
                try {
                    body(begin, std::min(n, begin + chunk));
                } catch (...) {
                    std::lock_guard lock(error_mutex);
                    if (!error) {
                        error = std::current_exception();
                    }
                    next.store(n);
                    return;
                }
            }
        });
    }
    for (auto& t : pool) {
        t.join();
    }
    if (error) {
        std::rethrow_exception(error);
    }
}

}  // namespace funnel
