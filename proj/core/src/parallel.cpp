#include "cwplan/parallel.hpp"

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <exception>
#include <thread>
#include <vector>

namespace cwplan {

int thread_budget() {
    if (const char* env = std::getenv("CWPLAN_THREADS")) {
        char* end = nullptr;
        const long v = std::strtol(env, &end, 10);
        if (end != env && *end == '\0' && v >= 1) {
            return static_cast<int>(std::min(v, 256L));
        }
    }
    const unsigned hc = std::thread::hardware_concurrency();
    return hc > 0 ? static_cast<int>(hc) : 1;
}

void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body) {
    if (n == 0) {
        return;
    }
    const auto budget =
        std::min(static_cast<std::size_t>(thread_budget()), n);
    if (budget <= 1) {
        for (std::size_t i = 0; i < n; ++i) {
            body(i);
        }
        return;
    }

    std::atomic<std::size_t> next{0};
    std::vector<std::exception_ptr> errors(budget);
    auto worker = [&](std::size_t w) {
        try {
            for (std::size_t i = next.fetch_add(1); i < n;
                 i = next.fetch_add(1)) {
                body(i);
            }
        } catch (...) {
            errors[w] = std::current_exception();
            next.store(n);  // stop handing out work
        }
    };

    std::vector<std::thread> pool;
    pool.reserve(budget - 1);
    for (std::size_t w = 1; w < budget; ++w) {
        pool.emplace_back(worker, w);
    }
    worker(0);
    for (std::thread& t : pool) {
        t.join();
    }
    for (const std::exception_ptr& e : errors) {
        if (e) {
            std::rethrow_exception(e);
        }
    }
}

} // namespace cwplan
