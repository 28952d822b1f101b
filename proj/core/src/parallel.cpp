#include "eqweyl/parallel.hpp"

#include <algorithm>
#include <mutex>

namespace eqweyl {
namespace par {

namespace {
std::atomic<int> g_workers{0};  // 0 = use hardware concurrency
}

int worker_count() {
    int w = g_workers.load();
    if (w <= 0) {
        unsigned hc = std::thread::hardware_concurrency();
        w = hc > 0 ? static_cast<int>(hc) : 1;
    }
    return w;
}

void set_worker_count(int n) { g_workers.store(n); }

void for_each_chunk(int64_t chunk_count, const std::function<void(int64_t)>& fn) {
    if (chunk_count <= 0) return;
    const int workers = std::min<int64_t>(worker_count(), chunk_count);
    if (workers <= 1) {
        for (int64_t c = 0; c < chunk_count; ++c) fn(c);
        return;
    }
    std::atomic<int64_t> next{0};
    std::vector<std::thread> pool;
    pool.reserve(workers);
    std::exception_ptr error;
    std::mutex error_mtx;
    for (int w = 0; w < workers; ++w) {
        pool.emplace_back([&]() {
            while (true) {
                const int64_t c = next.fetch_add(1);
                if (c >= chunk_count) return;
                try {
                    fn(c);
                } catch (...) {
                    std::lock_guard<std::mutex> lock(error_mtx);
                    if (!error) error = std::current_exception();
                }
            }
        });
    }
    for (auto& t : pool) t.join();
    if (error) std::rethrow_exception(error);
}

}  // namespace par
}  // namespace eqweyl
