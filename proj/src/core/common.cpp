#include "core/common.hpp"

#include <atomic>
#include <mutex>
#include <sstream>
#include <thread>

namespace tat {

namespace {
std::atomic<int> g_default_threads{0};
}

void set_default_threads(int n) { g_default_threads.store(n); }

int default_threads() {
    int n = g_default_threads.load();
    if (n > 0) return n;
    unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : static_cast<int>(hw);
}

void parallel_for(size_t n, const std::function<void(size_t)>& fn, int n_threads) {
    if (n == 0) return;
    int workers = n_threads > 0 ? n_threads : default_threads();
    if (workers <= 1 || n == 1) {
        for (size_t i = 0; i < n; ++i) fn(i);
        return;
    }
    workers = static_cast<int>(std::min<size_t>(static_cast<size_t>(workers), n));
    std::atomic<size_t> next{0};
    std::vector<std::thread> pool;
    pool.reserve(static_cast<size_t>(workers));
    std::exception_ptr first_error;
    std::mutex err_mutex;
    for (int w = 0; w < workers; ++w) {
        pool.emplace_back([&] {
            for (;;) {
                size_t i = next.fetch_add(1);
                if (i >= n) break;
                try {
                    fn(i);
                } catch (...) {
                    std::lock_guard<std::mutex> lock(err_mutex);
                    if (!first_error) first_error = std::current_exception();
                    break;
                }
            }
        });
    }
    for (auto& t : pool) t.join();
    if (first_error) std::rethrow_exception(first_error);
}

std::string format_vec(Vec2 v) {
    std::ostringstream os;
    os << "(" << v.x << ", " << v.y << ")";
    return os.str();
}

}  // namespace tat
