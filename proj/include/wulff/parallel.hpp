#pragma once

#include <condition_variable>
#include <cstdlib>
#include <functional>
#include <mutex>
#include <thread>
#include <vector>

namespace wulff {

/// Worker cap: WULFF_LAB_THREADS when set, else the hardware concurrency.
inline unsigned max_threads() {
    if (const char* env = std::getenv("WULFF_LAB_THREADS")) {
        const long v = std::strtol(env, nullptr, 10);
        if (v >= 1) return static_cast<unsigned>(v);
    }
    const unsigned hw = std::thread::hardware_concurrency();
    return hw ? hw : 1;
}

namespace detail {

// Persistent worker pool with strided index assignment: lane w handles
// indices w, w + L, w + 2L, ... for L lanes. Every index writes only its
// own output slot and lanes never cross generations, so results are
// independent of the schedule. run() is not reentrant (no nested calls).
class WorkerPool {
public:
    static WorkerPool& instance() {
        static WorkerPool pool(max_threads());
        return pool;
    }

    unsigned lanes() const { return static_cast<unsigned>(workers_.size()) + 1; }

    void run(std::size_t n, const std::function<void(std::size_t)>& fn) {
        if (n == 0) return;
        if (workers_.empty() || n == 1) {
            for (std::size_t i = 0; i < n; ++i) fn(i);
            return;
        }
        {
            std::lock_guard<std::mutex> lock(mutex_);
            fn_ = &fn;
            total_ = n;
            remaining_ = lanes();
            ++generation_;
            cv_start_.notify_all();
        }
        run_lane(0);
        std::unique_lock<std::mutex> lock(mutex_);
        if (--remaining_ == 0) cv_done_.notify_all();
        cv_done_.wait(lock, [this] { return remaining_ == 0; });
        fn_ = nullptr;
    }

private:
    explicit WorkerPool(unsigned n_threads) {
        for (unsigned i = 1; i < n_threads; ++i)
            workers_.emplace_back([this, i] { worker_loop(i); });
    }

    ~WorkerPool() {
        {
            std::lock_guard<std::mutex> lock(mutex_);
            stop_ = true;
            cv_start_.notify_all();
        }
        for (auto& w : workers_) w.join();
    }

    void run_lane(unsigned lane) {
        const std::function<void(std::size_t)>& fn = *fn_;
        const std::size_t n = total_;
        const unsigned L = lanes();
        for (std::size_t i = lane; i < n; i += L) fn(i);
    }

    void worker_loop(unsigned lane) {
        std::size_t seen = 0;
        for (;;) {
            {
                std::unique_lock<std::mutex> lock(mutex_);
                cv_start_.wait(lock, [&] { return stop_ || generation_ != seen; });
                if (stop_) return;
                seen = generation_;
            }
            run_lane(lane);
            std::lock_guard<std::mutex> lock(mutex_);
            if (--remaining_ == 0) cv_done_.notify_all();
        }
    }

    std::vector<std::thread> workers_;
    std::mutex mutex_;
    std::condition_variable cv_start_;
    std::condition_variable cv_done_;
    const std::function<void(std::size_t)>* fn_ = nullptr;
    std::size_t total_ = 0;
    unsigned remaining_ = 0;
    std::size_t generation_ = 0;
    bool stop_ = false;
};

} // namespace detail

/// Runs fn(i) for i in [0, n) on the shared pool. Each index owns its
/// output slot, so results are independent of thread count and schedule.
inline void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn) {
    detail::WorkerPool::instance().run(n, fn);
}

} // namespace wulff
