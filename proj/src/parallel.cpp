#include "chemokin/parallel.hpp"

#include <algorithm>

namespace chemokin {

ThreadPool::ThreadPool(int num_threads) {
    int extra = std::max(0, num_threads - 1);
    workers_.reserve(extra);
    for (int i = 0; i < extra; ++i)
        workers_.emplace_back([this, i] { worker_loop(i); });
}

ThreadPool::~ThreadPool() {
    {
        std::lock_guard<std::mutex> lock(mutex_);
        stop_ = true;
    }
    cv_work_.notify_all();
    for (auto& w : workers_) w.join();
}

void ThreadPool::worker_loop(int) {
    for (;;) {
        Job job;
        {
            std::unique_lock<std::mutex> lock(mutex_);
            cv_work_.wait(lock, [this] { return stop_ || !pending_.empty(); });
            if (stop_ && pending_.empty()) return;
            job = pending_.back();
            pending_.pop_back();
        }
        (*job.fn)(job.begin, job.end, job.worker_id);
        {
            std::lock_guard<std::mutex> lock(mutex_);
            --outstanding_;
        }
        cv_done_.notify_one();
    }
}

void ThreadPool::run_chunks(std::int64_t n,
                            const std::function<void(std::int64_t, std::int64_t, int)>& chunk_fn) {
    if (n <= 0) return;
    const int nchunks = size();
    if (nchunks <= 1 || n < 2) {
        chunk_fn(0, n, 0);
        return;
    }
    const std::int64_t chunk = (n + nchunks - 1) / nchunks;
    {
        std::lock_guard<std::mutex> lock(mutex_);
        for (int c = 1; c < nchunks; ++c) {
            std::int64_t b = std::min<std::int64_t>(n, c * chunk);
            std::int64_t e = std::min<std::int64_t>(n, (c + 1) * chunk);
            if (b >= e) continue;
            pending_.push_back(Job{&chunk_fn, b, e, c});
            ++outstanding_;
        }
    }
    cv_work_.notify_all();
    chunk_fn(0, std::min<std::int64_t>(n, chunk), 0);
    std::unique_lock<std::mutex> lock(mutex_);
    cv_done_.wait(lock, [this] { return outstanding_ == 0; });
}

void ThreadPool::parallel_for(std::int64_t n, const std::function<void(std::int64_t, int)>& fn) {
    run_chunks(n, [&fn](std::int64_t b, std::int64_t e, int w) {
        for (std::int64_t i = b; i < e; ++i) fn(i, w);
    });
}

} // namespace chemokin
