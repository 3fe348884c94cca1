#pragma once

#include <condition_variable>
#include <cstdint>
#include <functional>
#include <mutex>
#include <thread>
#include <vector>

namespace chemokin {

/// Fixed-size worker pool for data-parallel loops.
///
/// parallel_for partitions [0,n) into one contiguous chunk per worker, so a
/// given element is always computed by exactly one task with the same
/// floating-point operations; results are bitwise independent of the worker
/// count. Reductions are never performed in parallel anywhere in this
/// code base: callers accumulate serially after the loop.
class ThreadPool {
public:
    explicit ThreadPool(int num_threads = 1);
    ~ThreadPool();

    ThreadPool(const ThreadPool&) = delete;
    ThreadPool& operator=(const ThreadPool&) = delete;

    int size() const { return static_cast<int>(workers_.size()) + 1; }

    /// Runs chunk_fn(begin, end, worker_id) over a partition of [0,n).
    /// worker_id is in [0, size()); chunk 0 runs on the calling thread.
    void run_chunks(std::int64_t n,
                    const std::function<void(std::int64_t, std::int64_t, int)>& chunk_fn);

    /// Elementwise loop; fn(i, worker_id) must not touch data owned by other i.
    void parallel_for(std::int64_t n, const std::function<void(std::int64_t, int)>& fn);

private:
    struct Job {
        const std::function<void(std::int64_t, std::int64_t, int)>* fn = nullptr;
        std::int64_t begin = 0, end = 0;
        int worker_id = 0;
    };

    void worker_loop(int index);

    std::vector<std::thread> workers_;
    std::mutex mutex_;
    std::condition_variable cv_work_;
    std::condition_variable cv_done_;
    std::vector<Job> pending_;
    int outstanding_ = 0;
    bool stop_ = false;
};

} // namespace chemokin
