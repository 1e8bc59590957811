// Copyright 2026 The sfhe Authors
// SPDX-License-Identifier: Apache-2.0

#include "sfhe/executor.hpp"

#include <algorithm>
#include <exception>
#include <string>
#include <thread>

namespace sfhe {

ExecPlan ExecPlan::make(std::size_t rows, std::size_t cols, std::size_t thread_count) {
    if (thread_count == 0) thread_count = std::max(1u, std::thread::hardware_concurrency());
    return ExecPlan{thread_count, rows, cols};
}

ChunkAccumulator::ChunkAccumulator(const Engine &engine, std::size_t chunk_count,
                                   std::size_t chunk_size)
    : engine_(engine), chunk_size_(chunk_size), chunks_(chunk_count) {
    if (chunk_size_ > 1) locks_ = std::make_unique<std::mutex[]>(chunk_count);
}

std::size_t ChunkAccumulator::sync_memory_bytes() const {
    return locks_ ? chunks_.size() * sizeof(std::mutex) : 0;
}

void ChunkAccumulator::accumulate(std::size_t chunk, const Ciphertext &value) {
    if (chunk >= chunks_.size()) {
        throw Error(ErrorKind::Bounds, "result chunk " + std::to_string(chunk) + " out of range");
    }
    auto write = [&] {
        auto &slot = chunks_[chunk];
        slot = slot ? engine_.add(*slot, value) : value;
    };
    if (!locks_) {
        write();
        return;
    }
    std::unique_lock lock(locks_[chunk], std::try_to_lock);
    if (!lock.owns_lock()) {
        contended_.fetch_add(1, std::memory_order_relaxed);
        lock.lock();
    }
    write();
}

ExecStats execute(const ExecPlan &plan, const std::function<void(std::size_t, std::size_t)> &kernel) {
    if (plan.thread_count == 0) throw Error(ErrorKind::InvalidArgument, "thread count must be positive");
    const std::size_t items = plan.item_count();
    std::atomic<bool> abort{false};
    std::exception_ptr first_error;
    std::mutex error_mutex;

    auto worker = [&](std::size_t thread) {
        for (std::size_t flat = thread; flat < items; flat += plan.thread_count) {
            if (abort.load(std::memory_order_relaxed)) return;
            try {
                kernel(flat / plan.cols, flat % plan.cols);
            } catch (...) {
                std::lock_guard lock(error_mutex);
                if (!first_error) first_error = std::current_exception();
                abort.store(true);
                return;
            }
        }
    };

    if (plan.thread_count == 1) {
        worker(0);
    } else {
        std::vector<std::jthread> pool;
        pool.reserve(plan.thread_count);
        for (std::size_t t = 0; t < plan.thread_count; ++t) pool.emplace_back(worker, t);
    }
    if (first_error) std::rethrow_exception(first_error);
    return ExecStats{plan.thread_count, items, 0, 0};
}

}  // namespace sfhe
