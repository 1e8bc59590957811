// Copyright 2026 The sfhe Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <atomic>
#include <cstddef>
#include <functional>
#include <memory>
#include <mutex>
#include <optional>
#include <vector>

#include "sfhe/engine.hpp"

namespace sfhe {

/// Static assignment of result elements to threads: element (row, col) runs
/// on thread (row * cols + col) mod T.
struct ExecPlan {
    std::size_t thread_count = 1;
    std::size_t rows = 0;
    std::size_t cols = 0;

    /// thread_count 0 selects std::thread::hardware_concurrency().
    static ExecPlan make(std::size_t rows, std::size_t cols, std::size_t thread_count);

    std::size_t item_count() const { return rows * cols; }
    std::size_t thread_for(std::size_t row, std::size_t col) const {
        return (row * cols + col) % thread_count;
    }
};

struct ExecStats {
    std::size_t thread_count = 0;
    std::size_t items = 0;
    std::size_t contended_writes = 0;
    std::size_t sync_memory_bytes = 0;
};

/// Result chunks under construction. Chunks start as plaintext zeros and
/// become ciphertexts on their first write; later writes are added in. With
/// chunk_size > 1 every chunk carries a mutex, otherwise writes are unguarded
/// because each chunk has exactly one writer.
class ChunkAccumulator {
public:
    ChunkAccumulator(const Engine &engine, std::size_t chunk_count, std::size_t chunk_size);

    void accumulate(std::size_t chunk, const Ciphertext &value);

    std::size_t chunk_count() const { return chunks_.size(); }
    std::size_t chunk_size() const { return chunk_size_; }
    std::size_t contended_writes() const { return contended_.load(); }
    /// Bytes held purely for cross-thread exclusion.
    std::size_t sync_memory_bytes() const;

    std::vector<std::optional<Ciphertext>> release() { return std::move(chunks_); }

private:
    const Engine &engine_;
    std::size_t chunk_size_;
    std::vector<std::optional<Ciphertext>> chunks_;
    std::unique_ptr<std::mutex[]> locks_;
    std::atomic<std::size_t> contended_{0};
};

/// Runs kernel(row, col) once per element of the plan on a pool of
/// plan.thread_count threads created for this call. The first exception
/// thrown by any kernel is rethrown after every thread has finished; items
/// not yet started when it occurred are skipped.
ExecStats execute(const ExecPlan &plan, const std::function<void(std::size_t, std::size_t)> &kernel);

}  // namespace sfhe
