// Copyright 2026 The sfhe Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <optional>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

#include "sfhe/engine.hpp"

namespace sfhe {

struct MatrixDims {
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::size_t count() const { return rows * cols; }
    friend bool operator==(const MatrixDims &, const MatrixDims &) = default;
};

/// Dense row-major matrix of doubles.
class PlainMatrix {
public:
    PlainMatrix() = default;
    PlainMatrix(std::size_t rows, std::size_t cols, double fill = 0.0)
        : dims_{rows, cols}, data_(rows * cols, fill) {}
    PlainMatrix(std::size_t rows, std::size_t cols, std::vector<double> data);

    std::size_t rows() const { return dims_.rows; }
    std::size_t cols() const { return dims_.cols; }
    const MatrixDims &dims() const { return dims_; }

    double &operator()(std::size_t i, std::size_t j) { return data_[i * dims_.cols + j]; }
    double operator()(std::size_t i, std::size_t j) const { return data_[i * dims_.cols + j]; }
    const std::vector<double> &data() const { return data_; }
    std::vector<double> &data() { return data_; }

    static PlainMatrix identity(std::size_t n);

    friend bool operator==(const PlainMatrix &, const PlainMatrix &) = default;

private:
    MatrixDims dims_;
    std::vector<double> data_;
};

enum class Layout { Dense, BinaryMask, Csr, Ellpack };

std::string_view to_string(Layout layout);

struct DenseMeta {};

struct BinaryMaskMeta {
    std::vector<bool> zero;  // row-major, true where the plaintext value is 0
};

struct CsrMeta {
    std::vector<std::size_t> row_ptr;
    std::vector<std::size_t> col_idx;  // strictly increasing within each row
};

struct EllpackMeta {
    std::size_t width = 0;             // j: largest per-row nonzero count
    std::vector<std::size_t> columns;  // rows x width, row-major
    std::vector<bool> valid;           // rows x width, false on padding
};

struct SparsityMetadata {
    MatrixDims dims;
    std::variant<DenseMeta, BinaryMaskMeta, CsrMeta, EllpackMeta> detail;

    Layout layout() const { return static_cast<Layout>(detail.index()); }
    /// Number of values packed into ciphertext slots for this layout.
    std::size_t stored_count() const;
    /// Plaintext metadata footprint: 1 byte per flag, 8 per index.
    std::size_t bytes() const;
    /// Throws Corruption when the structure violates its layout invariants.
    void validate() const;

    static SparsityMetadata build(const PlainMatrix &m, Layout layout);
};

struct ChunkLocation {
    std::size_t chunk = 0;
    std::size_t slot = 0;
    friend bool operator==(const ChunkLocation &, const ChunkLocation &) = default;
};

/// Stored position of element (i, j), or nullopt when the layout does not
/// store it. Throws Bounds for out-of-range indices.
std::optional<std::size_t> stored_index(const SparsityMetadata &meta, std::size_t i, std::size_t j);

/// Matrix values packed row-major into ciphertext chunks of `chunk_size`
/// slots. A chunk without a ciphertext is a plaintext zero.
class EncryptedMatrix {
public:
    EncryptedMatrix(SparsityMetadata metadata, std::size_t chunk_size,
                    std::vector<std::optional<Ciphertext>> chunks);

    const MatrixDims &dims() const { return metadata_.dims; }
    std::size_t rows() const { return metadata_.dims.rows; }
    std::size_t cols() const { return metadata_.dims.cols; }
    std::size_t chunk_size() const { return chunk_size_; }
    std::size_t chunk_count() const { return chunks_.size(); }
    Layout layout() const { return metadata_.layout(); }
    const SparsityMetadata &metadata() const { return metadata_; }
    const std::vector<std::optional<Ciphertext>> &chunks() const { return chunks_; }
    const std::optional<Ciphertext> &chunk(std::size_t index) const { return chunks_.at(index); }

    std::optional<ChunkLocation> element_locator(std::size_t i, std::size_t j) const;

    /// Sum of ciphertext bytes over the chunks that hold a ciphertext.
    std::size_t matrix_bytes() const;
    std::size_t metadata_bytes() const { return metadata_.bytes(); }

private:
    SparsityMetadata metadata_;
    std::size_t chunk_size_;
    std::vector<std::optional<Ciphertext>> chunks_;
};

/// ceil(stored / c).
std::size_t expected_chunk_count(const SparsityMetadata &meta, std::size_t chunk_size);

EncryptedMatrix encrypt_matrix(const PlainMatrix &m, std::size_t chunk_size, Layout layout,
                               const Engine &engine);

PlainMatrix decrypt_matrix(const EncryptedMatrix &e, const Engine &engine);

}  // namespace sfhe
