// Copyright 2026 The sfhe Authors
// SPDX-License-Identifier: Apache-2.0

#include "sfhe/encrypted_matrix.hpp"

#include <algorithm>
#include <string>

namespace sfhe {

PlainMatrix::PlainMatrix(std::size_t rows, std::size_t cols, std::vector<double> data)
    : dims_{rows, cols}, data_(std::move(data)) {
    if (data_.size() != rows * cols) {
        throw Error(ErrorKind::Dimension, "matrix data of length " + std::to_string(data_.size()) +
                                              " does not match " + std::to_string(rows) + "x" +
                                              std::to_string(cols));
    }
}

PlainMatrix PlainMatrix::identity(std::size_t n) {
    PlainMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
}

std::string_view to_string(Layout layout) {
    switch (layout) {
    case Layout::Dense: return "dense";
    case Layout::BinaryMask: return "binary_mask";
    case Layout::Csr: return "csr";
    case Layout::Ellpack: return "ellpack";
    }
    return "unknown";
}

std::size_t SparsityMetadata::stored_count() const {
    return std::visit(
        [this](const auto &m) -> std::size_t {
            using T = std::decay_t<decltype(m)>;
            if constexpr (std::is_same_v<T, CsrMeta>) {
                return m.col_idx.size();
            } else if constexpr (std::is_same_v<T, EllpackMeta>) {
                return dims.rows * m.width;
            } else {
                return dims.count();
            }
        },
        detail);
}

std::size_t SparsityMetadata::bytes() const {
    constexpr std::size_t index_bytes = 8;
    return std::visit(
        [](const auto &m) -> std::size_t {
            using T = std::decay_t<decltype(m)>;
            if constexpr (std::is_same_v<T, BinaryMaskMeta>) {
                return m.zero.size();
            } else if constexpr (std::is_same_v<T, CsrMeta>) {
                return (m.row_ptr.size() + m.col_idx.size()) * index_bytes;
            } else if constexpr (std::is_same_v<T, EllpackMeta>) {
                return m.columns.size() * index_bytes + m.valid.size();
            } else {
                return 0;
            }
        },
        detail);
}

void SparsityMetadata::validate() const {
    auto fail = [](const std::string &what) { throw Error(ErrorKind::Corruption, what); };
    if (const auto *b = std::get_if<BinaryMaskMeta>(&detail)) {
        if (b->zero.size() != dims.count()) fail("binary mask size does not match dims");
    } else if (const auto *c = std::get_if<CsrMeta>(&detail)) {
        if (c->row_ptr.size() != dims.rows + 1 || c->row_ptr.front() != 0 ||
            c->row_ptr.back() != c->col_idx.size()) {
            fail("csr row_ptr inconsistent with col_idx");
        }
        for (std::size_t i = 0; i < dims.rows; ++i) {
            if (c->row_ptr[i] > c->row_ptr[i + 1]) fail("csr row_ptr decreases");
            for (std::size_t t = c->row_ptr[i]; t < c->row_ptr[i + 1]; ++t) {
                if (c->col_idx[t] >= dims.cols) fail("csr column index out of range");
                if (t > c->row_ptr[i] && c->col_idx[t - 1] >= c->col_idx[t]) {
                    fail("csr columns not strictly increasing within a row");
                }
            }
        }
    } else if (const auto *e = std::get_if<EllpackMeta>(&detail)) {
        const std::size_t cells = dims.rows * e->width;
        if (e->columns.size() != cells || e->valid.size() != cells) {
            fail("ellpack arrays do not match rows x width");
        }
        for (std::size_t t = 0; t < cells; ++t) {
            if (e->valid[t] && e->columns[t] >= dims.cols) fail("ellpack column out of range");
        }
    }
}

SparsityMetadata SparsityMetadata::build(const PlainMatrix &m, Layout layout) {
    SparsityMetadata meta;
    meta.dims = m.dims();
    switch (layout) {
    case Layout::Dense: meta.detail = DenseMeta{}; break;
    case Layout::BinaryMask: {
        BinaryMaskMeta b;
        b.zero.resize(m.dims().count());
        for (std::size_t e = 0; e < b.zero.size(); ++e) b.zero[e] = m.data()[e] == 0.0;
        meta.detail = std::move(b);
        break;
    }
    case Layout::Csr: {
        CsrMeta c;
        c.row_ptr.push_back(0);
        for (std::size_t i = 0; i < m.rows(); ++i) {
            for (std::size_t j = 0; j < m.cols(); ++j) {
                if (m(i, j) != 0.0) c.col_idx.push_back(j);
            }
            c.row_ptr.push_back(c.col_idx.size());
        }
        meta.detail = std::move(c);
        break;
    }
    case Layout::Ellpack: {
        EllpackMeta e;
        for (std::size_t i = 0; i < m.rows(); ++i) {
            std::size_t nz = 0;
            for (std::size_t j = 0; j < m.cols(); ++j) nz += m(i, j) != 0.0;
            e.width = std::max(e.width, nz);
        }
        e.columns.assign(m.rows() * e.width, 0);
        e.valid.assign(m.rows() * e.width, false);
        for (std::size_t i = 0; i < m.rows(); ++i) {
            std::size_t t = 0;
            for (std::size_t j = 0; j < m.cols(); ++j) {
                if (m(i, j) == 0.0) continue;
                e.columns[i * e.width + t] = j;
                e.valid[i * e.width + t] = true;
                ++t;
            }
        }
        meta.detail = std::move(e);
        break;
    }
    }
    return meta;
}

std::optional<std::size_t> stored_index(const SparsityMetadata &meta, std::size_t i, std::size_t j) {
    if (i >= meta.dims.rows || j >= meta.dims.cols) {
        throw Error(ErrorKind::Bounds, "element (" + std::to_string(i) + ", " + std::to_string(j) +
                                           ") outside " + std::to_string(meta.dims.rows) + "x" +
                                           std::to_string(meta.dims.cols));
    }
    if (const auto *c = std::get_if<CsrMeta>(&meta.detail)) {
        const auto first = c->col_idx.begin() + static_cast<std::ptrdiff_t>(c->row_ptr[i]);
        const auto last = c->col_idx.begin() + static_cast<std::ptrdiff_t>(c->row_ptr[i + 1]);
        const auto it = std::lower_bound(first, last, j);
        if (it == last || *it != j) return std::nullopt;
        return static_cast<std::size_t>(it - c->col_idx.begin());
    }
    if (const auto *e = std::get_if<EllpackMeta>(&meta.detail)) {
        for (std::size_t t = 0; t < e->width; ++t) {
            const std::size_t cell = i * e->width + t;
            if (e->valid[cell] && e->columns[cell] == j) return cell;
        }
        return std::nullopt;
    }
    return i * meta.dims.cols + j;
}

std::size_t expected_chunk_count(const SparsityMetadata &meta, std::size_t chunk_size) {
    return (meta.stored_count() + chunk_size - 1) / chunk_size;
}

EncryptedMatrix::EncryptedMatrix(SparsityMetadata metadata, std::size_t chunk_size,
                                 std::vector<std::optional<Ciphertext>> chunks)
    : metadata_(std::move(metadata)), chunk_size_(chunk_size), chunks_(std::move(chunks)) {
    if (chunk_size_ == 0) throw Error(ErrorKind::InvalidArgument, "chunk size must be at least 1");
    metadata_.validate();
    if (chunks_.size() != expected_chunk_count(metadata_, chunk_size_)) {
        throw Error(ErrorKind::Corruption, "chunk count " + std::to_string(chunks_.size()) +
                                               " does not match layout (expected " +
                                               std::to_string(expected_chunk_count(metadata_, chunk_size_)) +
                                               ")");
    }
    const Ciphertext *first = nullptr;
    for (const auto &c : chunks_) {
        if (!c) continue;
        if (!first) {
            first = &*c;
        } else if (c->level() != first->level() || c->scale() != first->scale()) {
            throw Error(ErrorKind::Corruption, "chunks differ in level or scale");
        }
    }
}

std::optional<ChunkLocation> EncryptedMatrix::element_locator(std::size_t i, std::size_t j) const {
    const auto index = stored_index(metadata_, i, j);
    if (!index) return std::nullopt;
    return ChunkLocation{*index / chunk_size_, *index % chunk_size_};
}

std::size_t EncryptedMatrix::matrix_bytes() const {
    std::size_t total = 0;
    for (const auto &c : chunks_) {
        if (c) total += c->byte_size();
    }
    return total;
}

namespace {

// Values in stored order for the given layout (padding included).
std::vector<double> stored_values(const PlainMatrix &m, const SparsityMetadata &meta) {
    if (const auto *c = std::get_if<CsrMeta>(&meta.detail)) {
        std::vector<double> out;
        out.reserve(c->col_idx.size());
        for (std::size_t i = 0; i < m.rows(); ++i) {
            for (std::size_t t = c->row_ptr[i]; t < c->row_ptr[i + 1]; ++t) out.push_back(m(i, c->col_idx[t]));
        }
        return out;
    }
    if (const auto *e = std::get_if<EllpackMeta>(&meta.detail)) {
        std::vector<double> out(e->columns.size(), 0.0);
        for (std::size_t i = 0; i < m.rows(); ++i) {
            for (std::size_t t = 0; t < e->width; ++t) {
                const std::size_t cell = i * e->width + t;
                if (e->valid[cell]) out[cell] = m(i, e->columns[cell]);
            }
        }
        return out;
    }
    return m.data();
}

}  // namespace

EncryptedMatrix encrypt_matrix(const PlainMatrix &m, std::size_t chunk_size, Layout layout,
                               const Engine &engine) {
    if (m.rows() == 0 || m.cols() == 0) {
        throw Error(ErrorKind::Dimension, "cannot encrypt an empty matrix");
    }
    if (chunk_size == 0) throw Error(ErrorKind::InvalidArgument, "chunk size must be at least 1");
    if (chunk_size > engine.slot_count()) {
        throw Error(ErrorKind::Capacity, "chunk size " + std::to_string(chunk_size) +
                                             " exceeds slot count " +
                                             std::to_string(engine.slot_count()));
    }
    SparsityMetadata meta = SparsityMetadata::build(m, layout);
    const std::vector<double> values = stored_values(m, meta);
    std::vector<std::optional<Ciphertext>> chunks(expected_chunk_count(meta, chunk_size));
    for (std::size_t k = 0; k < chunks.size(); ++k) {
        const std::size_t begin = k * chunk_size;
        const std::size_t end = std::min(values.size(), begin + chunk_size);
        chunks[k] = engine.encrypt(std::span<const double>(values).subspan(begin, end - begin));
    }
    return EncryptedMatrix(std::move(meta), chunk_size, std::move(chunks));
}

PlainMatrix decrypt_matrix(const EncryptedMatrix &e, const Engine &engine) {
    const std::size_t c = e.chunk_size();
    std::vector<PlainVector> plain(e.chunk_count());
    for (std::size_t k = 0; k < e.chunk_count(); ++k) {
        if (e.chunk(k)) {
            plain[k] = engine.decrypt(*e.chunk(k));
            if (plain[k].size() < c) throw Error(ErrorKind::Corruption, "decrypted chunk too short");
        }
    }
    PlainMatrix out(e.rows(), e.cols());
    for (std::size_t i = 0; i < e.rows(); ++i) {
        for (std::size_t j = 0; j < e.cols(); ++j) {
            const auto loc = e.element_locator(i, j);
            if (!loc) continue;
            if (loc->chunk >= plain.size()) throw Error(ErrorKind::Corruption, "element maps past the last chunk");
            if (!plain[loc->chunk].empty()) out(i, j) = plain[loc->chunk][loc->slot];
        }
    }
    return out;
}

}  // namespace sfhe
