// Copyright 2026 The sfhe Authors
// SPDX-License-Identifier: Apache-2.0

#include "sfhe/matmul.hpp"

#include <algorithm>
#include <string>

namespace sfhe {

std::string_view scheme_name(SchemeId scheme) {
    switch (scheme) {
    case SchemeId::NaiveDense: return "dense";
    case SchemeId::NaiveSparse: return "naive";
    case SchemeId::Csr: return "csr";
    case SchemeId::Ellpack: return "ellpack";
    }
    return "unknown";
}

SchemeId parse_scheme(std::string_view name) {
    for (SchemeId s : kAllSchemes) {
        if (scheme_name(s) == name) return s;
    }
    throw Error(ErrorKind::InvalidArgument,
                "unknown scheme '" + std::string(name) + "' (expected dense, naive, csr or ellpack)");
}

Layout scheme_layout(SchemeId scheme) {
    switch (scheme) {
    case SchemeId::NaiveDense: return Layout::Dense;
    case SchemeId::NaiveSparse: return Layout::BinaryMask;
    case SchemeId::Csr: return Layout::Csr;
    case SchemeId::Ellpack: return Layout::Ellpack;
    }
    return Layout::Dense;
}

namespace {

void check_operands(SchemeId scheme, const SparsityMetadata &lhs, const SparsityMetadata &rhs) {
    const Layout want = scheme_layout(scheme);
    if (lhs.layout() != want || rhs.layout() != want) {
        throw Error(ErrorKind::LayoutMismatch,
                    "scheme " + std::string(scheme_name(scheme)) + " needs " +
                        std::string(to_string(want)) + " operands, got " +
                        std::string(to_string(lhs.layout())) + " and " +
                        std::string(to_string(rhs.layout())));
    }
    if (lhs.dims.cols != rhs.dims.rows) {
        throw Error(ErrorKind::Shape, "cannot multiply " + std::to_string(lhs.dims.rows) + "x" +
                                          std::to_string(lhs.dims.cols) + " by " +
                                          std::to_string(rhs.dims.rows) + "x" +
                                          std::to_string(rhs.dims.cols));
    }
}

bool csr_row_has(const CsrMeta &m, std::size_t row, std::size_t col) {
    const auto first = m.col_idx.begin() + static_cast<std::ptrdiff_t>(m.row_ptr[row]);
    const auto last = m.col_idx.begin() + static_cast<std::ptrdiff_t>(m.row_ptr[row + 1]);
    return std::binary_search(first, last, col);
}

bool ellpack_row_has(const EllpackMeta &m, std::size_t row, std::size_t col) {
    for (std::size_t t = 0; t < m.width; ++t) {
        const std::size_t cell = row * m.width + t;
        if (m.valid[cell] && m.columns[cell] == col) return true;
    }
    return false;
}

// contributions_for without the operand checks, for the hot loops.
std::vector<std::size_t> contributions_unchecked(SchemeId scheme, const SparsityMetadata &lhs,
                                                 const SparsityMetadata &rhs, std::size_t row,
                                                 std::size_t col) {
    const std::size_t shared = lhs.dims.cols;
    const std::size_t rcols = rhs.dims.cols;
    std::vector<std::size_t> ks;
    switch (scheme) {
    case SchemeId::NaiveDense:
        ks.resize(shared);
        for (std::size_t k = 0; k < shared; ++k) ks[k] = k;
        break;
    case SchemeId::NaiveSparse: {
        const auto &a = std::get<BinaryMaskMeta>(lhs.detail).zero;
        const auto &b = std::get<BinaryMaskMeta>(rhs.detail).zero;
        for (std::size_t k = 0; k < shared; ++k) {
            if (!(a[row * shared + k] || b[k * rcols + col])) ks.push_back(k);
        }
        break;
    }
    case SchemeId::Csr: {
        const auto &a = std::get<CsrMeta>(lhs.detail);
        const auto &b = std::get<CsrMeta>(rhs.detail);
        for (std::size_t t = a.row_ptr[row]; t < a.row_ptr[row + 1]; ++t) {
            if (csr_row_has(b, a.col_idx[t], col)) ks.push_back(a.col_idx[t]);
        }
        break;
    }
    case SchemeId::Ellpack: {
        const auto &a = std::get<EllpackMeta>(lhs.detail);
        const auto &b = std::get<EllpackMeta>(rhs.detail);
        for (std::size_t t = 0; t < a.width; ++t) {
            const std::size_t cell = row * a.width + t;
            if (a.valid[cell] && ellpack_row_has(b, a.columns[cell], col)) ks.push_back(a.columns[cell]);
        }
        break;
    }
    }
    return ks;
}

}  // namespace

std::vector<std::size_t> contributions_for(SchemeId scheme, const SparsityMetadata &lhs,
                                           const SparsityMetadata &rhs, std::size_t row,
                                           std::size_t col) {
    check_operands(scheme, lhs, rhs);
    if (row >= lhs.dims.rows || col >= rhs.dims.cols) {
        throw Error(ErrorKind::Bounds, "result element (" + std::to_string(row) + ", " +
                                           std::to_string(col) + ") out of range");
    }
    return contributions_unchecked(scheme, lhs, rhs, row, col);
}

std::optional<Ciphertext> compute_element(const EncryptedMatrix &lhs, const EncryptedMatrix &rhs,
                                          std::size_t row, std::size_t col,
                                          const std::vector<std::size_t> &contributions,
                                          std::size_t result_slot, const Engine &engine) {
    if (lhs.cols() != rhs.rows()) {
        throw Error(ErrorKind::Shape, "inner dimensions differ");
    }
    static constexpr double kSlotZeroMask[] = {1.0};
    std::optional<Ciphertext> acc;
    for (std::size_t k : contributions) {
        const auto a_loc = lhs.element_locator(row, k);
        const auto b_loc = rhs.element_locator(k, col);
        if (!a_loc || !b_loc || !lhs.chunk(a_loc->chunk) || !rhs.chunk(b_loc->chunk)) {
            throw Error(ErrorKind::Corruption, "contribution k=" + std::to_string(k) +
                                                   " refers to an element that is not stored");
        }
        const Ciphertext a = engine.rotate(*lhs.chunk(a_loc->chunk), static_cast<int>(a_loc->slot));
        const Ciphertext b = engine.rotate(*rhs.chunk(b_loc->chunk), static_cast<int>(b_loc->slot));
        Ciphertext p = engine.rescale(engine.relinearize(engine.multiply(a, b)));
        p = engine.rescale(engine.relinearize(engine.multiply_plain(p, kSlotZeroMask)));
        p = engine.rotate(p, -static_cast<int>(result_slot));
        acc = acc ? engine.add(*acc, p) : p;
    }
    return acc;
}

MatmulResult matmul(const EncryptedMatrix &lhs, const EncryptedMatrix &rhs, SchemeId scheme,
                    const Engine &engine, const MatmulOptions &options) {
    check_operands(scheme, lhs.metadata(), rhs.metadata());
    const std::size_t c = options.chunk_size == 0 ? lhs.chunk_size() : options.chunk_size;
    if (c > engine.slot_count()) {
        throw Error(ErrorKind::Capacity, "result chunk size exceeds slot count");
    }
    const std::size_t rows = lhs.rows();
    const std::size_t cols = rhs.cols();
    SparsityMetadata meta{MatrixDims{rows, cols}, DenseMeta{}};
    ChunkAccumulator acc(engine, expected_chunk_count(meta, c), c);

    const ExecPlan plan = ExecPlan::make(rows, cols, options.threads);
    ExecStats stats = execute(plan, [&](std::size_t row, std::size_t col) {
        const std::size_t flat = row * cols + col;
        const auto ks = contributions_unchecked(scheme, lhs.metadata(), rhs.metadata(), row, col);
        if (auto value = compute_element(lhs, rhs, row, col, ks, flat % c, engine)) {
            acc.accumulate(flat / c, *value);
        }
    });
    stats.contended_writes = acc.contended_writes();
    stats.sync_memory_bytes = acc.sync_memory_bytes();
    return MatmulResult{EncryptedMatrix(std::move(meta), c, acc.release()), stats};
}

OpCounts homomorphic_op_count(SchemeId scheme, const SparsityMetadata &lhs,
                              const SparsityMetadata &rhs, std::size_t result_chunk_size) {
    check_operands(scheme, lhs, rhs);
    if (result_chunk_size == 0) throw Error(ErrorKind::InvalidArgument, "chunk size must be at least 1");
    const std::size_t cols = rhs.dims.cols;
    std::size_t steps = 0;
    std::vector<bool> touched((lhs.dims.rows * cols + result_chunk_size - 1) / result_chunk_size, false);
    for (std::size_t row = 0; row < lhs.dims.rows; ++row) {
        for (std::size_t col = 0; col < cols; ++col) {
            const std::size_t n = contributions_unchecked(scheme, lhs, rhs, row, col).size();
            steps += n;
            if (n > 0) touched[(row * cols + col) / result_chunk_size] = true;
        }
    }
    const auto chunks = static_cast<std::size_t>(std::count(touched.begin(), touched.end(), true));
    OpCounts counts;
    counts.rotations = 3 * steps;
    counts.ct_multiplies = steps;
    counts.plain_multiplies = steps;
    counts.relinearizations = 2 * steps;
    counts.rescales = 2 * steps;
    // Every add merges two partial sums; one survives per written chunk.
    counts.adds = steps - chunks;
    return counts;
}

PlainMatrix plaintext_matmul(SchemeId scheme, const PlainMatrix &lhs, const PlainMatrix &rhs) {
    const Layout layout = scheme_layout(scheme);
    const SparsityMetadata a = SparsityMetadata::build(lhs, layout);
    const SparsityMetadata b = SparsityMetadata::build(rhs, layout);
    check_operands(scheme, a, b);
    PlainMatrix out(lhs.rows(), rhs.cols());
    for (std::size_t row = 0; row < lhs.rows(); ++row) {
        for (std::size_t col = 0; col < rhs.cols(); ++col) {
            double sum = 0.0;
            bool first = true;
            for (std::size_t k : contributions_unchecked(scheme, a, b, row, col)) {
                const double p = lhs(row, k) * rhs(k, col);
                sum = first ? p : sum + p;
                first = false;
            }
            out(row, col) = sum;
        }
    }
    return out;
}

}  // namespace sfhe
