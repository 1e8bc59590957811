// Copyright 2026 The sfhe Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <string_view>
#include <vector>

#include "sfhe/encrypted_matrix.hpp"
#include "sfhe/engine.hpp"
#include "sfhe/executor.hpp"

namespace sfhe {

enum class SchemeId { NaiveDense, NaiveSparse, Csr, Ellpack };

inline constexpr std::array<SchemeId, 4> kAllSchemes{SchemeId::NaiveDense, SchemeId::NaiveSparse,
                                                     SchemeId::Csr, SchemeId::Ellpack};
inline constexpr std::array<SchemeId, 3> kSparseSchemes{SchemeId::NaiveSparse, SchemeId::Csr,
                                                        SchemeId::Ellpack};

/// Short names: "dense", "naive", "csr", "ellpack".
std::string_view scheme_name(SchemeId scheme);
/// Inverse of scheme_name; throws InvalidArgument for anything else.
SchemeId parse_scheme(std::string_view name);
/// Operand layout each scheme consumes.
Layout scheme_layout(SchemeId scheme);

/// The k indices whose products are summed into result element (row, col),
/// ascending. Throws LayoutMismatch when either operand does not carry the
/// scheme's metadata, Shape when the inner dimensions differ.
std::vector<std::size_t> contributions_for(SchemeId scheme, const SparsityMetadata &lhs,
                                           const SparsityMetadata &rhs, std::size_t row,
                                           std::size_t col);

/// One result element: for each k, bring lhs(row, k) and rhs(k, col) to slot
/// zero, multiply, keep slot zero only, move it to `result_slot` and sum.
/// Returns nullopt when `contributions` is empty.
std::optional<Ciphertext> compute_element(const EncryptedMatrix &lhs, const EncryptedMatrix &rhs,
                                          std::size_t row, std::size_t col,
                                          const std::vector<std::size_t> &contributions,
                                          std::size_t result_slot, const Engine &engine);

struct MatmulOptions {
    std::size_t threads = 1;     // 0: hardware concurrency
    std::size_t chunk_size = 0;  // result chunk size; 0: that of lhs
};

struct MatmulResult {
    EncryptedMatrix product;
    ExecStats stats;
};

/// Encrypted product in the Dense layout. Result chunks that receive no
/// contribution stay plaintext zeros.
MatmulResult matmul(const EncryptedMatrix &lhs, const EncryptedMatrix &rhs, SchemeId scheme,
                    const Engine &engine, const MatmulOptions &options = {});

struct OpCounts {
    std::size_t rotations = 0;
    std::size_t ct_multiplies = 0;
    std::size_t plain_multiplies = 0;
    std::size_t relinearizations = 0;
    std::size_t rescales = 0;
    std::size_t adds = 0;

    std::size_t total() const {
        return rotations + ct_multiplies + plain_multiplies + relinearizations + rescales + adds;
    }
    friend bool operator==(const OpCounts &, const OpCounts &) = default;
};

/// Engine calls matmul will issue (rotate and relinearize counted per call,
/// including the identity ones).
OpCounts homomorphic_op_count(SchemeId scheme, const SparsityMetadata &lhs,
                              const SparsityMetadata &rhs, std::size_t result_chunk_size);

/// The scheme's loop run on plaintext doubles, same accumulation order.
PlainMatrix plaintext_matmul(SchemeId scheme, const PlainMatrix &lhs, const PlainMatrix &rhs);

}  // namespace sfhe
