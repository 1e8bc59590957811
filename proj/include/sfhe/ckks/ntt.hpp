// Copyright 2026 The sfhe Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "sfhe/ckks/modarith.hpp"

namespace sfhe::ckks {

/// Negacyclic number-theoretic transform over Z_q[X]/(X^N + 1).
///
/// Forward output index i holds a(psi^(2 * bitrev(i) + 1)), i.e. evaluations
/// at the odd powers of a primitive 2N-th root psi in bit-reversed order.
/// Pointwise products in this domain are negacyclic convolutions.
class NttTables {
public:
    NttTables(std::size_t degree, const Modulus &modulus);

    std::size_t degree() const { return degree_; }
    const Modulus &modulus() const { return modulus_; }
    u64 root() const { return root_; }
    int log_degree() const { return log_degree_; }

    /// In place; input in [0, q), output in [0, q).
    void forward(std::span<u64> values) const;
    void inverse(std::span<u64> values) const;

private:
    std::size_t degree_;
    int log_degree_;
    Modulus modulus_;
    u64 root_;
    std::vector<ShoupOperand> root_powers_;      // psi^bitrev(i)
    std::vector<ShoupOperand> inv_root_powers_;  // psi^-bitrev(i)
    ShoupOperand inv_degree_;
};

std::size_t reverse_bits(std::size_t value, int bit_count);

/// Index permutation realising X -> X^galois_elt on forward-transformed data:
/// out[i] = in[perm[i]]. Independent of the modulus.
std::vector<std::size_t> ntt_galois_permutation(std::size_t degree, std::size_t galois_elt);

}  // namespace sfhe::ckks
