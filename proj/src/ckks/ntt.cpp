// Copyright 2026 The sfhe Authors
// SPDX-License-Identifier: Apache-2.0

#include "sfhe/ckks/ntt.hpp"

#include <bit>
#include <string>

#include "sfhe/engine.hpp"

namespace sfhe::ckks {

namespace {

// x mod bound for x < 2 * bound, without a branch.
inline u64 lazy_reduce(u64 x, u64 bound) {
    const u64 y = x - bound;
    return y < x ? y : x;
}

}  // namespace

std::size_t reverse_bits(std::size_t value, int bit_count) {
    std::size_t result = 0;
    for (int i = 0; i < bit_count; ++i) {
        result = (result << 1) | (value & 1);
        value >>= 1;
    }
    return result;
}

NttTables::NttTables(std::size_t degree, const Modulus &modulus)
    : degree_(degree), log_degree_(std::countr_zero(degree)), modulus_(modulus) {
    if (degree < 2 || !std::has_single_bit(degree)) {
        throw Error(ErrorKind::InvalidArgument, "NTT degree must be a power of two >= 2");
    }
    const u64 q = modulus.value();
    root_ = minimal_primitive_root(2 * degree, modulus);
    const u64 inv_root = modulus.inverse(root_);

    root_powers_.resize(degree);
    inv_root_powers_.resize(degree);
    u64 power = 1;
    u64 inv_power = 1;
    for (std::size_t i = 0; i < degree; ++i) {
        const std::size_t slot = reverse_bits(i, log_degree_);
        root_powers_[slot] = ShoupOperand(power, q);
        inv_root_powers_[slot] = ShoupOperand(inv_power, q);
        power = modulus.mul(power, root_);
        inv_power = modulus.mul(inv_power, inv_root);
    }
    inv_degree_ = ShoupOperand(modulus.inverse(degree % q), q);
}

void NttTables::forward(std::span<u64> a) const {
    const u64 q = modulus_.value();
    const u64 two_q = 2 * q;
    const std::size_t n = degree_;
    std::size_t t = n;
    for (std::size_t m = 1; m < n; m <<= 1) {
        t >>= 1;
        for (std::size_t i = 0; i < m; ++i) {
            const ShoupOperand &w = root_powers_[m + i];
            u64 *x = a.data() + 2 * i * t;
            u64 *y = x + t;
            for (std::size_t j = 0; j < t; ++j) {
                const u64 u = lazy_reduce(x[j], two_q);
                const u64 v = mul_shoup_lazy(y[j], w, q);
                x[j] = u + v;
                y[j] = u + two_q - v;
            }
        }
    }
    for (std::size_t j = 0; j < n; ++j) a[j] = lazy_reduce(lazy_reduce(a[j], two_q), q);
}

void NttTables::inverse(std::span<u64> a) const {
    const u64 q = modulus_.value();
    const u64 two_q = 2 * q;
    const std::size_t n = degree_;
    std::size_t t = 1;
    for (std::size_t m = n; m > 1; m >>= 1) {
        const std::size_t h = m >> 1;
        for (std::size_t i = 0; i < h; ++i) {
            const ShoupOperand &w = inv_root_powers_[h + i];
            u64 *x = a.data() + 2 * i * t;
            u64 *y = x + t;
            for (std::size_t j = 0; j < t; ++j) {
                const u64 u = x[j];
                const u64 v = y[j];
                x[j] = lazy_reduce(u + v, two_q);
                y[j] = mul_shoup_lazy(u + two_q - v, w, q);
            }
        }
        t <<= 1;
    }
    for (std::size_t j = 0; j < n; ++j) {
        a[j] = mul_shoup(a[j], inv_degree_, q);
    }
}

std::vector<std::size_t> ntt_galois_permutation(std::size_t degree, std::size_t galois_elt) {
    const int log_n = std::countr_zero(degree);
    const std::size_t two_n = 2 * degree;
    std::vector<std::size_t> perm(degree);
    for (std::size_t i = 0; i < degree; ++i) {
        const std::size_t exponent = 2 * reverse_bits(i, log_n) + 1;
        const std::size_t image = (exponent * galois_elt) % two_n;
        perm[i] = reverse_bits((image - 1) / 2, log_n);
    }
    return perm;
}

}  // namespace sfhe::ckks
