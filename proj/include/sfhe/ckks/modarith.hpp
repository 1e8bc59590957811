// Copyright 2026 The sfhe Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

namespace sfhe::ckks {

using u64 = std::uint64_t;
using u128 = unsigned __int128;

/// Word-sized modulus (< 2^61) with its Barrett constant floor(2^128 / q).
class Modulus {
public:
    Modulus() = default;
    explicit Modulus(u64 value);

    u64 value() const { return value_; }
    int bit_count() const { return bit_count_; }

    u64 reduce(u64 x) const {
        // ratio_hi_ == floor(2^64 / q); the estimate is short by at most 2.
        const u64 q = static_cast<u64>((static_cast<u128>(x) * ratio_hi_) >> 64);
        u64 r = x - q * value_;
        if (r >= value_) r -= value_;
        return r >= value_ ? r - value_ : r;
    }

    u64 reduce128(u128 x) const {
        const u64 lo = static_cast<u64>(x);
        const u64 hi = static_cast<u64>(x >> 64);
        // floor(x * ratio / 2^128), dropping the low 128 bits of the product.
        const u64 c1 = static_cast<u64>((static_cast<u128>(lo) * ratio_lo_) >> 64);
        const u128 t = static_cast<u128>(lo) * ratio_hi_ + static_cast<u128>(hi) * ratio_lo_ + c1;
        const u64 quotient = static_cast<u64>(t >> 64) + hi * ratio_hi_;
        u64 r = lo - quotient * value_;
        while (r >= value_) r -= value_;
        return r;
    }

    u64 mul(u64 a, u64 b) const { return reduce128(static_cast<u128>(a) * b); }
    u64 add(u64 a, u64 b) const {
        const u64 s = a + b;
        return s >= value_ ? s - value_ : s;
    }
    u64 sub(u64 a, u64 b) const { return a >= b ? a - b : a + value_ - b; }
    u64 neg(u64 a) const { return a == 0 ? 0 : value_ - a; }
    u64 pow(u64 base, u64 exp) const;
    u64 inverse(u64 a) const;

    /// Reduce a signed integer into [0, q).
    u64 from_signed(std::int64_t x) const {
        if (x >= 0) return reduce(static_cast<u64>(x));
        const u64 r = reduce(static_cast<u64>(-(x + 1)) + 1);
        return neg(r);
    }

private:
    u64 value_ = 0;
    int bit_count_ = 0;
    u64 ratio_hi_ = 0;  // high word of floor(2^128 / q)
    u64 ratio_lo_ = 0;  // low word
};

/// Precomputed operand for Shoup multiplication by a fixed value w.
struct ShoupOperand {
    u64 operand = 0;
    u64 quotient = 0;  // floor(w * 2^64 / q)

    ShoupOperand() = default;
    ShoupOperand(u64 w, u64 q) : operand(w), quotient(static_cast<u64>((static_cast<u128>(w) << 64) / q)) {}
};

/// x * w mod q, result in [0, 2q). Valid for any x < 2^64.
inline u64 mul_shoup_lazy(u64 x, const ShoupOperand &w, u64 q) {
    const u64 hi = static_cast<u64>((static_cast<u128>(x) * w.quotient) >> 64);
    return x * w.operand - hi * q;
}

inline u64 mul_shoup(u64 x, const ShoupOperand &w, u64 q) {
    const u64 r = mul_shoup_lazy(x, w, q);
    return r >= q ? r - q : r;
}

bool is_prime(u64 n);

/// Distinct primes p == 1 (mod 2 * degree), one per entry of `bit_sizes`. For
/// each requested size the largest unused prime below 2^bits is taken, so
/// primes of equal size come out in descending order.
std::vector<u64> generate_ntt_primes(const std::vector<int> &bit_sizes, std::size_t degree);

/// A primitive 2*degree-th root of unity modulo q (the smallest one).
u64 minimal_primitive_root(std::size_t two_degree, const Modulus &q);

}  // namespace sfhe::ckks
