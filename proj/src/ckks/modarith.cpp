// Copyright 2026 The sfhe Authors
// SPDX-License-Identifier: Apache-2.0

#include "sfhe/ckks/modarith.hpp"

#include <algorithm>
#include <bit>
#include <set>
#include <string>

#include "sfhe/engine.hpp"

namespace sfhe::ckks {

Modulus::Modulus(u64 value) : value_(value) {
    if (value < 2 || value >= (u64{1} << 61)) {
        throw Error(ErrorKind::InvalidArgument, "modulus out of range: " + std::to_string(value));
    }
    bit_count_ = std::bit_width(value);
    // q is odd or at least not a power of two dividing 2^128, so this equals floor(2^128 / q).
    const u128 ratio = (~u128{0}) / value;
    ratio_hi_ = static_cast<u64>(ratio >> 64);
    ratio_lo_ = static_cast<u64>(ratio);
}

u64 Modulus::pow(u64 base, u64 exp) const {
    u64 result = 1 % value_;
    base = reduce(base);
    while (exp != 0) {
        if (exp & 1) result = mul(result, base);
        base = mul(base, base);
        exp >>= 1;
    }
    return result;
}

u64 Modulus::inverse(u64 a) const {
    // Extended Euclid on signed 128-bit to stay clear of overflow.
    __int128 t = 0, new_t = 1;
    __int128 r = value_, new_r = reduce(a);
    if (new_r == 0) throw Error(ErrorKind::InvalidArgument, "value has no inverse");
    while (new_r != 0) {
        const __int128 quotient = r / new_r;
        const __int128 tmp_t = t - quotient * new_t;
        t = new_t;
        new_t = tmp_t;
        const __int128 tmp_r = r - quotient * new_r;
        r = new_r;
        new_r = tmp_r;
    }
    if (r != 1) throw Error(ErrorKind::InvalidArgument, "value has no inverse");
    if (t < 0) t += value_;
    return static_cast<u64>(t);
}

namespace {

u64 mulmod(u64 a, u64 b, u64 m) { return static_cast<u64>(static_cast<u128>(a) * b % m); }

u64 powmod(u64 base, u64 exp, u64 m) {
    u64 result = 1;
    base %= m;
    while (exp != 0) {
        if (exp & 1) result = mulmod(result, base, m);
        base = mulmod(base, base, m);
        exp >>= 1;
    }
    return result;
}

}  // namespace

bool is_prime(u64 n) {
    if (n < 2) return false;
    for (u64 p : {2ULL, 3ULL, 5ULL, 7ULL, 11ULL, 13ULL, 17ULL, 19ULL, 23ULL, 29ULL, 31ULL, 37ULL}) {
        if (n % p == 0) return n == p;
    }
    u64 d = n - 1;
    int s = 0;
    while ((d & 1) == 0) {
        d >>= 1;
        ++s;
    }
    // These bases are deterministic for every n < 2^64.
    for (u64 a : {2ULL, 3ULL, 5ULL, 7ULL, 11ULL, 13ULL, 17ULL, 19ULL, 23ULL, 29ULL, 31ULL, 37ULL}) {
        u64 x = powmod(a, d, n);
        if (x == 1 || x == n - 1) continue;
        bool composite = true;
        for (int i = 1; i < s; ++i) {
            x = mulmod(x, x, n);
            if (x == n - 1) {
                composite = false;
                break;
            }
        }
        if (composite) return false;
    }
    return true;
}

std::vector<u64> generate_ntt_primes(const std::vector<int> &bit_sizes, std::size_t degree) {
    const u64 step = 2 * static_cast<u64>(degree);
    std::set<u64> used;
    std::vector<u64> primes;
    primes.reserve(bit_sizes.size());
    for (int bits : bit_sizes) {
        if (bits < 2 || bits > 61) {
            throw Error(ErrorKind::InvalidArgument, "unsupported prime size " + std::to_string(bits));
        }
        const u64 upper = u64{1} << bits;
        const u64 lower = u64{1} << (bits - 1);
        // Largest candidate k * step + 1 below 2^bits.
        u64 candidate = ((upper - 2) / step) * step + 1;
        bool found = false;
        while (candidate > lower) {
            if (!used.contains(candidate) && is_prime(candidate)) {
                found = true;
                break;
            }
            candidate -= step;
        }
        if (!found) {
            throw Error(ErrorKind::InvalidArgument,
                        "not enough " + std::to_string(bits) + "-bit NTT primes for degree " +
                            std::to_string(degree));
        }
        used.insert(candidate);
        primes.push_back(candidate);
    }
    return primes;
}

u64 minimal_primitive_root(std::size_t two_degree, const Modulus &q) {
    const u64 m = two_degree;
    if ((q.value() - 1) % m != 0) {
        throw Error(ErrorKind::InvalidArgument, "modulus is not 1 mod " + std::to_string(m));
    }
    const u64 cofactor = (q.value() - 1) / m;
    u64 root = 0;
    for (u64 x = 2; x < q.value(); ++x) {
        const u64 candidate = q.pow(x, cofactor);
        if (q.pow(candidate, m / 2) == q.value() - 1) {
            root = candidate;
            break;
        }
    }
    if (root == 0) throw Error(ErrorKind::InvalidArgument, "no primitive root found");
    // Smallest among the odd powers, all of which are primitive.
    const u64 square = q.mul(root, root);
    u64 current = root;
    u64 best = root;
    for (u64 i = 0; i < m / 2; ++i) {
        best = std::min(best, current);
        current = q.mul(current, square);
    }
    return best;
}

}  // namespace sfhe::ckks
