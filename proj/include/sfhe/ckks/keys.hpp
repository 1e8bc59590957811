// Copyright 2026 The sfhe Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <utility>
#include <vector>

#include "sfhe/ckks/ring.hpp"

namespace sfhe::ckks {

/// Key-switching key over the extended basis (all data primes plus P).
///
/// The input is decomposed per RNS residue; a residue wider than the special
/// prime is further split into limbs of limb_bits() bits. Digits are taken
/// balanced, so each one is below 2^(limb_bits - 1) in magnitude.
struct KeySwitchKey {
    struct Digit {
        std::size_t prime = 0;  // residue the digit is taken from
        int shift = 0;          // bit offset of the limb inside that residue
        RingPoly b;             // -a*s + e + P * 2^shift * s'  (s' term in residue `prime` only)
        RingPoly a;
    };
    std::vector<Digit> digits;
};

struct PublicKey {
    RingPoly b;  // -a*s + e
    RingPoly a;
};

struct KeySet {
    std::vector<std::int64_t> secret_coeffs;  // ternary
    RingPoly secret;                          // NTT domain, extended basis
    PublicKey public_key;
    KeySwitchKey relin_key;
    std::map<std::size_t, KeySwitchKey> galois_keys;  // by Galois element

    /// FNV-1a over every key word, for reproducibility checks.
    std::uint64_t fingerprint() const;
};

KeySwitchKey make_switch_key(const RnsContext &ctx, const RingPoly &secret, const RingPoly &target,
                             std::mt19937_64 &rng);

/// Secret, public and relinearization keys plus Galois keys for rotations by
/// every +-2^k below the slot count.
KeySet keygen(const RnsContext &ctx, std::uint64_t seed);

/// Galois element for a left rotation by `steps` slots (negative: right).
std::size_t rotation_galois_element(std::size_t degree, int steps);

/// Signed power-of-two decomposition (non-adjacent form) of a rotation.
std::vector<int> rotation_plan(int steps);

/// Re-expresses the term d * s' as a pair (c0, c1) with c0 + c1 * s ~= d * s'.
/// `d` is in the NTT domain on the first L data primes; so is the result.
std::pair<RingPoly, RingPoly> key_switch(const RnsContext &ctx, const RingPoly &d,
                                         const KeySwitchKey &key);

}  // namespace sfhe::ckks
