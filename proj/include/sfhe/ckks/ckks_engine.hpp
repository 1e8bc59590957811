// Copyright 2026 The sfhe Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <atomic>
#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <vector>

#include "sfhe/ckks/encoder.hpp"
#include "sfhe/ckks/keys.hpp"
#include "sfhe/ckks/ring.hpp"
#include "sfhe/engine.hpp"

namespace sfhe::ckks {

struct CkksCiphertextData final : CiphertextPayload {
    std::vector<RingPoly> components;  // NTT domain, all on the same data primes
};

struct CkksEngineConfig {
    CkksParams params;
    /// Seeds key generation and encryption randomness. Unset draws from the OS.
    std::optional<std::uint64_t> seed;
};

/// Leveled RNS-CKKS. Fresh ciphertexts sit on every data prime; the last
/// prime of the chain only ever appears during key switching.
class CkksEngine final : public Engine {
public:
    explicit CkksEngine(CkksEngineConfig config);

    std::uint64_t id() const override { return id_; }
    const char *name() const override { return "ckks"; }
    const CkksParams &params() const override { return config_.params; }
    double roundtrip_tolerance() const override { return 1e-5; }

    Ciphertext encrypt(std::span<const double> values) const override;
    PlainVector decrypt(const Ciphertext &ct) const override;
    Ciphertext add(const Ciphertext &a, const Ciphertext &b) const override;
    Ciphertext multiply(const Ciphertext &a, const Ciphertext &b) const override;
    Ciphertext multiply_plain(const Ciphertext &a, std::span<const double> mask) const override;
    Ciphertext relinearize(const Ciphertext &a) const override;
    Ciphertext rescale(const Ciphertext &a) const override;
    Ciphertext rotate(const Ciphertext &a, int steps) const override;
    double rescale_divisor(int level) const override;

    const RnsContext &context() const { return *ctx_; }
    const Encoder &encoder() const { return *encoder_; }
    const KeySet &keys() const { return keys_; }

    /// Decrypts with an arbitrary secret (for key-mismatch checks).
    PlainVector decrypt_with(const Ciphertext &ct, const RingPoly &secret) const;
    /// Rotation through a single Galois automorphism; throws Key if no key.
    Ciphertext rotate_by_element(const Ciphertext &a, std::size_t galois_elt) const;

private:
    Ciphertext wrap(std::vector<RingPoly> components, int level, double scale) const;
    std::shared_ptr<const RingPoly> encoded_plain(std::span<const double> values,
                                                  std::size_t data_primes) const;
    const std::vector<std::size_t> &permutation(std::size_t galois_elt) const;

    CkksEngineConfig config_;
    std::uint64_t id_;
    std::uint64_t seed_;
    std::unique_ptr<RnsContext> ctx_;
    std::unique_ptr<Encoder> encoder_;
    KeySet keys_;
    std::map<std::size_t, std::vector<std::size_t>> permutations_;
    mutable std::atomic<std::uint64_t> encrypt_counter_{0};

    struct PlainCacheEntry {
        std::vector<double> values;
        std::size_t data_primes;
        std::shared_ptr<const RingPoly> poly;
    };
    mutable std::mutex plain_cache_mutex_;
    mutable std::vector<PlainCacheEntry> plain_cache_;
};

}  // namespace sfhe::ckks
