// Copyright 2026 The sfhe Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <atomic>
#include <cstdint>
#include <vector>

#include "sfhe/engine.hpp"

namespace sfhe {

struct ModelConfig {
    CkksParams params;
    /// Standard deviation of the Gaussian slot noise added after multiply,
    /// relinearize and rotate. Zero disables noise entirely.
    double noise_std = 0.0;
    std::uint64_t rng_seed = 0;
};

struct ModelCiphertextData final : CiphertextPayload {
    std::vector<double> slots;  // always slot_count long
    std::uint64_t noise_seed = 0;
};

/// Transparent engine over plain double slots. Levels, scales, component
/// counts and byte sizes follow the CKKS engine exactly, so it can stand in
/// for it wherever only values and bookkeeping matter.
class ModelEngine final : public Engine {
public:
    explicit ModelEngine(ModelConfig config);

    std::uint64_t id() const override { return id_; }
    const char *name() const override { return "model"; }
    const CkksParams &params() const override { return config_.params; }
    double roundtrip_tolerance() const override { return config_.noise_std > 0.0 ? 1e-5 : 0.0; }

    Ciphertext encrypt(std::span<const double> values) const override;
    PlainVector decrypt(const Ciphertext &ct) const override;
    Ciphertext add(const Ciphertext &a, const Ciphertext &b) const override;
    Ciphertext multiply(const Ciphertext &a, const Ciphertext &b) const override;
    Ciphertext multiply_plain(const Ciphertext &a, std::span<const double> mask) const override;
    Ciphertext relinearize(const Ciphertext &a) const override;
    Ciphertext rescale(const Ciphertext &a) const override;
    Ciphertext rotate(const Ciphertext &a, int steps) const override;
    double rescale_divisor(int level) const override;

    const ModelConfig &config() const { return config_; }

private:
    Ciphertext wrap(std::vector<double> slots, std::uint64_t noise_seed, int level, double scale,
                    int components) const;
    void add_noise(std::vector<double> &slots, std::uint64_t seed) const;

    ModelConfig config_;
    std::uint64_t id_;
    std::vector<std::uint64_t> primes_;
    mutable std::atomic<std::uint64_t> encrypt_counter_{0};
};

}  // namespace sfhe
