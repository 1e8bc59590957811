// Copyright 2026 The sfhe Authors
// SPDX-License-Identifier: Apache-2.0

#include "sfhe/model_engine.hpp"

#include <algorithm>
#include <random>

#include "sfhe/ckks/modarith.hpp"

namespace sfhe {

namespace {

std::uint64_t splitmix(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

std::uint64_t derive(std::uint64_t tag, std::uint64_t a, std::uint64_t b = 0) {
    return splitmix(splitmix(splitmix(tag) ^ a) ^ b);
}

enum : std::uint64_t { kEncrypt = 1, kMultiply, kRelin, kRotate, kPlain, kRescale };

const ModelCiphertextData &body(const Ciphertext &ct) { return ct.payload_as<ModelCiphertextData>(); }

}  // namespace

ModelEngine::ModelEngine(ModelConfig config) : config_(std::move(config)), id_(next_engine_id()) {
    config_.params.validate();
    if (!(config_.noise_std >= 0.0)) {
        throw Error(ErrorKind::InvalidArgument, "noise_std must be non-negative");
    }
    primes_ = ckks::generate_ntt_primes(config_.params.coeff_modulus_bits,
                                        config_.params.poly_modulus_degree);
}

double ModelEngine::rescale_divisor(int level) const {
    return static_cast<double>(primes_.at(static_cast<std::size_t>(level)));
}

Ciphertext ModelEngine::wrap(std::vector<double> slots, std::uint64_t noise_seed, int level,
                             double scale, int components) const {
    auto data = std::make_shared<ModelCiphertextData>();
    data->slots = std::move(slots);
    data->noise_seed = noise_seed;
    const std::size_t bytes = ciphertext_size_model(static_cast<std::size_t>(components),
                                                    static_cast<std::size_t>(level) + 1,
                                                    config_.params.poly_modulus_degree);
    return Ciphertext(id_, level, scale, components, bytes, std::move(data));
}

void ModelEngine::add_noise(std::vector<double> &slots, std::uint64_t seed) const {
    if (config_.noise_std == 0.0) return;
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> gauss(0.0, config_.noise_std);
    for (double &v : slots) v += gauss(rng);
}

Ciphertext ModelEngine::encrypt(std::span<const double> values) const {
    detail::check_capacity(*this, values.size());
    std::vector<double> slots(slot_count(), 0.0);
    std::copy(values.begin(), values.end(), slots.begin());
    const std::uint64_t counter = encrypt_counter_.fetch_add(1, std::memory_order_relaxed);
    return wrap(std::move(slots), derive(kEncrypt, config_.rng_seed, counter),
                config_.params.max_level(), config_.params.initial_scale, 2);
}

PlainVector ModelEngine::decrypt(const Ciphertext &ct) const {
    detail::check_owner(*this, ct);
    return body(ct).slots;
}

Ciphertext ModelEngine::add(const Ciphertext &a, const Ciphertext &b) const {
    detail::check_add(*this, a, b);
    const auto &x = body(a);
    const auto &y = body(b);
    std::vector<double> out(x.slots.size());
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = x.slots[i] + y.slots[i];
    // Sum keeps the seed independent of accumulation order.
    return wrap(std::move(out), x.noise_seed + y.noise_seed, a.level(), a.scale(),
                std::max(a.size_components(), b.size_components()));
}

Ciphertext ModelEngine::multiply(const Ciphertext &a, const Ciphertext &b) const {
    detail::check_multiply(*this, a, b);
    const auto &x = body(a);
    const auto &y = body(b);
    std::vector<double> out(x.slots.size());
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = x.slots[i] * y.slots[i];
    const std::uint64_t seed = derive(kMultiply, x.noise_seed, y.noise_seed);
    add_noise(out, seed);
    return wrap(std::move(out), seed, a.level(), a.scale() * b.scale(), 3);
}

Ciphertext ModelEngine::multiply_plain(const Ciphertext &a, std::span<const double> mask) const {
    detail::check_multiply_plain(*this, a, mask.size());
    const auto &x = body(a);
    std::vector<double> out(x.slots.size(), 0.0);
    for (std::size_t i = 0; i < mask.size(); ++i) out[i] = x.slots[i] * mask[i];
    return wrap(std::move(out), derive(kPlain, x.noise_seed), a.level(),
                a.scale() * config_.params.initial_scale, 2);
}

Ciphertext ModelEngine::relinearize(const Ciphertext &a) const {
    detail::check_owner(*this, a);
    if (a.size_components() == 2) return a;
    std::vector<double> out = body(a).slots;
    const std::uint64_t seed = derive(kRelin, body(a).noise_seed);
    add_noise(out, seed);
    return wrap(std::move(out), seed, a.level(), a.scale(), 2);
}

Ciphertext ModelEngine::rescale(const Ciphertext &a) const {
    detail::check_rescale(*this, a);
    return wrap(body(a).slots, derive(kRescale, body(a).noise_seed), a.level() - 1,
                a.scale() / rescale_divisor(a.level()), a.size_components());
}

Ciphertext ModelEngine::rotate(const Ciphertext &a, int steps) const {
    detail::check_rotate(*this, a, steps);
    const auto &x = body(a);
    const std::size_t n = x.slots.size();
    const std::size_t shift =
        static_cast<std::size_t>(((steps % static_cast<long long>(n)) + static_cast<long long>(n)) %
                                 static_cast<long long>(n));
    if (shift == 0) return a;
    std::vector<double> out(n);
    for (std::size_t i = 0; i < n; ++i) out[i] = x.slots[(i + shift) % n];
    const std::uint64_t seed = derive(kRotate, x.noise_seed, static_cast<std::uint64_t>(shift));
    add_noise(out, seed);
    return wrap(std::move(out), seed, a.level(), a.scale(), 2);
}

}  // namespace sfhe
