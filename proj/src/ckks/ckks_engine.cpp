// Copyright 2026 The sfhe Authors
// SPDX-License-Identifier: Apache-2.0

#include "sfhe/ckks/ckks_engine.hpp"

#include <algorithm>
#include <random>

namespace sfhe::ckks {

namespace {

constexpr std::size_t kPlainCacheCapacity = 16;

std::uint64_t entropy_seed() {
    std::random_device rd;
    return (static_cast<std::uint64_t>(rd()) << 32) ^ rd();
}

const CkksCiphertextData &body(const Ciphertext &ct) { return ct.payload_as<CkksCiphertextData>(); }

}  // namespace

CkksEngine::CkksEngine(CkksEngineConfig config)
    : config_(std::move(config)), id_(next_engine_id()),
      seed_(config_.seed.value_or(entropy_seed())) {
    config_.params.validate();
    ctx_ = std::make_unique<RnsContext>(config_.params);
    encoder_ = std::make_unique<Encoder>(*ctx_);
    keys_ = keygen(*ctx_, seed_);
    for (const auto &[elt, key] : keys_.galois_keys) {
        permutations_.emplace(elt, ntt_galois_permutation(ctx_->degree(), elt));
    }
}

Ciphertext CkksEngine::wrap(std::vector<RingPoly> components, int level, double scale) const {
    const int size = static_cast<int>(components.size());
    const std::size_t primes = components.front().data_primes();
    auto data = std::make_shared<CkksCiphertextData>();
    data->components = std::move(components);
    return Ciphertext(id_, level, scale, size,
                      ciphertext_size_model(static_cast<std::size_t>(size), primes, ctx_->degree()),
                      std::move(data));
}

double CkksEngine::rescale_divisor(int level) const {
    return static_cast<double>(ctx_->modulus(static_cast<std::size_t>(level)).value());
}

Ciphertext CkksEngine::encrypt(std::span<const double> values) const {
    detail::check_capacity(*this, values.size());
    const std::size_t data = ctx_->data_prime_count();
    const std::size_t n = ctx_->degree();

    const std::uint64_t counter = encrypt_counter_.fetch_add(1, std::memory_order_relaxed);
    std::seed_seq seq{static_cast<std::uint32_t>(seed_), static_cast<std::uint32_t>(seed_ >> 32),
                      static_cast<std::uint32_t>(counter), static_cast<std::uint32_t>(counter >> 32),
                      0x656e63u};
    std::mt19937_64 rng(seq);

    RingPoly u = from_signed(*ctx_, sample_ternary(n, rng), data, false);
    to_ntt(*ctx_, u);
    RingPoly e0 = from_signed(*ctx_, sample_gaussian(n, rng), data, false);
    RingPoly e1 = from_signed(*ctx_, sample_gaussian(n, rng), data, false);
    to_ntt(*ctx_, e0);
    to_ntt(*ctx_, e1);

    RingPoly c0 = ckks::multiply(*ctx_, keys_.public_key.b, u);
    add_inplace(*ctx_, c0, e0);
    add_inplace(*ctx_, c0, encoder_->encode(values, config_.params.initial_scale, data));
    RingPoly c1 = ckks::multiply(*ctx_, keys_.public_key.a, u);
    add_inplace(*ctx_, c1, e1);

    std::vector<RingPoly> comps;
    comps.push_back(std::move(c0));
    comps.push_back(std::move(c1));
    return wrap(std::move(comps), config_.params.max_level(), config_.params.initial_scale);
}

PlainVector CkksEngine::decrypt_with(const Ciphertext &ct, const RingPoly &secret) const {
    const auto &comps = body(ct).components;
    const std::size_t primes = comps.front().data_primes();
    const RingPoly s = truncate(secret, primes);
    RingPoly m = comps[0];
    RingPoly power = s;
    for (std::size_t i = 1; i < comps.size(); ++i) {
        multiply_add_inplace(*ctx_, m, comps[i], power);
        if (i + 1 < comps.size()) power = ckks::multiply(*ctx_, power, s);
    }
    return encoder_->decode(m, ct.scale());
}

PlainVector CkksEngine::decrypt(const Ciphertext &ct) const {
    detail::check_owner(*this, ct);
    return decrypt_with(ct, keys_.secret);
}

Ciphertext CkksEngine::add(const Ciphertext &a, const Ciphertext &b) const {
    detail::check_add(*this, a, b);
    const auto &x = body(a).components;
    const auto &y = body(b).components;
    const auto &longer = x.size() >= y.size() ? x : y;
    const auto &shorter = x.size() >= y.size() ? y : x;
    std::vector<RingPoly> out = longer;
    for (std::size_t i = 0; i < shorter.size(); ++i) add_inplace(*ctx_, out[i], shorter[i]);
    return wrap(std::move(out), a.level(), a.scale());
}

Ciphertext CkksEngine::multiply(const Ciphertext &a, const Ciphertext &b) const {
    detail::check_multiply(*this, a, b);
    const auto &x = body(a).components;
    const auto &y = body(b).components;
    std::vector<RingPoly> out;
    out.reserve(3);
    out.push_back(ckks::multiply(*ctx_, x[0], y[0]));
    RingPoly middle = ckks::multiply(*ctx_, x[0], y[1]);
    multiply_add_inplace(*ctx_, middle, x[1], y[0]);
    out.push_back(std::move(middle));
    out.push_back(ckks::multiply(*ctx_, x[1], y[1]));
    return wrap(std::move(out), a.level(), a.scale() * b.scale());
}

std::shared_ptr<const RingPoly> CkksEngine::encoded_plain(std::span<const double> values,
                                                          std::size_t data_primes) const {
    {
        std::lock_guard lock(plain_cache_mutex_);
        for (const auto &entry : plain_cache_) {
            if (entry.data_primes == data_primes &&
                std::equal(entry.values.begin(), entry.values.end(), values.begin(), values.end())) {
                return entry.poly;
            }
        }
    }
    auto poly = std::make_shared<const RingPoly>(
        encoder_->encode(values, config_.params.initial_scale, data_primes));
    std::lock_guard lock(plain_cache_mutex_);
    if (plain_cache_.size() >= kPlainCacheCapacity) plain_cache_.erase(plain_cache_.begin());
    plain_cache_.push_back({std::vector<double>(values.begin(), values.end()), data_primes, poly});
    return poly;
}

Ciphertext CkksEngine::multiply_plain(const Ciphertext &a, std::span<const double> mask) const {
    detail::check_multiply_plain(*this, a, mask.size());
    const auto &x = body(a).components;
    const auto plain = encoded_plain(mask, x.front().data_primes());
    std::vector<RingPoly> out;
    out.reserve(x.size());
    for (const auto &c : x) out.push_back(ckks::multiply(*ctx_, c, *plain));
    return wrap(std::move(out), a.level(), a.scale() * config_.params.initial_scale);
}

Ciphertext CkksEngine::relinearize(const Ciphertext &a) const {
    detail::check_owner(*this, a);
    if (a.size_components() == 2) return a;
    const auto &x = body(a).components;
    auto [k0, k1] = key_switch(*ctx_, x[2], keys_.relin_key);
    std::vector<RingPoly> out{x[0], x[1]};
    add_inplace(*ctx_, out[0], k0);
    add_inplace(*ctx_, out[1], k1);
    return wrap(std::move(out), a.level(), a.scale());
}

Ciphertext CkksEngine::rescale(const Ciphertext &a) const {
    detail::check_rescale(*this, a);
    const auto &x = body(a).components;
    std::vector<RingPoly> out;
    out.reserve(x.size());
    for (const auto &c : x) out.push_back(rescale_by_last(*ctx_, c));
    return wrap(std::move(out), a.level() - 1, a.scale() / rescale_divisor(a.level()));
}

const std::vector<std::size_t> &CkksEngine::permutation(std::size_t galois_elt) const {
    auto it = permutations_.find(galois_elt);
    if (it == permutations_.end()) {
        throw Error(ErrorKind::Key, "no Galois key for element " + std::to_string(galois_elt));
    }
    return it->second;
}

Ciphertext CkksEngine::rotate_by_element(const Ciphertext &a, std::size_t galois_elt) const {
    auto key = keys_.galois_keys.find(galois_elt);
    if (key == keys_.galois_keys.end()) {
        throw Error(ErrorKind::Key, "no Galois key for element " + std::to_string(galois_elt));
    }
    const auto &perm = permutation(galois_elt);
    const auto &x = body(a).components;
    RingPoly c0 = apply_galois(x[0], perm);
    const RingPoly c1 = apply_galois(x[1], perm);
    auto [k0, k1] = key_switch(*ctx_, c1, key->second);
    add_inplace(*ctx_, c0, k0);
    std::vector<RingPoly> out;
    out.push_back(std::move(c0));
    out.push_back(std::move(k1));
    return wrap(std::move(out), a.level(), a.scale());
}

Ciphertext CkksEngine::rotate(const Ciphertext &a, int steps) const {
    detail::check_rotate(*this, a, steps);
    const int slots = static_cast<int>(slot_count());
    int normalized = ((steps % slots) + slots) % slots;
    if (normalized > slots / 2) normalized -= slots;
    if (normalized == 0) return a;
    Ciphertext out = a;
    for (int step : rotation_plan(normalized)) {
        out = rotate_by_element(out, rotation_galois_element(ctx_->degree(), step));
    }
    return out;
}

}  // namespace sfhe::ckks
