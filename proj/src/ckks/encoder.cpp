// Copyright 2026 The sfhe Authors
// SPDX-License-Identifier: Apache-2.0

#include "sfhe/ckks/encoder.hpp"

#include <cmath>
#include <numbers>
#include <string>
#include <utility>

namespace sfhe::ckks {

namespace {

void bit_reverse_permute(std::vector<std::complex<double>> &vals) {
    const std::size_t n = vals.size();
    for (std::size_t i = 1, j = 0; i < n; ++i) {
        std::size_t bit = n >> 1;
        for (; j >= bit; bit >>= 1) j -= bit;
        j += bit;
        if (i < j) std::swap(vals[i], vals[j]);
    }
}

}  // namespace

Encoder::Encoder(const RnsContext &ctx)
    : ctx_(ctx), degree_(ctx.degree()), slots_(ctx.degree() / 2) {
    const std::size_t m = 2 * degree_;
    rot_group_.resize(slots_);
    std::size_t power = 1;
    for (std::size_t j = 0; j < slots_; ++j) {
        rot_group_[j] = power;
        power = (power * 5) % m;
    }
    ksi_pows_.resize(m + 1);
    for (std::size_t j = 0; j <= m; ++j) {
        const double angle = 2.0 * std::numbers::pi * static_cast<double>(j) / static_cast<double>(m);
        ksi_pows_[j] = {std::cos(angle), std::sin(angle)};
    }
}

void Encoder::special_fft(std::vector<std::complex<double>> &vals) const {
    const std::size_t size = vals.size();
    const std::size_t m = 2 * degree_;
    bit_reverse_permute(vals);
    for (std::size_t len = 2; len <= size; len <<= 1) {
        const std::size_t half = len >> 1;
        const std::size_t quarter_mod = len << 2;
        const std::size_t gap = m / quarter_mod;
        for (std::size_t i = 0; i < size; i += len) {
            for (std::size_t j = 0; j < half; ++j) {
                const std::size_t idx = (rot_group_[j] % quarter_mod) * gap;
                const std::complex<double> u = vals[i + j];
                const std::complex<double> v = vals[i + j + half] * ksi_pows_[idx];
                vals[i + j] = u + v;
                vals[i + j + half] = u - v;
            }
        }
    }
}

void Encoder::special_fft_inverse(std::vector<std::complex<double>> &vals) const {
    const std::size_t size = vals.size();
    const std::size_t m = 2 * degree_;
    for (std::size_t len = size; len >= 2; len >>= 1) {
        const std::size_t half = len >> 1;
        const std::size_t quarter_mod = len << 2;
        const std::size_t gap = m / quarter_mod;
        for (std::size_t i = 0; i < size; i += len) {
            for (std::size_t j = 0; j < half; ++j) {
                const std::size_t idx = (quarter_mod - (rot_group_[j] % quarter_mod)) * gap;
                const std::complex<double> u = vals[i + j] + vals[i + j + half];
                const std::complex<double> v = (vals[i + j] - vals[i + j + half]) * ksi_pows_[idx];
                vals[i + j] = u;
                vals[i + j + half] = v;
            }
        }
    }
    bit_reverse_permute(vals);
    const double inv = 1.0 / static_cast<double>(size);
    for (auto &v : vals) v *= inv;
}

std::vector<double> Encoder::embed_inverse(std::span<const double> values) const {
    if (values.size() > slots_) {
        throw Error(ErrorKind::Capacity, "encode input of length " + std::to_string(values.size()) +
                                             " exceeds " + std::to_string(slots_) + " slots");
    }
    std::vector<std::complex<double>> vals(slots_);
    for (std::size_t i = 0; i < values.size(); ++i) vals[i] = values[i];
    special_fft_inverse(vals);
    std::vector<double> coeffs(degree_);
    for (std::size_t i = 0; i < slots_; ++i) {
        coeffs[i] = vals[i].real();
        coeffs[i + slots_] = vals[i].imag();
    }
    return coeffs;
}

std::vector<double> Encoder::embed(std::span<const double> coeffs) const {
    std::vector<std::complex<double>> vals(slots_);
    for (std::size_t i = 0; i < slots_; ++i) vals[i] = {coeffs[i], coeffs[i + slots_]};
    special_fft(vals);
    std::vector<double> out(slots_);
    for (std::size_t i = 0; i < slots_; ++i) out[i] = vals[i].real();
    return out;
}

RingPoly Encoder::encode(std::span<const double> values, double scale, std::size_t data_primes) const {
    const std::vector<double> coeffs = embed_inverse(values);
    // Largest magnitude that is exact in int64 and leaves the chain room to wrap.
    double bound = std::ldexp(1.0, 62);
    double modulus_bits = 0.0;
    for (std::size_t r = 0; r < data_primes; ++r) {
        modulus_bits += std::log2(static_cast<double>(ctx_.modulus(r).value()));
    }
    bound = std::min(bound, std::exp2(modulus_bits - 1.0));

    std::vector<std::int64_t> rounded(degree_);
    for (std::size_t k = 0; k < degree_; ++k) {
        const double v = std::round(coeffs[k] * scale);
        if (!(std::abs(v) < bound)) {
            throw Error(ErrorKind::Precision, "encoded coefficient overflows the modulus chain");
        }
        rounded[k] = static_cast<std::int64_t>(v);
    }
    RingPoly poly = from_signed(ctx_, rounded, data_primes, false);
    to_ntt(ctx_, poly);
    return poly;
}

std::vector<double> Encoder::decode(const RingPoly &poly, double scale) const {
    RingPoly coeff_form = poly;
    from_ntt(ctx_, coeff_form);
    std::vector<double> coeffs(degree_);
    ctx_.crt_to_double(coeff_form.words(), coeff_form.data_primes(), coeffs);
    const double inv_scale = 1.0 / scale;
    for (double &c : coeffs) c *= inv_scale;
    return embed(coeffs);
}

}  // namespace sfhe::ckks
