// Copyright 2026 The sfhe Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <cstdint>
#include <random>
#include <span>
#include <vector>

#include "sfhe/ckks/modarith.hpp"
#include "sfhe/ckks/ntt.hpp"
#include "sfhe/engine.hpp"

namespace sfhe::ckks {

/// The modulus chain q_0 .. q_{K-1} (data) followed by the special prime P,
/// with NTT tables and the per-level constants rescale, key switching and
/// CRT reconstruction need.
class RnsContext {
public:
    explicit RnsContext(const CkksParams &params);

    std::size_t degree() const { return degree_; }
    std::size_t data_prime_count() const { return data_count_; }
    std::size_t special_index() const { return data_count_; }
    std::size_t prime_count() const { return moduli_.size(); }

    const Modulus &modulus(std::size_t index) const { return moduli_[index]; }
    const NttTables &ntt(std::size_t index) const { return ntt_[index]; }
    const std::vector<u64> &primes() const { return primes_; }

    /// q_last^{-1} mod q_r, for dropping data prime `last` (r < last).
    u64 inv_prime_mod(std::size_t last, std::size_t r) const { return inv_prime_[last][r]; }
    /// P^{-1} mod q_r.
    u64 inv_special_mod(std::size_t r) const { return inv_special_[r]; }
    /// Bit width of the key-switching limbs (that of the special prime).
    int limb_bits() const { return moduli_[data_count_].bit_count(); }
    std::size_t limb_count(std::size_t prime) const;

    /// Reconstructs the centered integer of each coefficient from the first
    /// `prime_count` residues (coefficient domain) and returns it as a double.
    void crt_to_double(std::span<const u64> residues, std::size_t prime_count,
                       std::span<double> out) const;

private:
    std::size_t degree_;
    std::size_t data_count_;
    std::vector<u64> primes_;
    std::vector<Modulus> moduli_;
    std::vector<NttTables> ntt_;
    std::vector<std::vector<u64>> inv_prime_;
    std::vector<u64> inv_special_;
    // garner_inv_[i][j] = q_j^{-1} mod q_i for j < i.
    std::vector<std::vector<u64>> garner_inv_;
    // half_digits_[L][i]: mixed-radix digits of (Q_L - 1) / 2.
    std::vector<std::vector<u64>> half_digits_;
};

/// Polynomial in RNS form. Residue r lives modulo data prime r for r <
/// data_primes, and modulo the special prime for the trailing residue of an
/// extended polynomial.
class RingPoly {
public:
    RingPoly() = default;
    RingPoly(std::size_t degree, std::size_t data_primes, bool extended, bool ntt_form)
        : degree_(degree), data_primes_(data_primes), extended_(extended), ntt_form_(ntt_form),
          data_(degree * (data_primes + (extended ? 1 : 0)), 0) {}

    std::size_t degree() const { return degree_; }
    std::size_t data_primes() const { return data_primes_; }
    bool extended() const { return extended_; }
    bool ntt_form() const { return ntt_form_; }
    void set_ntt_form(bool value) { ntt_form_ = value; }
    std::size_t residue_count() const { return data_primes_ + (extended_ ? 1 : 0); }

    /// Context prime index of residue r.
    std::size_t prime_index(const RnsContext &ctx, std::size_t r) const {
        return r < data_primes_ ? r : ctx.special_index();
    }

    std::span<u64> residue(std::size_t r) { return {data_.data() + r * degree_, degree_}; }
    std::span<const u64> residue(std::size_t r) const { return {data_.data() + r * degree_, degree_}; }
    const std::vector<u64> &words() const { return data_; }

    bool operator==(const RingPoly &) const = default;

private:
    std::size_t degree_ = 0;
    std::size_t data_primes_ = 0;
    bool extended_ = false;
    bool ntt_form_ = false;
    std::vector<u64> data_;
};

void to_ntt(const RnsContext &ctx, RingPoly &poly);
void from_ntt(const RnsContext &ctx, RingPoly &poly);

void add_inplace(const RnsContext &ctx, RingPoly &a, const RingPoly &b);
void sub_inplace(const RnsContext &ctx, RingPoly &a, const RingPoly &b);
void negate_inplace(const RnsContext &ctx, RingPoly &a);
/// Pointwise product; both operands in the NTT domain.
RingPoly multiply(const RnsContext &ctx, const RingPoly &a, const RingPoly &b);
/// a += b * c, pointwise.
void multiply_add_inplace(const RnsContext &ctx, RingPoly &a, const RingPoly &b, const RingPoly &c);

/// Copy keeping only the first `data_primes` residues (and no special residue).
RingPoly truncate(const RingPoly &poly, std::size_t data_primes);

/// Divide by the last data prime with rounding (NTT domain in and out).
RingPoly rescale_by_last(const RnsContext &ctx, const RingPoly &poly);

/// X -> X^galois_elt on an NTT-domain polynomial.
RingPoly apply_galois(const RingPoly &poly, std::span<const std::size_t> permutation);

/// Small signed coefficients into RNS (coefficient domain).
RingPoly from_signed(const RnsContext &ctx, std::span<const std::int64_t> coeffs,
                     std::size_t data_primes, bool extended);

std::vector<std::int64_t> sample_ternary(std::size_t degree, std::mt19937_64 &rng);
/// Centered discrete Gaussian, sigma 3.2, rejected beyond 6 sigma.
std::vector<std::int64_t> sample_gaussian(std::size_t degree, std::mt19937_64 &rng);
/// Uniform residues; valid directly in either domain.
RingPoly sample_uniform(const RnsContext &ctx, std::size_t data_primes, bool extended,
                        std::mt19937_64 &rng);

}  // namespace sfhe::ckks
