// Copyright 2026 The sfhe Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

#include "sfhe/ckks/ring.hpp"

namespace sfhe::ckks {

/// Canonical-embedding encoder for real slot vectors. Slot j corresponds to
/// evaluation at zeta^(5^j) with zeta = exp(i*pi/N), so the Galois element
/// 5^k rotates slots left by k.
class Encoder {
public:
    explicit Encoder(const RnsContext &ctx);

    std::size_t slot_count() const { return slots_; }

    /// Encodes into the first `data_primes` primes, NTT domain.
    RingPoly encode(std::span<const double> values, double scale, std::size_t data_primes) const;
    /// Accepts either domain; the input is not modified.
    std::vector<double> decode(const RingPoly &poly, double scale) const;

    /// Slot values -> real polynomial coefficients (unscaled, unrounded).
    std::vector<double> embed_inverse(std::span<const double> values) const;
    /// Real polynomial coefficients -> slot values.
    std::vector<double> embed(std::span<const double> coeffs) const;

private:
    void special_fft(std::vector<std::complex<double>> &vals) const;
    void special_fft_inverse(std::vector<std::complex<double>> &vals) const;

    const RnsContext &ctx_;
    std::size_t degree_;
    std::size_t slots_;
    std::vector<std::size_t> rot_group_;
    std::vector<std::complex<double>> ksi_pows_;
};

}  // namespace sfhe::ckks
