// Copyright 2026 The sfhe Authors
// SPDX-License-Identifier: Apache-2.0

#include "sfhe/ckks/ring.hpp"

#include <cmath>

namespace sfhe::ckks {

namespace {

constexpr double kErrorStd = 3.2;
constexpr double kErrorBound = 6.0 * kErrorStd;

// Residue of the centered representative of v mod `from`, reduced mod `to`.
inline u64 centered_lift(u64 v, u64 from, const Modulus &to) {
    if (v > (from >> 1)) {
        return to.neg(to.reduce(from - v));
    }
    return to.reduce(v);
}

}  // namespace

RnsContext::RnsContext(const CkksParams &params)
    : degree_(params.poly_modulus_degree), data_count_(params.data_prime_count()) {
    params.validate();
    primes_ = generate_ntt_primes(params.coeff_modulus_bits, degree_);
    moduli_.reserve(primes_.size());
    ntt_.reserve(primes_.size());
    for (u64 p : primes_) {
        moduli_.emplace_back(p);
        ntt_.emplace_back(degree_, moduli_.back());
    }

    inv_prime_.resize(data_count_);
    for (std::size_t last = 0; last < data_count_; ++last) {
        inv_prime_[last].resize(last);
        for (std::size_t r = 0; r < last; ++r) {
            inv_prime_[last][r] = moduli_[r].inverse(moduli_[r].reduce(primes_[last]));
        }
    }
    inv_special_.resize(data_count_);
    for (std::size_t r = 0; r < data_count_; ++r) {
        inv_special_[r] = moduli_[r].inverse(moduli_[r].reduce(primes_[data_count_]));
    }

    garner_inv_.resize(data_count_);
    for (std::size_t i = 0; i < data_count_; ++i) {
        garner_inv_[i].resize(i);
        for (std::size_t j = 0; j < i; ++j) {
            garner_inv_[i][j] = moduli_[i].inverse(moduli_[i].reduce(primes_[j]));
        }
    }

    half_digits_.resize(data_count_ + 1);
    for (std::size_t count = 1; count <= data_count_; ++count) {
        std::vector<u64> digits(count);
        u64 carry = 0;
        for (std::size_t i = count; i-- > 0;) {
            const u64 current = (primes_[i] - 1) + carry * primes_[i];
            digits[i] = current / 2;
            carry = current % 2;
        }
        half_digits_[count] = std::move(digits);
    }
}

std::size_t RnsContext::limb_count(std::size_t prime) const {
    const int bits = moduli_[prime].bit_count();
    const int width = limb_bits();
    return static_cast<std::size_t>((bits + width - 1) / width);
}

void RnsContext::crt_to_double(std::span<const u64> residues, std::size_t prime_count,
                               std::span<double> out) const {
    const std::size_t n = degree_;
    std::vector<u64> digits(prime_count);
    const std::vector<u64> &half = half_digits_[prime_count];
    for (std::size_t k = 0; k < n; ++k) {
        for (std::size_t i = 0; i < prime_count; ++i) {
            const Modulus &qi = moduli_[i];
            u64 t = residues[i * n + k];
            for (std::size_t j = 0; j < i; ++j) {
                t = qi.mul(qi.sub(t, qi.reduce(digits[j])), garner_inv_[i][j]);
            }
            digits[i] = t;
        }
        bool negative = false;
        for (std::size_t i = prime_count; i-- > 0;) {
            if (digits[i] != half[i]) {
                negative = digits[i] > half[i];
                break;
            }
        }
        double value = 0.0;
        if (negative) {
            // Q - x == (Q - 1 - x) + 1, digit-wise without borrows.
            for (std::size_t i = prime_count; i-- > 0;) {
                value = value * static_cast<double>(primes_[i]) +
                        static_cast<double>(primes_[i] - 1 - digits[i]);
            }
            out[k] = -(value + 1.0);
        } else {
            for (std::size_t i = prime_count; i-- > 0;) {
                value = value * static_cast<double>(primes_[i]) + static_cast<double>(digits[i]);
            }
            out[k] = value;
        }
    }
}

void to_ntt(const RnsContext &ctx, RingPoly &poly) {
    if (poly.ntt_form()) return;
    for (std::size_t r = 0; r < poly.residue_count(); ++r) {
        ctx.ntt(poly.prime_index(ctx, r)).forward(poly.residue(r));
    }
    poly.set_ntt_form(true);
}

void from_ntt(const RnsContext &ctx, RingPoly &poly) {
    if (!poly.ntt_form()) return;
    for (std::size_t r = 0; r < poly.residue_count(); ++r) {
        ctx.ntt(poly.prime_index(ctx, r)).inverse(poly.residue(r));
    }
    poly.set_ntt_form(false);
}

void add_inplace(const RnsContext &ctx, RingPoly &a, const RingPoly &b) {
    for (std::size_t r = 0; r < a.residue_count(); ++r) {
        const u64 q = ctx.modulus(a.prime_index(ctx, r)).value();
        auto x = a.residue(r);
        auto y = b.residue(r);
        for (std::size_t k = 0; k < x.size(); ++k) {
            const u64 s = x[k] + y[k];
            x[k] = s >= q ? s - q : s;
        }
    }
}

void sub_inplace(const RnsContext &ctx, RingPoly &a, const RingPoly &b) {
    for (std::size_t r = 0; r < a.residue_count(); ++r) {
        const u64 q = ctx.modulus(a.prime_index(ctx, r)).value();
        auto x = a.residue(r);
        auto y = b.residue(r);
        for (std::size_t k = 0; k < x.size(); ++k) {
            x[k] = x[k] >= y[k] ? x[k] - y[k] : x[k] + q - y[k];
        }
    }
}

void negate_inplace(const RnsContext &ctx, RingPoly &a) {
    for (std::size_t r = 0; r < a.residue_count(); ++r) {
        const u64 q = ctx.modulus(a.prime_index(ctx, r)).value();
        for (u64 &v : a.residue(r)) v = v == 0 ? 0 : q - v;
    }
}

RingPoly multiply(const RnsContext &ctx, const RingPoly &a, const RingPoly &b) {
    RingPoly out(a.degree(), a.data_primes(), a.extended(), true);
    for (std::size_t r = 0; r < a.residue_count(); ++r) {
        const Modulus &q = ctx.modulus(a.prime_index(ctx, r));
        auto x = a.residue(r);
        auto y = b.residue(r);
        auto z = out.residue(r);
        for (std::size_t k = 0; k < z.size(); ++k) z[k] = q.mul(x[k], y[k]);
    }
    return out;
}

void multiply_add_inplace(const RnsContext &ctx, RingPoly &a, const RingPoly &b, const RingPoly &c) {
    for (std::size_t r = 0; r < a.residue_count(); ++r) {
        const Modulus &q = ctx.modulus(a.prime_index(ctx, r));
        auto x = a.residue(r);
        auto y = b.residue(r);
        auto z = c.residue(r);
        for (std::size_t k = 0; k < x.size(); ++k) x[k] = q.add(x[k], q.mul(y[k], z[k]));
    }
}

RingPoly truncate(const RingPoly &poly, std::size_t data_primes) {
    RingPoly out(poly.degree(), data_primes, false, poly.ntt_form());
    for (std::size_t r = 0; r < data_primes; ++r) {
        auto src = poly.residue(r);
        std::copy(src.begin(), src.end(), out.residue(r).begin());
    }
    return out;
}

RingPoly rescale_by_last(const RnsContext &ctx, const RingPoly &poly) {
    const std::size_t count = poly.data_primes();
    const std::size_t last = count - 1;
    const std::size_t n = poly.degree();
    std::vector<u64> dropped(poly.residue(last).begin(), poly.residue(last).end());
    ctx.ntt(last).inverse(dropped);
    const u64 q_last = ctx.modulus(last).value();

    RingPoly out = truncate(poly, last);
    std::vector<u64> lifted(n);
    for (std::size_t r = 0; r < last; ++r) {
        const Modulus &q = ctx.modulus(r);
        for (std::size_t k = 0; k < n; ++k) lifted[k] = centered_lift(dropped[k], q_last, q);
        ctx.ntt(r).forward(lifted);
        const u64 inv = ctx.inv_prime_mod(last, r);
        auto z = out.residue(r);
        for (std::size_t k = 0; k < n; ++k) z[k] = q.mul(q.sub(z[k], lifted[k]), inv);
    }
    return out;
}

RingPoly apply_galois(const RingPoly &poly, std::span<const std::size_t> permutation) {
    RingPoly out(poly.degree(), poly.data_primes(), poly.extended(), poly.ntt_form());
    for (std::size_t r = 0; r < poly.residue_count(); ++r) {
        auto src = poly.residue(r);
        auto dst = out.residue(r);
        for (std::size_t k = 0; k < dst.size(); ++k) dst[k] = src[permutation[k]];
    }
    return out;
}

RingPoly from_signed(const RnsContext &ctx, std::span<const std::int64_t> coeffs,
                     std::size_t data_primes, bool extended) {
    RingPoly out(ctx.degree(), data_primes, extended, false);
    for (std::size_t r = 0; r < out.residue_count(); ++r) {
        const Modulus &q = ctx.modulus(out.prime_index(ctx, r));
        auto z = out.residue(r);
        for (std::size_t k = 0; k < z.size(); ++k) z[k] = q.from_signed(coeffs[k]);
    }
    return out;
}

std::vector<std::int64_t> sample_ternary(std::size_t degree, std::mt19937_64 &rng) {
    std::uniform_int_distribution<int> dist(-1, 1);
    std::vector<std::int64_t> out(degree);
    for (auto &v : out) v = dist(rng);
    return out;
}

std::vector<std::int64_t> sample_gaussian(std::size_t degree, std::mt19937_64 &rng) {
    std::normal_distribution<double> dist(0.0, kErrorStd);
    std::vector<std::int64_t> out(degree);
    for (auto &v : out) {
        double x = 0.0;
        do {
            x = dist(rng);
        } while (std::abs(x) > kErrorBound);
        v = static_cast<std::int64_t>(std::llround(x));
    }
    return out;
}

RingPoly sample_uniform(const RnsContext &ctx, std::size_t data_primes, bool extended,
                        std::mt19937_64 &rng) {
    RingPoly out(ctx.degree(), data_primes, extended, true);
    for (std::size_t r = 0; r < out.residue_count(); ++r) {
        std::uniform_int_distribution<u64> dist(0, ctx.modulus(out.prime_index(ctx, r)).value() - 1);
        for (u64 &v : out.residue(r)) v = dist(rng);
    }
    return out;
}

}  // namespace sfhe::ckks
