// Copyright 2026 The sfhe Authors
// SPDX-License-Identifier: Apache-2.0

#include "sfhe/ckks/keys.hpp"

#include <cstdlib>

namespace sfhe::ckks {

std::uint64_t KeySet::fingerprint() const {
    std::uint64_t h = 1469598103934665603ULL;
    auto mix = [&h](std::uint64_t word) {
        for (int i = 0; i < 8; ++i) {
            h ^= (word >> (8 * i)) & 0xff;
            h *= 1099511628211ULL;
        }
    };
    auto mix_poly = [&](const RingPoly &p) {
        for (u64 w : p.words()) mix(w);
    };
    auto mix_key = [&](const KeySwitchKey &k) {
        for (const auto &d : k.digits) {
            mix(d.prime);
            mix(static_cast<std::uint64_t>(d.shift));
            mix_poly(d.b);
            mix_poly(d.a);
        }
    };
    for (auto c : secret_coeffs) mix(static_cast<std::uint64_t>(c));
    mix_poly(secret);
    mix_poly(public_key.b);
    mix_poly(public_key.a);
    mix_key(relin_key);
    for (const auto &[elt, key] : galois_keys) {
        mix(elt);
        mix_key(key);
    }
    return h;
}

KeySwitchKey make_switch_key(const RnsContext &ctx, const RingPoly &secret, const RingPoly &target,
                             std::mt19937_64 &rng) {
    const std::size_t data = ctx.data_prime_count();
    const std::size_t n = ctx.degree();
    const u64 special = ctx.modulus(ctx.special_index()).value();
    const int width = ctx.limb_bits();

    KeySwitchKey key;
    for (std::size_t prime = 0; prime < data; ++prime) {
        const Modulus &q = ctx.modulus(prime);
        for (std::size_t limb = 0; limb < ctx.limb_count(prime); ++limb) {
            const int shift = static_cast<int>(limb) * width;
            KeySwitchKey::Digit digit;
            digit.prime = prime;
            digit.shift = shift;
            digit.a = sample_uniform(ctx, data, true, rng);
            const auto noise = sample_gaussian(n, rng);
            digit.b = from_signed(ctx, noise, data, true);
            to_ntt(ctx, digit.b);
            sub_inplace(ctx, digit.b, multiply(ctx, digit.a, secret));

            // gadget factor P * 2^shift mod q_prime
            const u64 factor = q.mul(q.reduce(special), q.pow(2, static_cast<u64>(shift)));
            auto dst = digit.b.residue(prime);
            auto src = target.residue(prime);
            for (std::size_t k = 0; k < n; ++k) dst[k] = q.add(dst[k], q.mul(src[k], factor));
            key.digits.push_back(std::move(digit));
        }
    }
    return key;
}

std::size_t rotation_galois_element(std::size_t degree, int steps) {
    const std::size_t m = 2 * degree;
    const std::size_t slots = degree / 2;
    const long long reduced = ((static_cast<long long>(steps) % static_cast<long long>(slots)) +
                               static_cast<long long>(slots)) %
                              static_cast<long long>(slots);
    std::size_t elt = 1;
    for (long long i = 0; i < reduced; ++i) elt = (elt * 5) % m;
    return elt;
}

std::vector<int> rotation_plan(int steps) {
    std::vector<int> plan;
    long long k = steps;
    long long weight = 1;
    while (k != 0) {
        if (k & 1) {
            // Choose +-1 so that the remainder is divisible by 4.
            const long long digit = 2 - (((k % 4) + 4) % 4);
            plan.push_back(static_cast<int>(digit * weight));
            k -= digit;
        }
        k /= 2;
        weight *= 2;
    }
    return plan;
}

KeySet keygen(const RnsContext &ctx, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    const std::size_t data = ctx.data_prime_count();
    const std::size_t n = ctx.degree();

    KeySet keys;
    keys.secret_coeffs = sample_ternary(n, rng);
    keys.secret = from_signed(ctx, keys.secret_coeffs, data, true);
    to_ntt(ctx, keys.secret);

    {
        RingPoly a = sample_uniform(ctx, data, false, rng);
        const auto noise = sample_gaussian(n, rng);
        RingPoly b = from_signed(ctx, noise, data, false);
        to_ntt(ctx, b);
        sub_inplace(ctx, b, multiply(ctx, a, truncate(keys.secret, data)));
        keys.public_key = {std::move(b), std::move(a)};
    }

    keys.relin_key = make_switch_key(ctx, keys.secret, multiply(ctx, keys.secret, keys.secret), rng);

    const std::size_t slots = n / 2;
    for (std::size_t step = 1; step < slots; step <<= 1) {
        for (int sign : {1, -1}) {
            const std::size_t elt = rotation_galois_element(n, sign * static_cast<int>(step));
            if (keys.galois_keys.contains(elt)) continue;
            const auto perm = ntt_galois_permutation(n, elt);
            const RingPoly rotated = apply_galois(keys.secret, perm);
            keys.galois_keys.emplace(elt, make_switch_key(ctx, keys.secret, rotated, rng));
        }
    }
    return keys;
}

std::pair<RingPoly, RingPoly> key_switch(const RnsContext &ctx, const RingPoly &d,
                                         const KeySwitchKey &key) {
    const std::size_t level_primes = d.data_primes();
    const std::size_t n = ctx.degree();
    const std::size_t targets = level_primes + 1;
    const std::size_t special = ctx.special_index();
    const int width = ctx.limb_bits();
    const u64 limb_mask = width >= 64 ? ~u64{0} : ((u64{1} << width) - 1);

    RingPoly coeff_form = d;
    from_ntt(ctx, coeff_form);

    std::vector<u128> acc0(targets * n, 0);
    std::vector<u128> acc1(targets * n, 0);
    std::vector<u64> lifted(n);
    std::vector<std::int64_t> limbs(n);
    const std::int64_t half = std::int64_t{1} << (width - 1);

    for (const auto &digit : key.digits) {
        if (digit.prime >= level_primes) continue;
        const auto source = coeff_form.residue(digit.prime);
        const std::size_t limb_total = ctx.limb_count(digit.prime);
        const bool whole_residue = limb_total == 1;
        const bool top = digit.shift == static_cast<int>(limb_total - 1) * width;

        // Balanced expansion of the centered residue: lower limbs in
        // [-2^(w-1), 2^(w-1)), the top limb takes what is left. Unsigned limbs
        // would carry a 2^(w-1) mean that the all-ones polynomial blows up in
        // the slots next to the root 1.
        std::int64_t offset = 0;
        for (std::size_t m = 0; m + 1 < limb_total; ++m) offset += half << (m * static_cast<std::size_t>(width));
        const u64 qv = ctx.modulus(digit.prime).value();
        for (std::size_t k = 0; k < n; ++k) {
            const auto x = static_cast<std::int64_t>(source[k]);
            const std::int64_t y = (source[k] > qv / 2 ? x - static_cast<std::int64_t>(qv) : x) + offset;
            limbs[k] = top ? y >> digit.shift : ((y >> digit.shift) & static_cast<std::int64_t>(limb_mask)) - half;
        }
        for (std::size_t r = 0; r < targets; ++r) {
            const std::size_t prime = r < level_primes ? r : special;
            // Key residues are laid out over all data primes then P.
            const std::size_t key_r = r < level_primes ? r : ctx.data_prime_count();
            const Modulus &q = ctx.modulus(prime);
            std::span<const u64> operand;
            if (whole_residue && prime == digit.prime) {
                operand = d.residue(r);
            } else {
                for (std::size_t k = 0; k < n; ++k) {
                    lifted[k] = q.from_signed(limbs[k]);
                }
                ctx.ntt(prime).forward(lifted);
                operand = lifted;
            }
            const auto kb = digit.b.residue(key_r);
            const auto ka = digit.a.residue(key_r);
            u128 *out0 = acc0.data() + r * n;
            u128 *out1 = acc1.data() + r * n;
            for (std::size_t k = 0; k < n; ++k) {
                out0[k] += static_cast<u128>(operand[k]) * kb[k];
                out1[k] += static_cast<u128>(operand[k]) * ka[k];
            }
        }
    }

    // Reduce and divide by P with rounding (mod-down).
    const u64 p_value = ctx.modulus(special).value();
    auto mod_down = [&](const std::vector<u128> &acc) {
        RingPoly out(n, level_primes, false, true);
        std::vector<u64> tail(n);
        const Modulus &p = ctx.modulus(special);
        for (std::size_t k = 0; k < n; ++k) tail[k] = p.reduce128(acc[level_primes * n + k]);
        ctx.ntt(special).inverse(tail);
        for (std::size_t r = 0; r < level_primes; ++r) {
            const Modulus &q = ctx.modulus(r);
            for (std::size_t k = 0; k < n; ++k) {
                const u64 v = tail[k];
                lifted[k] = v > (p_value >> 1) ? q.neg(q.reduce(p_value - v)) : q.reduce(v);
            }
            ctx.ntt(r).forward(lifted);
            const u64 inv = ctx.inv_special_mod(r);
            auto z = out.residue(r);
            const u128 *a = acc.data() + r * n;
            for (std::size_t k = 0; k < n; ++k) {
                z[k] = q.mul(q.sub(q.reduce128(a[k]), lifted[k]), inv);
            }
        }
        return out;
    };
    return {mod_down(acc0), mod_down(acc1)};
}

}  // namespace sfhe::ckks
