// Copyright 2026 The sfhe Authors
// SPDX-License-Identifier: Apache-2.0

#include <complex>
#include <numbers>
#include <random>

#include <catch_amalgamated.hpp>

#include "sfhe/ckks/encoder.hpp"
#include "sfhe/ckks/ring.hpp"

using namespace sfhe;
using namespace sfhe::ckks;

namespace {

CkksParams params_with_degree(std::size_t n) {
    CkksParams p;
    p.poly_modulus_degree = n;
    return p;
}

// Slot j holds m(zeta^(5^j)), zeta = exp(i*pi/N), evaluated term by term.
std::vector<double> direct_embed(std::span<const double> coeffs) {
    const std::size_t n = coeffs.size();
    const std::size_t m = 2 * n;
    std::vector<double> slots(n / 2);
    std::size_t power = 1;
    for (std::size_t j = 0; j < n / 2; ++j) {
        std::complex<double> acc = 0.0;
        for (std::size_t k = 0; k < n; ++k) {
            const std::size_t e = (k * power) % m;
            acc += coeffs[k] * std::polar(1.0, std::numbers::pi * static_cast<double>(e) / static_cast<double>(n));
        }
        slots[j] = acc.real();
        power = (power * 5) % m;
    }
    return slots;
}

double max_abs_diff(std::span<const double> a, std::span<const double> b) {
    double worst = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) worst = std::max(worst, std::abs(a[i] - b[i]));
    return worst;
}

}  // namespace

TEST_CASE("embedding matches direct evaluation at the rotation-group roots", "[encoder]") {
    const CkksParams params = params_with_degree(1024);
    const RnsContext ctx(params);
    const Encoder enc(ctx);
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> dist(-1.0, 1.0);
    std::vector<double> coeffs(1024);
    for (double &c : coeffs) c = dist(rng);
    CHECK(max_abs_diff(enc.embed(coeffs), direct_embed(coeffs)) < 1e-9);
}

TEST_CASE("inverse embedding yields coefficients whose evaluation is the input", "[encoder]") {
    const CkksParams params = params_with_degree(1024);
    const RnsContext ctx(params);
    const Encoder enc(ctx);
    std::mt19937_64 rng(12);
    std::uniform_real_distribution<double> dist(-5.0, 5.0);
    std::vector<double> values(512);
    for (double &v : values) v = dist(rng);
    const auto coeffs = enc.embed_inverse(values);
    CHECK(max_abs_diff(direct_embed(coeffs), values) < 1e-9);
}

TEST_CASE("encode then decode is accurate to 2^-20 relative for |v| <= 1000", "[encoder]") {
    const CkksParams params;
    const RnsContext ctx(params);
    const Encoder enc(ctx);
    std::mt19937_64 rng(13);
    std::uniform_real_distribution<double> dist(-1000.0, 1000.0);
    for (std::size_t len : {std::size_t{1}, std::size_t{17}, std::size_t{4096}}) {
        std::vector<double> v(len);
        for (double &x : v) x = dist(rng);
        for (std::size_t primes = 1; primes <= ctx.data_prime_count(); ++primes) {
            const auto d = enc.decode(enc.encode(v, params.initial_scale, primes), params.initial_scale);
            double worst = 0.0;
            double norm = 0.0;
            for (std::size_t i = 0; i < len; ++i) {
                worst = std::max(worst, std::abs(d[i] - v[i]));
                norm = std::max(norm, std::abs(v[i]));
            }
            for (std::size_t i = len; i < d.size(); ++i) worst = std::max(worst, std::abs(d[i]));
            CHECK(worst / norm < std::ldexp(1.0, -20));
        }
    }
}

TEST_CASE("encoding zeros gives the zero polynomial", "[encoder]") {
    const CkksParams params;
    const RnsContext ctx(params);
    const Encoder enc(ctx);
    const std::vector<double> zeros(100, 0.0);
    const RingPoly p = enc.encode(zeros, params.initial_scale, 4);
    CHECK(std::all_of(p.words().begin(), p.words().end(), [](u64 w) { return w == 0; }));
    const RingPoly empty = enc.encode({}, params.initial_scale, 4);
    CHECK(empty == p);
}

TEST_CASE("encoding is linear", "[encoder]") {
    const CkksParams params;
    const RnsContext ctx(params);
    const Encoder enc(ctx);
    const std::vector<double> v{1.5, -2.25, 3.0, 100.0};
    const std::vector<double> w{0.5, 0.25, -7.0, 1e-3};
    RingPoly sum = enc.encode(v, params.initial_scale, 4);
    add_inplace(ctx, sum, enc.encode(w, params.initial_scale, 4));
    const auto d = enc.decode(sum, params.initial_scale);
    for (std::size_t i = 0; i < v.size(); ++i) CHECK(std::abs(d[i] - (v[i] + w[i])) < 1e-8);
}

TEST_CASE("encoder rejects oversized input and coefficient overflow", "[encoder]") {
    const CkksParams params;
    const RnsContext ctx(params);
    const Encoder enc(ctx);
    const std::vector<double> too_long(params.slot_count() + 1, 1.0);
    try {
        (void)enc.encode(too_long, params.initial_scale, 4);
        FAIL("expected a capacity error");
    } catch (const Error &e) {
        CHECK(e.kind() == ErrorKind::Capacity);
    }
    const std::vector<double> huge{1e30};
    try {
        (void)enc.encode(huge, params.initial_scale, 4);
        FAIL("expected a precision error");
    } catch (const Error &e) {
        CHECK(e.kind() == ErrorKind::Precision);
    }
    // Coefficients near 2^55 fit four primes but not the 50-bit base prime alone.
    const std::vector<double> big{1e8};
    CHECK_NOTHROW(enc.encode(big, params.initial_scale, 4));
    CHECK_THROWS_AS(enc.encode(big, params.initial_scale, 1), Error);
}
