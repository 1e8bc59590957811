// Copyright 2026 The sfhe Authors
// SPDX-License-Identifier: Apache-2.0

#include <random>

#include <catch_amalgamated.hpp>

#include "sfhe/ckks/modarith.hpp"
#include "sfhe/ckks/ntt.hpp"
#include "sfhe/engine.hpp"

using namespace sfhe::ckks;

namespace {

// O(n^2) product in Z_q[X] / (X^n + 1).
std::vector<u64> schoolbook(const std::vector<u64> &a, const std::vector<u64> &b, u64 q) {
    const std::size_t n = a.size();
    std::vector<u64> c(n, 0);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            const u64 prod = static_cast<u64>((static_cast<u128>(a[i]) * b[j]) % q);
            const std::size_t k = (i + j) % n;
            if (i + j < n) {
                c[k] = (c[k] + prod) % q;
            } else {
                c[k] = (c[k] + q - prod) % q;
            }
        }
    }
    return c;
}

std::vector<u64> random_poly(std::size_t n, u64 q, std::mt19937_64 &rng) {
    std::uniform_int_distribution<u64> dist(0, q - 1);
    std::vector<u64> v(n);
    for (auto &x : v) x = dist(rng);
    return v;
}

std::vector<u64> ntt_product(const NttTables &t, std::vector<u64> a, std::vector<u64> b) {
    t.forward(a);
    t.forward(b);
    const Modulus &q = t.modulus();
    for (std::size_t i = 0; i < a.size(); ++i) a[i] = q.mul(a[i], b[i]);
    t.inverse(a);
    return a;
}

}  // namespace

TEST_CASE("modulus arithmetic matches 128-bit reference", "[modarith]") {
    std::mt19937_64 rng(7);
    for (u64 qv : {u64{97}, u64{1099511480321ULL}, u64{1125899906826241ULL}, (u64{1} << 61) - 1}) {
        const Modulus q(qv);
        std::uniform_int_distribution<u64> any;
        for (int trial = 0; trial < 2000; ++trial) {
            const u64 x = any(rng);
            const u64 a = x % qv;
            const u64 b = any(rng) % qv;
            REQUIRE(q.reduce(x) == x % qv);
            const u128 wide = static_cast<u128>(any(rng)) << 64 | any(rng);
            REQUIRE(q.reduce128(wide) == static_cast<u64>(wide % qv));
            REQUIRE(q.mul(a, b) == static_cast<u64>((static_cast<u128>(a) * b) % qv));
            REQUIRE(q.add(a, b) == static_cast<u64>((static_cast<u128>(a) + b) % qv));
            REQUIRE(q.sub(a, b) == static_cast<u64>((static_cast<u128>(a) + qv - b) % qv));
            if (a != 0) REQUIRE(q.mul(a, q.inverse(a)) == 1);
            const ShoupOperand w(b, qv);
            REQUIRE(mul_shoup(x, w, qv) == static_cast<u64>((static_cast<u128>(x) * b) % qv));
        }
    }
}

TEST_CASE("signed reduction handles the int64 extremes", "[modarith]") {
    const Modulus q(1099511480321ULL);
    CHECK(q.from_signed(-1) == q.value() - 1);
    CHECK(q.from_signed(0) == 0);
    const std::int64_t lo = std::numeric_limits<std::int64_t>::min();
    const u64 mag = static_cast<u64>(1) << 63;
    CHECK(q.from_signed(lo) == q.neg(mag % q.value()));
}

TEST_CASE("primality test agrees with trial division", "[modarith]") {
    auto slow = [](u64 n) {
        if (n < 2) return false;
        for (u64 d = 2; d * d <= n; ++d) {
            if (n % d == 0) return false;
        }
        return true;
    };
    for (u64 n = 0; n < 5000; ++n) REQUIRE(is_prime(n) == slow(n));
    CHECK(is_prime(1099511480321ULL));
    CHECK_FALSE(is_prime(1099511480321ULL * 3));
    CHECK(is_prime((u64{1} << 61) - 1));
}

TEST_CASE("generated chain is NTT friendly, distinct and of the requested sizes", "[modarith]") {
    const std::vector<int> bits{50, 40, 40, 40, 40};
    const auto primes = generate_ntt_primes(bits, 8192);
    REQUIRE(primes.size() == bits.size());
    for (std::size_t i = 0; i < primes.size(); ++i) {
        CHECK(is_prime(primes[i]));
        CHECK(primes[i] % (2 * 8192) == 1);
        CHECK(std::bit_width(primes[i]) == bits[i]);
        for (std::size_t j = 0; j < i; ++j) CHECK(primes[i] != primes[j]);
    }
    CHECK(primes == generate_ntt_primes(bits, 8192));
    // Largest below 2^40 first, so the 40-bit primes are descending.
    CHECK(primes[1] > primes[2]);
    CHECK(primes[2] > primes[3]);
}

TEST_CASE("NTT product equals schoolbook negacyclic convolution on a degree-8 ring", "[ntt]") {
    std::mt19937_64 rng(1);
    for (u64 qv : {u64{17}, u64{97}, u64{7681}}) {
        const NttTables t(8, Modulus(qv));
        for (int trial = 0; trial < 200; ++trial) {
            const auto a = random_poly(8, qv, rng);
            const auto b = random_poly(8, qv, rng);
            REQUIRE(ntt_product(t, a, b) == schoolbook(a, b, qv));
        }
    }
}

TEST_CASE("NTT product equals schoolbook at degree 1024 on a chain prime", "[ntt]") {
    std::mt19937_64 rng(2);
    const auto primes = generate_ntt_primes({50, 40}, 1024);
    for (u64 qv : primes) {
        const NttTables t(1024, Modulus(qv));
        const auto a = random_poly(1024, qv, rng);
        const auto b = random_poly(1024, qv, rng);
        REQUIRE(ntt_product(t, a, b) == schoolbook(a, b, qv));
    }
}

TEST_CASE("NTT inverse undoes forward exactly", "[ntt]") {
    std::mt19937_64 rng(3);
    const auto primes = generate_ntt_primes({50, 40, 40}, 8192);
    for (u64 qv : primes) {
        const NttTables t(8192, Modulus(qv));
        const auto a = random_poly(8192, qv, rng);
        auto b = a;
        t.forward(b);
        CHECK(b != a);
        t.inverse(b);
        REQUIRE(b == a);
    }
}

TEST_CASE("NTT of the unit impulse is all ones", "[ntt]") {
    const u64 qv = generate_ntt_primes({40}, 4096).front();
    const NttTables t(4096, Modulus(qv));
    std::vector<u64> delta(4096, 0);
    delta[0] = 1;
    t.forward(delta);
    CHECK(std::all_of(delta.begin(), delta.end(), [](u64 v) { return v == 1; }));
}

TEST_CASE("NTT tables reject degrees that are not powers of two", "[ntt]") {
    CHECK_THROWS_AS(NttTables(12, Modulus(97)), sfhe::Error);
}

TEST_CASE("Galois permutation in the NTT domain matches the coefficient automorphism", "[ntt]") {
    std::mt19937_64 rng(4);
    const std::size_t n = 64;
    const u64 qv = generate_ntt_primes({30}, n).front();
    const NttTables t(n, Modulus(qv));
    for (std::size_t g : {std::size_t{5}, std::size_t{25}, 2 * n - 1, std::size_t{3}}) {
        const auto a = random_poly(n, qv, rng);
        // a(X^g): coefficient i lands on i*g mod 2n, negated past n.
        std::vector<u64> expected(n, 0);
        for (std::size_t i = 0; i < n; ++i) {
            const std::size_t e = (i * g) % (2 * n);
            expected[e % n] = e < n ? a[i] : (qv - a[i]) % qv;
        }
        t.forward(expected);
        auto fa = a;
        t.forward(fa);
        const auto perm = ntt_galois_permutation(n, g);
        std::vector<u64> permuted(n);
        for (std::size_t i = 0; i < n; ++i) permuted[i] = fa[perm[i]];
        REQUIRE(permuted == expected);
    }
}
