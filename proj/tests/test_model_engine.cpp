// Copyright 2026 The sfhe Authors
// SPDX-License-Identifier: Apache-2.0

#include <functional>
#include <optional>
#include <random>

#include <catch_amalgamated.hpp>

#include "sfhe/ckks/ckks_engine.hpp"
#include "sfhe/model_engine.hpp"

using namespace sfhe;

namespace {

std::optional<ErrorKind> error_of(const std::function<void()> &f) {
    try {
        f();
    } catch (const Error &e) {
        return e.kind();
    }
    return std::nullopt;
}

Ciphertext depth_two(const Engine &e, const Ciphertext &a, const Ciphertext &b) {
    static constexpr double mask[] = {1.0};
    Ciphertext p = e.rescale(e.relinearize(e.multiply(a, b)));
    return e.rescale(e.relinearize(e.multiply_plain(p, mask)));
}

}  // namespace

TEST_CASE("model round trip is exact with noise off", "[model]") {
    const ModelEngine e(ModelConfig{});
    const std::vector<double> v{1.0, -2.5, 3.25, 1e-300, 1e300};
    const auto d = e.decrypt(e.encrypt(v));
    REQUIRE(d.size() == 4096);
    for (std::size_t i = 0; i < v.size(); ++i) CHECK(d[i] == v[i]);
    for (std::size_t i = v.size(); i < d.size(); ++i) CHECK(d[i] == 0.0);
    CHECK(e.roundtrip_tolerance() == 0.0);
}

TEST_CASE("model bookkeeping mirrors the CKKS engine", "[model]") {
    const ModelEngine m(ModelConfig{});
    const ckks::CkksEngine c(ckks::CkksEngineConfig{CkksParams{}, 3});
    for (int level = 0; level <= 3; ++level) CHECK(m.rescale_divisor(level) == c.rescale_divisor(level));
    const std::vector<double> v{2.0};
    const Ciphertext a = m.encrypt(v);
    const Ciphertext b = c.encrypt(v);
    CHECK(a.level() == b.level());
    CHECK(a.scale() == b.scale());
    CHECK(a.byte_size() == b.byte_size());
    const Ciphertext a2 = depth_two(m, a, a);
    const Ciphertext b2 = depth_two(c, b, b);
    CHECK(a2.level() == b2.level());
    CHECK(a2.scale() == b2.scale());
    CHECK(a2.byte_size() == b2.byte_size());
    CHECK(m.decrypt(a2)[0] == 4.0);
}

TEST_CASE("model slot operations", "[model]") {
    const ModelEngine e(ModelConfig{});
    const Ciphertext x = e.encrypt(std::vector<double>{1.0, 2.0});
    const Ciphertext y = e.encrypt(std::vector<double>{3.0, 4.0});
    CHECK(e.decrypt(e.add(x, y))[1] == 6.0);
    CHECK(e.decrypt(e.multiply(x, y))[1] == 8.0);
    CHECK(e.multiply(x, y).size_components() == 3);
    CHECK(e.multiply(x, y).scale() == x.scale() * y.scale());
    const auto rot = e.decrypt(e.rotate(x, 1));
    CHECK(rot[0] == 2.0);
    CHECK(rot[4095] == 1.0);
    const auto back = e.decrypt(e.rotate(x, -1));
    CHECK(back[1] == 1.0);
    CHECK(back[2] == 2.0);
    CHECK(e.rotate(x, 0).payload() == x.payload());
    const auto masked = e.decrypt(e.multiply_plain(e.encrypt(std::vector<double>{5.0, 7.0}), std::vector<double>{1.0, 0.0}));
    CHECK(masked[0] == 5.0);
    CHECK(masked[1] == 0.0);
}

TEST_CASE("model depth-2 circuit is exact with noise off", "[model]") {
    const ModelEngine e(ModelConfig{});
    const auto d = e.decrypt(depth_two(e, e.encrypt(std::vector<double>{2.0}), e.encrypt(std::vector<double>{3.0})));
    CHECK(d[0] == 6.0);
    for (std::size_t i = 1; i < d.size(); ++i) REQUIRE(d[i] == 0.0);
}

TEST_CASE("model noise at 1e-9 keeps the depth-2 circuit within 1e-3", "[model]") {
    const ModelEngine e(ModelConfig{CkksParams{}, 1e-9, 42});
    std::mt19937_64 rng(5);
    std::normal_distribution<double> gauss(0.0, 1.0);
    double worst = 0.0;
    double total = 0.0;
    for (int trial = 0; trial < 1000; ++trial) {
        const double a = gauss(rng);
        const double b = gauss(rng);
        const double got = e.decrypt(depth_two(e, e.encrypt(std::vector<double>{a}), e.encrypt(std::vector<double>{b})))[0];
        worst = std::max(worst, std::abs(got - a * b));
        total += std::abs(got - a * b);
    }
    CHECK(worst < 1e-3);
    CHECK(total > 0.0);  // noise is really injected
}

TEST_CASE("model noise is reproducible under a seed", "[model]") {
    const ModelEngine e1(ModelConfig{CkksParams{}, 1e-6, 9});
    const ModelEngine e2(ModelConfig{CkksParams{}, 1e-6, 9});
    const std::vector<double> v{1.0, 2.0};
    const auto r1 = e1.decrypt(e1.rotate(e1.relinearize(e1.multiply(e1.encrypt(v), e1.encrypt(v))), 1));
    const auto r2 = e2.decrypt(e2.rotate(e2.relinearize(e2.multiply(e2.encrypt(v), e2.encrypt(v))), 1));
    CHECK(r1 == r2);
    CHECK(r1[0] != 4.0);
}

TEST_CASE("model rejects negative noise", "[model]") {
    CHECK_THROWS_AS(ModelEngine(ModelConfig{CkksParams{}, -1.0, 0}), Error);
}

TEST_CASE("random operation traces raise identical errors on both engines", "[model][ckks]") {
    const ModelEngine model(ModelConfig{});
    const ckks::CkksEngine real(ckks::CkksEngineConfig{CkksParams{}, 77});
    std::mt19937_64 rng(2024);
    std::uniform_real_distribution<double> value(-2.0, 2.0);

    std::vector<std::pair<Ciphertext, Ciphertext>> pool;
    for (int i = 0; i < 3; ++i) {
        std::vector<double> v(4);
        for (double &x : v) x = value(rng);
        pool.emplace_back(model.encrypt(v), real.encrypt(v));
    }
    const std::vector<double> mask{1.0, 0.5};
    std::size_t errors_seen = 0;
    for (int step = 0; step < 150; ++step) {
        const std::size_t i = rng() % pool.size();
        const std::size_t j = rng() % pool.size();
        const int op = static_cast<int>(rng() % 6);
        const int rot = static_cast<int>(rng() % 9) - 4 + (rng() % 10 == 0 ? 4096 : 0);
        auto apply = [&](const Engine &e, const Ciphertext &a, const Ciphertext &b) {
            switch (op) {
            case 0: return e.add(a, b);
            case 1: return e.multiply(a, b);
            case 2: return e.multiply_plain(a, mask);
            case 3: return e.relinearize(a);
            case 4: return e.rescale(a);
            default: return e.rotate(a, rot);
            }
        };
        std::optional<Ciphertext> m_out;
        std::optional<Ciphertext> c_out;
        const auto m_err = error_of([&] { m_out = apply(model, pool[i].first, pool[j].first); });
        const auto c_err = error_of([&] { c_out = apply(real, pool[i].second, pool[j].second); });
        INFO("step " << step << " op " << op);
        REQUIRE(m_err == c_err);
        if (m_err) {
            ++errors_seen;
            continue;
        }
        CHECK(m_out->level() == c_out->level());
        CHECK(m_out->scale() == c_out->scale());
        CHECK(m_out->size_components() == c_out->size_components());
        CHECK(m_out->byte_size() == c_out->byte_size());
        if (pool.size() < 12) {
            pool.emplace_back(*m_out, *c_out);
        } else {
            pool[rng() % pool.size()] = {*m_out, *c_out};
        }
    }
    CHECK(errors_seen > 0);
}
