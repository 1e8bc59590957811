// Copyright 2026 The sfhe Authors
// SPDX-License-Identifier: Apache-2.0

#include <filesystem>
#include <fstream>
#include <random>

#include <catch_amalgamated.hpp>

#include "sfhe/bench.hpp"
#include "sfhe/matrix_io.hpp"

using namespace sfhe;

namespace {

std::size_t zeros_in(const PlainMatrix &m) {
    return static_cast<std::size_t>(std::count(m.data().begin(), m.data().end(), 0.0));
}

std::filesystem::path scratch(const std::string &name) {
    const auto dir = std::filesystem::temp_directory_path() / "sfhe_tests";
    std::filesystem::create_directories(dir);
    return dir / name;
}

std::string slurp(const std::filesystem::path &p) {
    std::ifstream in(p, std::ios::binary);
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

BenchRecord sample_record() {
    BenchRecord r;
    r.scheme = SchemeId::Ellpack;
    r.rows = 3;
    r.inner = 5;
    r.cols = 2;
    r.sparsity = 0.3;
    r.threads = 4;
    r.chunk_size = 2;
    r.engine = "ckks";
    r.repeat = 1;
    r.runtime_s = 0.1 + 0.2;
    r.ct_bytes = 123456789;
    r.meta_bytes = 77;
    r.mean_err = 1.0 / 3.0 * 1e-7;
    r.max_err = 2.5e-7;
    r.pass = true;
    r.ops = OpCounts{3, 1, 1, 2, 2, 0};
    r.contended_writes = 5;
    r.sync_bytes = 120;
    return r;
}

}  // namespace

TEST_CASE("zero counts are floor(s * n^2)", "[bench]") {
    CHECK(zero_count(64, 0.5) == 32);
    CHECK(zero_count(64, 0.0) == 0);
    CHECK(zero_count(64, 1.0) == 64);
    CHECK(zero_count(100, 0.3) == 30);
    CHECK(zero_count(100, 0.7) == 70);
    CHECK(zero_count(9, 0.5) == 4);
    for (int tenths = 0; tenths <= 10; ++tenths) {
        const double s = tenths / 10.0;
        CHECK(zero_count(100, s) == static_cast<std::size_t>(tenths * 10));
    }
    const auto [a, b] = generate_operands(8, 0.5, 0);
    CHECK(zeros_in(a) == 32);
    CHECK(zeros_in(b) == 32);
}

TEST_CASE("operand generation is deterministic and nests across sparsity", "[bench][property]") {
    for (std::uint64_t seed : {0ULL, 1ULL, 0xdeadbeefcafeULL}) {
        const auto [a0, b0] = generate_operands(9, 0.0, seed);
        CHECK(zeros_in(a0) == 0);
        CHECK(a0 != b0);
        PlainMatrix prev = a0;
        for (int tenths = 1; tenths <= 10; ++tenths) {
            const auto [a, b] = generate_operands(9, tenths / 10.0, seed);
            REQUIRE(a == generate_operands(9, tenths / 10.0, seed).first);
            CHECK(zeros_in(a) == zero_count(81, tenths / 10.0));
            for (std::size_t e = 0; e < a.data().size(); ++e) {
                // Values survive unchanged or become zero; zeros never come back.
                REQUIRE((a.data()[e] == a0.data()[e] || a.data()[e] == 0.0));
                if (prev.data()[e] == 0.0) REQUIRE(a.data()[e] == 0.0);
            }
            prev = a;
        }
    }
    CHECK(generate_operands(4, 0.0, 1).first != generate_operands(4, 0.0, 2).first);
}

TEST_CASE("generated values look standard normal", "[bench]") {
    const PlainMatrix m = generate_matrix(100, 100, 0.0, 3, 0);
    double sum = 0.0;
    double sq = 0.0;
    for (double v : m.data()) {
        sum += v;
        sq += v * v;
    }
    const double mean = sum / 1e4;
    CHECK(std::abs(mean) < 0.05);
    CHECK(std::abs(sq / 1e4 - mean * mean - 1.0) < 0.05);
}

TEST_CASE("plaintext oracles agree with a naive triple loop", "[bench]") {
    std::mt19937_64 rng(17);
    for (int trial = 0; trial < 20; ++trial) {
        const std::size_t r = 1 + rng() % 9;
        const std::size_t k = 1 + rng() % 9;
        const std::size_t q = 1 + rng() % 9;
        const PlainMatrix a = generate_matrix(r, k, 0.4, rng(), 0);
        const PlainMatrix b = generate_matrix(k, q, 0.4, rng(), 1);
        const PlaintextOracles o = plaintext_oracles(a, b);
        for (std::size_t i = 0; i < r; ++i) {
            for (std::size_t j = 0; j < q; ++j) {
                double s = 0.0;
                for (std::size_t t = 0; t < k; ++t) s += a(i, t) * b(t, j);
                REQUIRE(std::abs(o.dense(i, j) - s) < 1e-12);
            }
        }
        CHECK(o.schemes.size() == 4);
    }
    CHECK_THROWS_AS(plaintext_oracles(PlainMatrix(2, 3), PlainMatrix(2, 3)), Error);
}

TEST_CASE("one record gives a header and one data line", "[bench]") {
    const std::string csv = to_csv({sample_record()});
    CHECK(std::count(csv.begin(), csv.end(), '\n') == 2);
    CHECK(csv.rfind(kCsvHeader, 0) == 0);
    const std::string row = csv_row(sample_record());
    CHECK(row.rfind("ellpack,3x5x2,0.3,4,2,ckks,1,0.30000000000000004,123456789,77,", 0) == 0);
    CHECK(row.ends_with(",2.4999999999999999e-07,true"));
    BenchRecord square = sample_record();
    square.rows = square.inner = square.cols = 8;
    CHECK(square.size_label() == "8");
}

TEST_CASE("json records round trip", "[bench]") {
    const BenchRecord r = sample_record();
    const nlohmann::json j = nlohmann::json::parse(to_json(r).dump());
    const BenchRecord back = record_from_json(j);
    CHECK(csv_row(back) == csv_row(r));
    CHECK(back.ops == r.ops);
    CHECK(back.runtime_s == r.runtime_s);
    CHECK(back.mean_err == r.mean_err);
    CHECK(back.contended_writes == 5);
    CHECK(back.sync_bytes == 120);
}

TEST_CASE("emit_report writes both files and reports failures", "[bench]") {
    BenchConfig cfg;
    const auto stem = scratch("report").string();
    emit_report({sample_record()}, cfg, stem);
    CHECK(slurp(stem + ".csv") == to_csv({sample_record()}));
    const auto j = nlohmann::json::parse(slurp(stem + ".json"));
    CHECK(j.at("records").size() == 1);
    CHECK(j.at("config").at("engine") == "model");
    CHECK(j.at("config").at("coeff_modulus_bits") == std::vector<int>{50, 40, 40, 40, 40});
    CHECK(j.at("environment").contains("hardware_concurrency"));
    try {
        emit_report({sample_record()}, cfg, "/nonexistent-dir/x/report");
        FAIL("expected an io error");
    } catch (const Error &e) {
        CHECK(e.kind() == ErrorKind::Io);
    }
    CHECK_THROWS_AS(emit_report({}, cfg, stem), Error);
}

TEST_CASE("config validation", "[bench]") {
    BenchConfig cfg;
    CHECK_NOTHROW(cfg.validate());
    cfg.sparsities = {1.5};
    CHECK_THROWS_AS(cfg.validate(), Error);
    cfg = BenchConfig{};
    cfg.repeats = 0;
    CHECK_THROWS_AS(cfg.validate(), Error);
    cfg = BenchConfig{};
    cfg.schemes.clear();
    CHECK_THROWS_AS(cfg.validate(), Error);
    CHECK(parse_engine_kind("ckks") == EngineKind::Ckks);
    CHECK_THROWS_AS(parse_engine_kind("seal"), Error);
}

TEST_CASE("median", "[bench]") {
    CHECK(median({3.0, 1.0, 2.0}) == 2.0);
    CHECK(median({4.0, 1.0, 2.0, 3.0}) == 2.5);
    CHECK(median({}) == 0.0);
}

TEST_CASE("small model suite passes and is ordered", "[bench]") {
    BenchConfig cfg;
    cfg.sizes = {3, 4};
    cfg.sparsities = {0.0, 0.5, 1.0};
    cfg.thread_counts = {1, 2};
    cfg.repeats = 2;
    cfg.chunk_size = 2;
    const auto records = run_suite(cfg);
    CHECK(records.size() == 2 * 3 * 2 * 4 * 2);
    for (const auto &r : records) {
        CHECK(r.pass);
        CHECK(r.max_err < kPlaintextAgreement);
        CHECK(r.engine == "model");
        if (r.sparsity == 1.0 && r.scheme != SchemeId::NaiveDense && r.scheme != SchemeId::NaiveSparse) {
            CHECK(r.ct_bytes == 0);
        }
    }
    CHECK(records.front().rows == 3);
    CHECK(records.back().rows == 4);
    CHECK(records.back().sparsity == 1.0);

    // Same config, same rows apart from timings.
    auto strip = [](std::vector<BenchRecord> rs) {
        for (auto &r : rs) r.runtime_s = 0.0;
        return to_csv(rs);
    };
    CHECK(strip(run_suite(cfg)) == strip(records));
}

TEST_CASE("run_loaded uses the given operands", "[bench]") {
    BenchConfig cfg;
    cfg.repeats = 1;
    cfg.keep_results = true;
    const PlainMatrix a(2, 2, {1, 2, 0, 4});
    const PlainMatrix b(2, 2, {5, 0, 7, 8});
    const auto records = run_loaded(cfg, a, b);
    REQUIRE(records.size() == 4);
    const PlainMatrix expected(2, 2, {19, 16, 28, 32});
    for (const auto &r : records) {
        CHECK(*r.result == expected);
        CHECK(r.sparsity == 0.25);
    }
}

TEST_CASE("scaling report baselines at one thread", "[bench]") {
    const auto engine = make_engine(EngineSpec{});
    const auto rows = scaling_report({4}, {0.0, 0.5}, {2, 1, 3}, SchemeId::Csr, *engine, 1, 1, 0);
    REQUIRE(rows.size() == 6);
    for (const auto &row : rows) {
        CHECK(row.max_deviation == 0.0);
        if (row.threads == 1) CHECK(row.speedup == 1.0);
    }
}

TEST_CASE("matrix files round trip", "[io]") {
    const PlainMatrix m = generate_matrix(3, 4, 0.3, 8, 0);
    const auto bin = scratch("m.bin").string();
    const auto csv = scratch("m.csv").string();
    save_matrix(bin, m);
    save_matrix(csv, m);
    CHECK(load_matrix(bin) == m);
    CHECK(load_matrix(csv) == m);
    CHECK(std::filesystem::file_size(bin) == 8 + 12 * 8);
    const std::string head = slurp(bin).substr(0, 8);
    CHECK(head == std::string("\x03\x00\x00\x00\x04\x00\x00\x00", 8));
}

TEST_CASE("matrix file errors", "[io]") {
    auto kind_of = [](const std::string &path) {
        try {
            (void)load_matrix(path);
        } catch (const Error &e) {
            return e.kind();
        }
        return ErrorKind::InvalidArgument;
    };
    CHECK(kind_of(scratch("missing.bin").string()) == ErrorKind::Io);
    {
        std::ofstream(scratch("ragged.csv")) << "1,2\n3\n";
        std::ofstream(scratch("bad.csv")) << "1,x\n";
        std::ofstream(scratch("empty.csv")) << "";
        std::ofstream(scratch("short.bin"), std::ios::binary) << std::string("\x02\x00\x00\x00\x02\x00\x00\x00", 8) << "abc";
    }
    CHECK(kind_of(scratch("ragged.csv").string()) == ErrorKind::Dimension);
    CHECK(kind_of(scratch("bad.csv").string()) == ErrorKind::Io);
    CHECK(kind_of(scratch("empty.csv").string()) == ErrorKind::Dimension);
    CHECK(kind_of(scratch("short.bin").string()) == ErrorKind::Io);
}
