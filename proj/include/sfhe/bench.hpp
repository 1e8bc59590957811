// Copyright 2026 The sfhe Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "sfhe/encrypted_matrix.hpp"
#include "sfhe/engine.hpp"
#include "sfhe/matmul.hpp"

namespace sfhe {

enum class EngineKind { Model, Ckks };

std::string_view engine_kind_name(EngineKind kind);
EngineKind parse_engine_kind(std::string_view name);

struct EngineSpec {
    EngineKind kind = EngineKind::Model;
    CkksParams params;
    double noise_std = 0.0;  // model engine only
    std::uint64_t seed = 0;
};

std::unique_ptr<Engine> make_engine(const EngineSpec &spec);

struct BenchConfig {
    std::vector<std::size_t> sizes{8};
    std::vector<double> sparsities{0.0, 0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9, 1.0};
    std::vector<SchemeId> schemes{kAllSchemes.begin(), kAllSchemes.end()};
    std::vector<std::size_t> thread_counts{1};
    std::size_t chunk_size = 1;
    EngineSpec engine;
    std::size_t repeats = 3;
    std::uint64_t seed = 0;
    double epsilon = 1e-3;
    /// Keep decrypted result matrices on the records (not serialized).
    bool keep_results = false;

    /// Throws InvalidArgument on an empty grid, repeats 0 or s outside [0, 1].
    void validate() const;
};

struct BenchRecord {
    SchemeId scheme = SchemeId::NaiveDense;
    std::size_t rows = 0;   // lhs rows
    std::size_t inner = 0;  // lhs cols == rhs rows
    std::size_t cols = 0;   // rhs cols
    double sparsity = 0.0;
    std::size_t threads = 1;
    std::size_t chunk_size = 1;
    std::string engine;
    std::size_t repeat = 0;
    double runtime_s = 0.0;
    std::size_t ct_bytes = 0;    // both operands
    std::size_t meta_bytes = 0;  // both operands
    double mean_err = 0.0;
    double max_err = 0.0;
    bool pass = false;
    OpCounts ops;
    std::size_t contended_writes = 0;
    std::size_t sync_bytes = 0;
    std::optional<PlainMatrix> result;

    /// "n" for square runs, otherwise "rows x inner x cols".
    std::string size_label() const;
};

/// Two n x n operands with N(0, 1) entries and floor(s * n^2) zeros each.
/// The values and the order in which positions are zeroed depend on the seed
/// only, so raising s adds zeros to the same pattern. LHS and RHS use
/// independent streams.
std::pair<PlainMatrix, PlainMatrix> generate_operands(std::size_t n, double sparsity, std::uint64_t seed);

/// Same for an arbitrary shape; `stream` separates independent draws.
PlainMatrix generate_matrix(std::size_t rows, std::size_t cols, double sparsity, std::uint64_t seed,
                            std::uint64_t stream);

std::size_t zero_count(std::size_t elements, double sparsity);

struct PlaintextOracles {
    PlainMatrix dense;                        // ground truth
    std::map<SchemeId, PlainMatrix> schemes;  // each scheme's loop on doubles
};

inline constexpr double kPlaintextAgreement = 1e-12;

/// Throws Verification when a plaintext scheme strays from the dense product
/// by more than kPlaintextAgreement.
PlaintextOracles plaintext_oracles(const PlainMatrix &lhs, const PlainMatrix &rhs);

/// Encrypts, times the matmul call alone, decrypts and compares with `truth`.
BenchRecord run_case(const Engine &engine, const PlainMatrix &lhs, const PlainMatrix &rhs,
                     const PlainMatrix &truth, SchemeId scheme, std::size_t threads,
                     std::size_t chunk_size, double epsilon, bool keep_result = false);

/// Full grid on a single engine instance. Records come out ordered by size,
/// sparsity, repeat, scheme, threads.
std::vector<BenchRecord> run_suite(const BenchConfig &cfg);

/// Same grid over explicit operands instead of generated ones.
std::vector<BenchRecord> run_loaded(const BenchConfig &cfg, const PlainMatrix &lhs, const PlainMatrix &rhs);

struct ScalingRow {
    std::size_t size = 0;
    double sparsity = 0.0;
    std::size_t threads = 1;
    double runtime_s = 0.0;  // median over repeats
    double speedup = 1.0;    // T=1 median / this median
    double max_deviation = 0.0;  // largest |result - result at T=1|
};

std::vector<ScalingRow> scaling_report(const std::vector<std::size_t> &sizes,
                                       const std::vector<double> &sparsities,
                                       const std::vector<std::size_t> &thread_counts, SchemeId scheme,
                                       const Engine &engine, std::size_t chunk_size,
                                       std::size_t repeats, std::uint64_t seed);

double median(std::vector<double> values);

inline constexpr const char *kCsvHeader =
    "scheme,size,sparsity,threads,chunk_size,engine,repeat,runtime_s,ct_bytes,meta_bytes,mean_err,max_err,pass";

std::string csv_row(const BenchRecord &r);
std::string to_csv(const std::vector<BenchRecord> &records);

nlohmann::json to_json(const BenchRecord &r);
BenchRecord record_from_json(const nlohmann::json &j);
nlohmann::json config_to_json(const BenchConfig &cfg);
nlohmann::json environment_json();
nlohmann::json report_json(const std::vector<BenchRecord> &records, const BenchConfig &cfg);

/// Writes <stem>.csv and <stem>.json. Throws Io when a file cannot be written
/// and InvalidArgument when `records` is empty.
void emit_report(const std::vector<BenchRecord> &records, const BenchConfig &cfg, const std::string &stem);

}  // namespace sfhe
