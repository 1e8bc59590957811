// Copyright 2026 The sfhe Authors
// SPDX-License-Identifier: Apache-2.0

#include "sfhe/bench.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numeric>
#include <random>
#include <thread>

#include <Eigen/Dense>

#include "sfhe/ckks/ckks_engine.hpp"
#include "sfhe/model_engine.hpp"

namespace sfhe {

std::string_view engine_kind_name(EngineKind kind) {
    return kind == EngineKind::Model ? "model" : "ckks";
}

EngineKind parse_engine_kind(std::string_view name) {
    if (name == "model") return EngineKind::Model;
    if (name == "ckks") return EngineKind::Ckks;
    throw Error(ErrorKind::InvalidArgument, "unknown engine '" + std::string(name) + "' (expected model or ckks)");
}

std::unique_ptr<Engine> make_engine(const EngineSpec &spec) {
    if (spec.kind == EngineKind::Model) {
        return std::make_unique<ModelEngine>(ModelConfig{spec.params, spec.noise_std, spec.seed});
    }
    return std::make_unique<ckks::CkksEngine>(ckks::CkksEngineConfig{spec.params, spec.seed});
}

void BenchConfig::validate() const {
    auto fail = [](const std::string &what) { throw Error(ErrorKind::InvalidArgument, what); };
    if (sizes.empty() || sparsities.empty() || schemes.empty() || thread_counts.empty()) {
        fail("benchmark grid must not be empty");
    }
    if (repeats < 1) fail("repeats must be at least 1");
    if (chunk_size < 1) fail("chunk size must be at least 1");
    for (double s : sparsities) {
        if (!(s >= 0.0 && s <= 1.0)) fail("sparsity " + std::to_string(s) + " outside [0, 1]");
    }
    for (std::size_t n : sizes) {
        if (n == 0) fail("matrix size must be positive");
    }
    if (!(epsilon > 0.0)) fail("epsilon must be positive");
}

std::string BenchRecord::size_label() const {
    if (rows == inner && inner == cols) return std::to_string(rows);
    return std::to_string(rows) + "x" + std::to_string(inner) + "x" + std::to_string(cols);
}

std::size_t zero_count(std::size_t elements, double sparsity) {
    // The small bias keeps products such as 0.3 * 100 from landing just below an integer.
    return std::min(elements, static_cast<std::size_t>(std::floor(sparsity * static_cast<double>(elements) + 1e-9)));
}

PlainMatrix generate_matrix(std::size_t rows, std::size_t cols, double sparsity, std::uint64_t seed,
                            std::uint64_t stream) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(rows), static_cast<std::uint32_t>(cols),
                      static_cast<std::uint32_t>(stream)};
    std::mt19937_64 rng(seq);
    std::normal_distribution<double> gauss(0.0, 1.0);
    PlainMatrix m(rows, cols);
    for (double &v : m.data()) v = gauss(rng);
    std::vector<std::size_t> order(m.data().size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::shuffle(order.begin(), order.end(), rng);
    const std::size_t zeros = zero_count(order.size(), sparsity);
    for (std::size_t t = 0; t < zeros; ++t) m.data()[order[t]] = 0.0;
    return m;
}

std::pair<PlainMatrix, PlainMatrix> generate_operands(std::size_t n, double sparsity, std::uint64_t seed) {
    return {generate_matrix(n, n, sparsity, seed, 0), generate_matrix(n, n, sparsity, seed, 1)};
}

PlaintextOracles plaintext_oracles(const PlainMatrix &lhs, const PlainMatrix &rhs) {
    if (lhs.cols() != rhs.rows()) {
        throw Error(ErrorKind::Shape, "operands are not conformable");
    }
    using RowMajor = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
    const Eigen::Map<const RowMajor> a(lhs.data().data(), static_cast<Eigen::Index>(lhs.rows()),
                                       static_cast<Eigen::Index>(lhs.cols()));
    const Eigen::Map<const RowMajor> b(rhs.data().data(), static_cast<Eigen::Index>(rhs.rows()),
                                       static_cast<Eigen::Index>(rhs.cols()));
    const RowMajor product = a * b;

    PlaintextOracles out;
    out.dense = PlainMatrix(lhs.rows(), rhs.cols(),
                            std::vector<double>(product.data(), product.data() + product.size()));
    for (SchemeId s : kAllSchemes) {
        PlainMatrix r = plaintext_matmul(s, lhs, rhs);
        for (std::size_t e = 0; e < r.data().size(); ++e) {
            if (!(std::abs(r.data()[e] - out.dense.data()[e]) <= kPlaintextAgreement)) {
                throw Error(ErrorKind::Verification, "plaintext " + std::string(scheme_name(s)) +
                                                         " product disagrees with the dense oracle");
            }
        }
        out.schemes.emplace(s, std::move(r));
    }
    return out;
}

BenchRecord run_case(const Engine &engine, const PlainMatrix &lhs, const PlainMatrix &rhs,
                     const PlainMatrix &truth, SchemeId scheme, std::size_t threads,
                     std::size_t chunk_size, double epsilon, bool keep_result) {
    const Layout layout = scheme_layout(scheme);
    const EncryptedMatrix a = encrypt_matrix(lhs, chunk_size, layout, engine);
    const EncryptedMatrix b = encrypt_matrix(rhs, chunk_size, layout, engine);

    const auto start = std::chrono::steady_clock::now();
    MatmulResult result = matmul(a, b, scheme, engine, MatmulOptions{threads, chunk_size});
    const auto stop = std::chrono::steady_clock::now();

    const PlainMatrix decrypted = decrypt_matrix(result.product, engine);

    BenchRecord r;
    r.scheme = scheme;
    r.rows = lhs.rows();
    r.inner = lhs.cols();
    r.cols = rhs.cols();
    r.threads = result.stats.thread_count;
    r.chunk_size = chunk_size;
    r.engine = engine.name();
    r.runtime_s = std::chrono::duration<double>(stop - start).count();
    r.ct_bytes = a.matrix_bytes() + b.matrix_bytes();
    r.meta_bytes = a.metadata_bytes() + b.metadata_bytes();
    double sum = 0.0;
    for (std::size_t e = 0; e < truth.data().size(); ++e) {
        const double err = std::abs(decrypted.data()[e] - truth.data()[e]);
        sum += err;
        r.max_err = std::max(r.max_err, std::isnan(err) ? INFINITY : err);
    }
    r.mean_err = sum / static_cast<double>(truth.data().size());
    r.pass = r.max_err < epsilon;
    r.ops = homomorphic_op_count(scheme, a.metadata(), b.metadata(), chunk_size);
    r.contended_writes = result.stats.contended_writes;
    r.sync_bytes = result.stats.sync_memory_bytes;
    if (keep_result) r.result = decrypted;
    return r;
}

namespace {

std::uint64_t repeat_seed(std::uint64_t seed, std::size_t repeat) {
    std::uint64_t x = seed + 0x9e3779b97f4a7c15ULL * (repeat + 1);
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

void run_grid_point(const BenchConfig &cfg, const Engine &engine, const PlainMatrix &lhs,
                    const PlainMatrix &rhs, double sparsity, std::size_t repeat,
                    std::vector<BenchRecord> &out) {
    const PlaintextOracles oracles = plaintext_oracles(lhs, rhs);
    for (SchemeId scheme : cfg.schemes) {
        for (std::size_t threads : cfg.thread_counts) {
            BenchRecord r = run_case(engine, lhs, rhs, oracles.dense, scheme, threads, cfg.chunk_size,
                                     cfg.epsilon, cfg.keep_results);
            r.sparsity = sparsity;
            r.repeat = repeat;
            out.push_back(std::move(r));
        }
    }
}

}  // namespace

std::vector<BenchRecord> run_suite(const BenchConfig &cfg) {
    cfg.validate();
    const auto engine = make_engine(cfg.engine);
    std::vector<BenchRecord> records;
    for (std::size_t n : cfg.sizes) {
        for (double s : cfg.sparsities) {
            for (std::size_t rep = 0; rep < cfg.repeats; ++rep) {
                const auto [lhs, rhs] = generate_operands(n, s, repeat_seed(cfg.seed, rep));
                run_grid_point(cfg, *engine, lhs, rhs, s, rep, records);
            }
        }
    }
    return records;
}

std::vector<BenchRecord> run_loaded(const BenchConfig &cfg, const PlainMatrix &lhs, const PlainMatrix &rhs) {
    cfg.validate();
    const auto engine = make_engine(cfg.engine);
    std::size_t zeros = 0;
    for (double v : lhs.data()) zeros += v == 0.0;
    for (double v : rhs.data()) zeros += v == 0.0;
    const double sparsity = static_cast<double>(zeros) / static_cast<double>(lhs.data().size() + rhs.data().size());
    std::vector<BenchRecord> records;
    for (std::size_t rep = 0; rep < cfg.repeats; ++rep) {
        run_grid_point(cfg, *engine, lhs, rhs, sparsity, rep, records);
    }
    return records;
}

double median(std::vector<double> values) {
    if (values.empty()) return 0.0;
    std::sort(values.begin(), values.end());
    const std::size_t mid = values.size() / 2;
    return values.size() % 2 ? values[mid] : 0.5 * (values[mid - 1] + values[mid]);
}

std::vector<ScalingRow> scaling_report(const std::vector<std::size_t> &sizes,
                                       const std::vector<double> &sparsities,
                                       const std::vector<std::size_t> &thread_counts, SchemeId scheme,
                                       const Engine &engine, std::size_t chunk_size,
                                       std::size_t repeats, std::uint64_t seed) {
    std::vector<ScalingRow> rows;
    for (std::size_t n : sizes) {
        for (double s : sparsities) {
            const auto [lhs, rhs] = generate_operands(n, s, seed);
            const PlaintextOracles oracles = plaintext_oracles(lhs, rhs);
            std::optional<PlainMatrix> baseline;
            double base_time = 0.0;
            // T = 1 always runs first so every speedup has its reference.
            std::vector<std::size_t> ts{1};
            for (std::size_t t : thread_counts) {
                if (t != 1) ts.push_back(t);
            }
            for (std::size_t t : ts) {
                std::vector<double> times;
                ScalingRow row{n, s, t, 0.0, 1.0, 0.0};
                for (std::size_t rep = 0; rep < std::max<std::size_t>(1, repeats); ++rep) {
                    BenchRecord r = run_case(engine, lhs, rhs, oracles.dense, scheme, t, chunk_size, 1e-3, true);
                    times.push_back(r.runtime_s);
                    if (!baseline) baseline = r.result;
                    for (std::size_t e = 0; e < r.result->data().size(); ++e) {
                        row.max_deviation = std::max(row.max_deviation,
                                                     std::abs(r.result->data()[e] - baseline->data()[e]));
                    }
                }
                row.runtime_s = median(times);
                if (t == 1) base_time = row.runtime_s;
                row.speedup = row.runtime_s > 0.0 ? base_time / row.runtime_s : 1.0;
                if (std::find(thread_counts.begin(), thread_counts.end(), t) != thread_counts.end()) {
                    rows.push_back(row);
                }
            }
        }
    }
    return rows;
}

namespace {

std::string format_double(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string format_sparsity(double s) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.4g", s);
    return buf;
}

}  // namespace

std::string csv_row(const BenchRecord &r) {
    std::string row;
    row += scheme_name(r.scheme);
    row += ',' + r.size_label();
    row += ',' + format_sparsity(r.sparsity);
    row += ',' + std::to_string(r.threads);
    row += ',' + std::to_string(r.chunk_size);
    row += ',' + r.engine;
    row += ',' + std::to_string(r.repeat);
    row += ',' + format_double(r.runtime_s);
    row += ',' + std::to_string(r.ct_bytes);
    row += ',' + std::to_string(r.meta_bytes);
    row += ',' + format_double(r.mean_err);
    row += ',' + format_double(r.max_err);
    row += r.pass ? ",true" : ",false";
    return row;
}

std::string to_csv(const std::vector<BenchRecord> &records) {
    std::string out = std::string(kCsvHeader) + "\n";
    for (const auto &r : records) out += csv_row(r) + "\n";
    return out;
}

nlohmann::json to_json(const BenchRecord &r) {
    return {
        {"scheme", scheme_name(r.scheme)},
        {"rows", r.rows},
        {"inner", r.inner},
        {"cols", r.cols},
        {"sparsity", r.sparsity},
        {"threads", r.threads},
        {"chunk_size", r.chunk_size},
        {"engine", r.engine},
        {"repeat", r.repeat},
        {"runtime_s", r.runtime_s},
        {"ct_bytes", r.ct_bytes},
        {"meta_bytes", r.meta_bytes},
        {"mean_err", r.mean_err},
        {"max_err", r.max_err},
        {"pass", r.pass},
        {"ops",
         {{"rotations", r.ops.rotations},
          {"ct_multiplies", r.ops.ct_multiplies},
          {"plain_multiplies", r.ops.plain_multiplies},
          {"relinearizations", r.ops.relinearizations},
          {"rescales", r.ops.rescales},
          {"adds", r.ops.adds}}},
        {"contended_writes", r.contended_writes},
        {"sync_bytes", r.sync_bytes},
    };
}

BenchRecord record_from_json(const nlohmann::json &j) {
    BenchRecord r;
    r.scheme = parse_scheme(j.at("scheme").get<std::string>());
    j.at("rows").get_to(r.rows);
    j.at("inner").get_to(r.inner);
    j.at("cols").get_to(r.cols);
    j.at("sparsity").get_to(r.sparsity);
    j.at("threads").get_to(r.threads);
    j.at("chunk_size").get_to(r.chunk_size);
    j.at("engine").get_to(r.engine);
    j.at("repeat").get_to(r.repeat);
    j.at("runtime_s").get_to(r.runtime_s);
    j.at("ct_bytes").get_to(r.ct_bytes);
    j.at("meta_bytes").get_to(r.meta_bytes);
    j.at("mean_err").get_to(r.mean_err);
    j.at("max_err").get_to(r.max_err);
    j.at("pass").get_to(r.pass);
    const auto &ops = j.at("ops");
    ops.at("rotations").get_to(r.ops.rotations);
    ops.at("ct_multiplies").get_to(r.ops.ct_multiplies);
    ops.at("plain_multiplies").get_to(r.ops.plain_multiplies);
    ops.at("relinearizations").get_to(r.ops.relinearizations);
    ops.at("rescales").get_to(r.ops.rescales);
    ops.at("adds").get_to(r.ops.adds);
    j.at("contended_writes").get_to(r.contended_writes);
    j.at("sync_bytes").get_to(r.sync_bytes);
    return r;
}

nlohmann::json config_to_json(const BenchConfig &cfg) {
    nlohmann::json schemes = nlohmann::json::array();
    for (SchemeId s : cfg.schemes) schemes.push_back(scheme_name(s));
    return {
        {"sizes", cfg.sizes},
        {"sparsities", cfg.sparsities},
        {"schemes", schemes},
        {"threads", cfg.thread_counts},
        {"chunk_size", cfg.chunk_size},
        {"engine", engine_kind_name(cfg.engine.kind)},
        {"noise_std", cfg.engine.noise_std},
        {"poly_modulus_degree", cfg.engine.params.poly_modulus_degree},
        {"coeff_modulus_bits", cfg.engine.params.coeff_modulus_bits},
        {"initial_scale", cfg.engine.params.initial_scale},
        {"repeats", cfg.repeats},
        {"seed", cfg.seed},
        {"epsilon", cfg.epsilon},
    };
}

nlohmann::json environment_json() {
    std::string cpu;
    std::ifstream info("/proc/cpuinfo");
    for (std::string line; std::getline(info, line);) {
        if (line.rfind("model name", 0) == 0) {
            cpu = line.substr(line.find(':') + 2);
            break;
        }
    }
    return {
        {"hardware_concurrency", std::thread::hardware_concurrency()},
        {"cpu", cpu},
        {"compiler", __VERSION__},
        {"cxx_standard", __cplusplus},
    };
}

nlohmann::json report_json(const std::vector<BenchRecord> &records, const BenchConfig &cfg) {
    nlohmann::json rs = nlohmann::json::array();
    for (const auto &r : records) rs.push_back(to_json(r));
    return {{"config", config_to_json(cfg)}, {"environment", environment_json()}, {"records", rs}};
}

void emit_report(const std::vector<BenchRecord> &records, const BenchConfig &cfg, const std::string &stem) {
    if (records.empty()) throw Error(ErrorKind::InvalidArgument, "no records to report");
    auto write = [](const std::string &path, const std::string &text) {
        std::ofstream out(path, std::ios::binary);
        out << text;
        out.flush();
        if (!out) throw Error(ErrorKind::Io, "cannot write " + path);
    };
    write(stem + ".csv", to_csv(records));
    write(stem + ".json", report_json(records, cfg).dump(2) + "\n");
}

}  // namespace sfhe
