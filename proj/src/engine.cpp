// Copyright 2026 The sfhe Authors
// SPDX-License-Identifier: Apache-2.0

#include "sfhe/engine.hpp"

#include <atomic>
#include <cmath>
#include <cstdlib>

namespace sfhe {

const char *to_string(ErrorKind kind) {
    switch (kind) {
    case ErrorKind::Capacity: return "CapacityError";
    case ErrorKind::EngineMismatch: return "EngineMismatchError";
    case ErrorKind::Level: return "LevelError";
    case ErrorKind::Scale: return "ScaleError";
    case ErrorKind::Components: return "ComponentError";
    case ErrorKind::DepthExhausted: return "DepthExhaustedError";
    case ErrorKind::Key: return "KeyError";
    case ErrorKind::Precision: return "PrecisionError";
    case ErrorKind::Bounds: return "BoundsError";
    case ErrorKind::Dimension: return "DimensionError";
    case ErrorKind::Shape: return "ShapeError";
    case ErrorKind::LayoutMismatch: return "LayoutMismatchError";
    case ErrorKind::Corruption: return "CorruptionError";
    case ErrorKind::Verification: return "VerificationError";
    case ErrorKind::Io: return "IoError";
    case ErrorKind::InvalidArgument: return "InvalidArgumentError";
    }
    return "UnknownError";
}

Error::Error(ErrorKind kind, const std::string &what)
    : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

void CkksParams::validate() const {
    const std::size_t p = poly_modulus_degree;
    if (p == 0 || (p & (p - 1)) != 0 || p < 1024 || p > 32768) {
        throw Error(ErrorKind::InvalidArgument,
                    "poly_modulus_degree must be 2^n with 10 <= n <= 15, got " + std::to_string(p));
    }
    if (coeff_modulus_bits.size() < 2) {
        throw Error(ErrorKind::InvalidArgument,
                    "coefficient modulus needs at least one data prime and the special prime");
    }
    for (int bits : coeff_modulus_bits) {
        if (bits < 20 || bits > 60) {
            throw Error(ErrorKind::InvalidArgument,
                        "prime bit sizes must lie in [20, 60], got " + std::to_string(bits));
        }
    }
    if (!(initial_scale > 0.0) || !std::isfinite(initial_scale)) {
        throw Error(ErrorKind::InvalidArgument, "initial_scale must be positive");
    }
}

std::uint64_t Engine::next_engine_id() {
    static std::atomic<std::uint64_t> counter{1};
    return counter.fetch_add(1, std::memory_order_relaxed);
}

namespace detail {

void check_owner(const Engine &engine, const Ciphertext &ct) {
    if (!ct.valid() || ct.engine_id() != engine.id()) {
        throw Error(ErrorKind::EngineMismatch, "ciphertext does not belong to this engine");
    }
}

void check_capacity(const Engine &engine, std::size_t len) {
    if (len > engine.slot_count()) {
        throw Error(ErrorKind::Capacity, "vector of length " + std::to_string(len) +
                                             " exceeds slot count " +
                                             std::to_string(engine.slot_count()));
    }
}

void check_add(const Engine &engine, const Ciphertext &a, const Ciphertext &b) {
    check_owner(engine, a);
    check_owner(engine, b);
    if (a.level() != b.level()) {
        throw Error(ErrorKind::Level, "add operands at levels " + std::to_string(a.level()) +
                                          " and " + std::to_string(b.level()));
    }
    const double rel = std::abs(a.scale() - b.scale()) / std::max(a.scale(), b.scale());
    if (rel > kScaleMatchTolerance) {
        throw Error(ErrorKind::Scale, "add operand scales differ beyond tolerance");
    }
}

void check_multiply(const Engine &engine, const Ciphertext &a, const Ciphertext &b) {
    check_owner(engine, a);
    check_owner(engine, b);
    if (a.level() != b.level()) {
        throw Error(ErrorKind::Level, "multiply operands at levels " +
                                          std::to_string(a.level()) + " and " +
                                          std::to_string(b.level()));
    }
    if (a.size_components() != 2 || b.size_components() != 2) {
        throw Error(ErrorKind::Components, "multiply requires relinearized operands");
    }
}

void check_multiply_plain(const Engine &engine, const Ciphertext &a, std::size_t mask_len) {
    check_owner(engine, a);
    if (a.size_components() != 2) {
        throw Error(ErrorKind::Components, "multiply_plain requires a relinearized operand");
    }
    check_capacity(engine, mask_len);
}

void check_rescale(const Engine &engine, const Ciphertext &a) {
    check_owner(engine, a);
    if (a.level() < 1) {
        throw Error(ErrorKind::DepthExhausted, "no modulus left to rescale by");
    }
}

void check_rotate(const Engine &engine, const Ciphertext &a, int steps) {
    check_owner(engine, a);
    if (a.size_components() != 2) {
        throw Error(ErrorKind::Components, "rotate requires a relinearized operand");
    }
    if (static_cast<std::size_t>(std::abs(steps)) >= engine.slot_count()) {
        throw Error(ErrorKind::Bounds, "rotation step " + std::to_string(steps) +
                                           " out of range for " +
                                           std::to_string(engine.slot_count()) + " slots");
    }
}

}  // namespace detail

}  // namespace sfhe
