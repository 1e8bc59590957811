// Copyright 2026 The sfhe Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace sfhe {

enum class ErrorKind {
    Capacity,
    EngineMismatch,
    Level,
    Scale,
    Components,
    DepthExhausted,
    Key,
    Precision,
    Bounds,
    Dimension,
    Shape,
    LayoutMismatch,
    Corruption,
    Verification,
    Io,
    InvalidArgument,
};

const char *to_string(ErrorKind kind);

/// Every failure raised by the library. The category is stable and is what
/// callers (and the bindings) dispatch on; the message is for humans.
class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string &what);

    ErrorKind kind() const noexcept { return kind_; }
    const char *category_name() const noexcept { return to_string(kind_); }

private:
    ErrorKind kind_;
};

/// CKKS scheme parameters. `coeff_modulus_bits` lists every prime of the
/// chain; the last entry is the key-switching special prime.
struct CkksParams {
    std::size_t poly_modulus_degree = 8192;
    std::vector<int> coeff_modulus_bits{50, 40, 40, 40, 40};
    double initial_scale = 1099511627776.0;  // 2^40

    std::size_t slot_count() const { return poly_modulus_degree / 2; }
    /// Number of primes able to hold ciphertext data (all but the special one).
    std::size_t data_prime_count() const { return coeff_modulus_bits.size() - 1; }
    /// Level of a freshly encrypted ciphertext.
    int max_level() const { return static_cast<int>(data_prime_count()) - 1; }

    /// Throws Error(InvalidArgument) unless the degree is 2^n with 10 <= n <= 15,
    /// the chain holds at least one data prime plus the special prime, every
    /// bit size lies in [20, 60], and the scale is positive.
    void validate() const;

    static CkksParams paper_default() { return {}; }
};

using PlainVector = std::vector<double>;

/// Engine-owned ciphertext body. Engines downcast after checking engine_id.
class CiphertextPayload {
public:
    virtual ~CiphertextPayload() = default;
};

/// Immutable, cheaply copyable handle to an encrypted slot vector.
class Ciphertext {
public:
    Ciphertext() = default;
    Ciphertext(std::uint64_t engine_id, int level, double scale, int size_components,
               std::size_t byte_size, std::shared_ptr<const CiphertextPayload> payload)
        : engine_id_(engine_id), level_(level), scale_(scale), size_components_(size_components),
          byte_size_(byte_size), payload_(std::move(payload)) {}

    std::uint64_t engine_id() const { return engine_id_; }
    int level() const { return level_; }
    double scale() const { return scale_; }
    int size_components() const { return size_components_; }
    std::size_t byte_size() const { return byte_size_; }
    bool valid() const { return payload_ != nullptr; }

    template <typename T>
    const T &payload_as() const {
        return static_cast<const T &>(*payload_);
    }
    const CiphertextPayload *payload() const { return payload_.get(); }

private:
    std::uint64_t engine_id_ = 0;
    int level_ = -1;
    double scale_ = 0.0;
    int size_components_ = 0;
    std::size_t byte_size_ = 0;
    std::shared_ptr<const CiphertextPayload> payload_;
};

/// Serialized footprint shared by every engine: components x primes x degree x 8.
constexpr std::size_t ciphertext_size_model(std::size_t components, std::size_t active_primes,
                                            std::size_t poly_modulus_degree) {
    return components * active_primes * poly_modulus_degree * sizeof(std::uint64_t);
}

/// Relative tolerance for the scale check performed by add.
inline constexpr double kScaleMatchTolerance = 1.0 / 1048576.0;  // 2^-20

/// Backend-neutral homomorphic engine. All evaluation calls are pure: inputs
/// are never modified and every result is a fresh handle, so a single engine
/// may be driven from many threads at once.
class Engine {
public:
    virtual ~Engine() = default;

    virtual std::uint64_t id() const = 0;
    virtual const char *name() const = 0;
    virtual const CkksParams &params() const = 0;
    std::size_t slot_count() const { return params().slot_count(); }

    /// Absolute error an encrypt/decrypt round trip is expected to stay below.
    virtual double roundtrip_tolerance() const = 0;

    virtual Ciphertext encrypt(std::span<const double> values) const = 0;
    virtual PlainVector decrypt(const Ciphertext &ct) const = 0;

    virtual Ciphertext add(const Ciphertext &a, const Ciphertext &b) const = 0;
    virtual Ciphertext multiply(const Ciphertext &a, const Ciphertext &b) const = 0;
    virtual Ciphertext multiply_plain(const Ciphertext &a, std::span<const double> mask) const = 0;
    virtual Ciphertext relinearize(const Ciphertext &a) const = 0;
    virtual Ciphertext rescale(const Ciphertext &a) const = 0;
    /// Left rotation for positive steps: slot i of the result holds slot
    /// (i + steps) mod slot_count of the input.
    virtual Ciphertext rotate(const Ciphertext &a, int steps) const = 0;

    std::size_t ciphertext_bytes(const Ciphertext &a) const { return a.byte_size(); }

    /// Prime dropped by a rescale from `level` (exposed for bookkeeping checks).
    virtual double rescale_divisor(int level) const = 0;

protected:
    static std::uint64_t next_engine_id();
};

namespace detail {

// Shared precondition checks so that every engine raises the same error for
// the same operation trace.
void check_owner(const Engine &engine, const Ciphertext &ct);
void check_add(const Engine &engine, const Ciphertext &a, const Ciphertext &b);
void check_multiply(const Engine &engine, const Ciphertext &a, const Ciphertext &b);
void check_multiply_plain(const Engine &engine, const Ciphertext &a, std::size_t mask_len);
void check_rescale(const Engine &engine, const Ciphertext &a);
void check_rotate(const Engine &engine, const Ciphertext &a, int steps);
void check_capacity(const Engine &engine, std::size_t len);

}  // namespace detail

}  // namespace sfhe
