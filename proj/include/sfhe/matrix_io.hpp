// Copyright 2026 The sfhe Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <string>

#include "sfhe/encrypted_matrix.hpp"

namespace sfhe {

// Binary format: rows and cols as little-endian uint32, then rows * cols
// little-endian IEEE-754 doubles in row-major order.
PlainMatrix read_matrix_binary(const std::string &path);
void write_matrix_binary(const std::string &path, const PlainMatrix &m);

// CSV format: one matrix row per line, values separated by commas.
PlainMatrix read_matrix_csv(const std::string &path);
void write_matrix_csv(const std::string &path, const PlainMatrix &m);

/// Dispatches on the extension: ".csv" reads CSV, anything else binary.
PlainMatrix load_matrix(const std::string &path);
void save_matrix(const std::string &path, const PlainMatrix &m);

}  // namespace sfhe
