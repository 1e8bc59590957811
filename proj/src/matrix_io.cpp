// Copyright 2026 The sfhe Authors
// SPDX-License-Identifier: Apache-2.0

#include "sfhe/matrix_io.hpp"

#include <bit>
#include <charconv>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <iterator>
#include <sstream>

namespace sfhe {

namespace {

template <typename T>
T from_le(const unsigned char *p) {
    std::uint64_t v = 0;
    for (std::size_t i = 0; i < sizeof(T); ++i) v |= static_cast<std::uint64_t>(p[i]) << (8 * i);
    if constexpr (sizeof(T) == 8) {
        return std::bit_cast<T>(v);
    } else {
        return static_cast<T>(v);
    }
}

template <typename T>
void to_le(std::string &out, T value) {
    std::uint64_t v;
    if constexpr (sizeof(T) == 8) {
        v = std::bit_cast<std::uint64_t>(value);
    } else {
        v = static_cast<std::uint64_t>(value);
    }
    for (std::size_t i = 0; i < sizeof(T); ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
}

std::string slurp(const std::string &path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorKind::Io, "cannot open " + path);
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

void dump(const std::string &path, const std::string &bytes) {
    std::ofstream out(path, std::ios::binary);
    out << bytes;
    out.flush();
    if (!out) throw Error(ErrorKind::Io, "cannot write " + path);
}

std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
    return s;
}

}  // namespace

PlainMatrix read_matrix_binary(const std::string &path) {
    const std::string bytes = slurp(path);
    if (bytes.size() < 8) throw Error(ErrorKind::Io, path + ": missing dimension header");
    const auto *p = reinterpret_cast<const unsigned char *>(bytes.data());
    const auto rows = from_le<std::uint32_t>(p);
    const auto cols = from_le<std::uint32_t>(p + 4);
    const std::size_t count = static_cast<std::size_t>(rows) * cols;
    if (rows == 0 || cols == 0) throw Error(ErrorKind::Dimension, path + ": empty matrix");
    if (bytes.size() != 8 + 8 * count) {
        throw Error(ErrorKind::Io, path + ": expected " + std::to_string(8 + 8 * count) + " bytes, found " +
                                       std::to_string(bytes.size()));
    }
    std::vector<double> data(count);
    for (std::size_t e = 0; e < count; ++e) data[e] = from_le<double>(p + 8 + 8 * e);
    return PlainMatrix(rows, cols, std::move(data));
}

void write_matrix_binary(const std::string &path, const PlainMatrix &m) {
    std::string bytes;
    bytes.reserve(8 + 8 * m.data().size());
    to_le(bytes, static_cast<std::uint32_t>(m.rows()));
    to_le(bytes, static_cast<std::uint32_t>(m.cols()));
    for (double v : m.data()) to_le(bytes, v);
    dump(path, bytes);
}

PlainMatrix read_matrix_csv(const std::string &path) {
    std::istringstream in(slurp(path));
    std::vector<double> data;
    std::size_t rows = 0;
    std::size_t cols = 0;
    for (std::string line; std::getline(in, line);) {
        if (trim(line).empty()) continue;
        std::size_t count = 0;
        std::string_view rest(line);
        while (true) {
            const std::size_t comma = rest.find(',');
            const std::string_view field = trim(rest.substr(0, comma));
            double v = 0.0;
            const auto [end, ec] = std::from_chars(field.data(), field.data() + field.size(), v);
            if (ec != std::errc() || end != field.data() + field.size() || field.empty()) {
                throw Error(ErrorKind::Io, path + ": bad number '" + std::string(field) + "' on row " +
                                               std::to_string(rows + 1));
            }
            data.push_back(v);
            ++count;
            if (comma == std::string_view::npos) break;
            rest.remove_prefix(comma + 1);
        }
        if (rows == 0) cols = count;
        if (count != cols) throw Error(ErrorKind::Dimension, path + ": ragged row " + std::to_string(rows + 1));
        ++rows;
    }
    if (rows == 0) throw Error(ErrorKind::Dimension, path + ": empty matrix");
    return PlainMatrix(rows, cols, std::move(data));
}

void write_matrix_csv(const std::string &path, const PlainMatrix &m) {
    std::string text;
    char buf[40];
    for (std::size_t i = 0; i < m.rows(); ++i) {
        for (std::size_t j = 0; j < m.cols(); ++j) {
            std::snprintf(buf, sizeof buf, "%.17g", m(i, j));
            if (j) text += ',';
            text += buf;
        }
        text += '\n';
    }
    dump(path, text);
}

namespace {

bool is_csv(const std::string &path) {
    return path.size() >= 4 && path.compare(path.size() - 4, 4, ".csv") == 0;
}

}  // namespace

PlainMatrix load_matrix(const std::string &path) {
    return is_csv(path) ? read_matrix_csv(path) : read_matrix_binary(path);
}

void save_matrix(const std::string &path, const PlainMatrix &m) {
    if (is_csv(path)) {
        write_matrix_csv(path, m);
    } else {
        write_matrix_binary(path, m);
    }
}

}  // namespace sfhe
