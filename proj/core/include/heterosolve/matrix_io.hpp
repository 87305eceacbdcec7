#pragma once

#include <filesystem>
#include <string>
#include <string_view>

#include "heterosolve/dense_matrix.hpp"

/// Plain-text matrix format: a "rows cols" header line followed by the
/// row-major entries, whitespace separated, printed with 17 significant
/// digits. Parsing uses std::from_chars, so a write/read cycle is bit-exact.
/// Vectors are stored as n x 1 matrices.
namespace heterosolve::io {

std::string format_matrix(const DenseMatrix& m);
/// Throws Error(Parse) with a line/entry diagnostic on malformed input.
DenseMatrix parse_matrix(std::string_view text);

DenseMatrix read_matrix(const std::filesystem::path& path);
void write_matrix(const std::filesystem::path& path, const DenseMatrix& m);

/// Accepts an n x 1 or 1 x n matrix file.
Vector read_vector(const std::filesystem::path& path);
void write_vector(const std::filesystem::path& path, std::span<const double> v);

/// "%.17g" rendering shared by every text output.
std::string format_double(double x);

}  // namespace heterosolve::io
