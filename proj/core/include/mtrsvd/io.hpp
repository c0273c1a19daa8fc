#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "mtrsvd/types.hpp"

namespace mtrsvd::io {

/// Matrix Market exchange format. Writes "array real general"; reads both
/// the array and coordinate variants.
void write_matrix_market(const std::filesystem::path& path, const Matrix& A);
Matrix read_matrix_market(const std::filesystem::path& path);

/// Plain-text vectors, one full-precision decimal value per line.
void write_vector(const std::filesystem::path& path, const Vector& v);
Vector read_vector(const std::filesystem::path& path);

/// Shortest decimal form that round-trips a double exactly.
std::string format_double(double v);

/// Minimal CSV: no quoting, values never contain commas.
std::vector<std::vector<std::string>> read_csv(const std::filesystem::path& path);

}  // namespace mtrsvd::io
