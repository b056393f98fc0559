#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "riemflow/manifold.hpp"

namespace riemflow {

using json = nlohmann::ordered_json;

/// Shortest round-trippable decimal form of a double ("%.17g" fallback);
/// NaN prints as "nan". Used everywhere a number reaches a file, so equal
/// runs give byte-equal output.
std::string format_double(double v);

// Dense matrices as plain CSV (one row per line) or as raw little-endian
// float64 with a small header: magic "RFMAT001", int64 rows, int64 cols,
// row-major payload.
void write_matrix_csv(const std::filesystem::path& path, const Matrix& m);
Matrix read_matrix_csv(const std::filesystem::path& path);
void write_matrix_bin(const std::filesystem::path& path, const Matrix& m);
Matrix read_matrix_bin(const std::filesystem::path& path);

/// Reads .csv or .bin based on extension.
Matrix read_matrix(const std::filesystem::path& path);

/// Loads an ordered list of matrices: either every A_*.bin / A_*.csv in a
/// directory (sorted by name) or one concatenated file of m stacked n x n
/// blocks.
std::vector<Matrix> read_matrix_list(const std::filesystem::path& path);

/// {"manifold": name, "shape": [rows, cols], "data": row-major floats}
json point_to_json(const Manifold& m, const Point& x);
Point point_from_json(const Manifold& m, const json& j);
json tangent_to_json(const Manifold& m, const Tangent& v);
Tangent tangent_from_json(const Manifold& m, const json& j);

void write_text(const std::filesystem::path& path, const std::string& content);
std::string read_text(const std::filesystem::path& path);

/// FNV-1a over the raw float64 bytes; instance fingerprint for manifests.
std::uint64_t fnv1a(std::uint64_t h, const void* data, std::size_t bytes);
std::uint64_t hash_matrix(std::uint64_t h, const Matrix& m);
std::string hash_hex(std::uint64_t h);

inline constexpr std::uint64_t kFnvOffset = 1469598103934665603ull;

}  // namespace riemflow
