#include "riemflow/io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace riemflow {

namespace fs = std::filesystem;

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  char buf[40];
  // shortest representation that parses back exactly
  for (int prec = 15; prec <= 17; ++prec) {
    std::snprintf(buf, sizeof buf, "%.*g", prec, v);
    if (std::strtod(buf, nullptr) == v) return buf;
  }
  return buf;
}

void write_matrix_csv(const fs::path& path, const Matrix& m) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open for writing: " + path.string());
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      if (j) out << ',';
      out << format_double(m(i, j));
    }
    out << '\n';
  }
}

Matrix read_matrix_csv(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open: " + path.string());
  std::vector<std::vector<double>> rows;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<double> row;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) row.push_back(std::strtod(cell.c_str(), nullptr));
    if (!rows.empty() && row.size() != rows.front().size())
      throw std::runtime_error("ragged CSV matrix: " + path.string());
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw std::runtime_error("empty CSV matrix: " + path.string());
  Matrix m(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(rows[0].size()));
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = 0; j < m.cols(); ++j)
      m(i, j) = rows[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
  return m;
}

namespace {
constexpr char kMagic[8] = {'R', 'F', 'M', 'A', 'T', '0', '0', '1'};
}

void write_matrix_bin(const fs::path& path, const Matrix& m) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open for writing: " + path.string());
  out.write(kMagic, sizeof kMagic);
  const std::int64_t rows = m.rows(), cols = m.cols();
  out.write(reinterpret_cast<const char*>(&rows), sizeof rows);
  out.write(reinterpret_cast<const char*>(&cols), sizeof cols);
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      const double v = m(i, j);
      out.write(reinterpret_cast<const char*>(&v), sizeof v);
    }
}

Matrix read_matrix_bin(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open: " + path.string());
  char magic[8];
  in.read(magic, sizeof magic);
  if (!in || std::memcmp(magic, kMagic, sizeof kMagic) != 0)
    throw std::runtime_error("not a matrix file: " + path.string());
  std::int64_t rows = 0, cols = 0;
  in.read(reinterpret_cast<char*>(&rows), sizeof rows);
  in.read(reinterpret_cast<char*>(&cols), sizeof cols);
  if (!in || rows <= 0 || cols <= 0)
    throw std::runtime_error("bad matrix header: " + path.string());
  Matrix m(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i)
    for (Eigen::Index j = 0; j < cols; ++j) {
      double v;
      in.read(reinterpret_cast<char*>(&v), sizeof v);
      if (!in) throw std::runtime_error("truncated matrix file: " + path.string());
      m(i, j) = v;
    }
  return m;
}

Matrix read_matrix(const fs::path& path) {
  if (path.extension() == ".csv") return read_matrix_csv(path);
  return read_matrix_bin(path);
}

std::vector<Matrix> read_matrix_list(const fs::path& path) {
  std::vector<Matrix> mats;
  if (fs::is_directory(path)) {
    std::vector<fs::path> files;
    for (const auto& entry : fs::directory_iterator(path)) {
      const std::string name = entry.path().filename().string();
      if (name.rfind("A_", 0) == 0 &&
          (entry.path().extension() == ".bin" || entry.path().extension() == ".csv"))
        files.push_back(entry.path());
    }
    std::sort(files.begin(), files.end());
    for (const auto& f : files) mats.push_back(read_matrix(f));
    if (mats.empty())
      throw std::runtime_error("no A_*.bin or A_*.csv matrices in " + path.string());
    return mats;
  }
  // concatenated file: m square blocks of size cols stacked vertically
  Matrix all = read_matrix(path);
  const Eigen::Index n = all.cols();
  if (n == 0 || all.rows() % n != 0)
    throw std::runtime_error("concatenated matrix file must stack square blocks: " +
                             path.string());
  for (Eigen::Index i = 0; i < all.rows(); i += n) mats.push_back(all.block(i, 0, n, n));
  return mats;
}

json point_to_json(const Manifold& m, const Point& x) {
  json j;
  j["manifold"] = m.name();
  j["shape"] = {x.coords.rows(), x.coords.cols()};
  std::vector<double> data;
  data.reserve(static_cast<std::size_t>(x.coords.size()));
  for (Eigen::Index i = 0; i < x.coords.rows(); ++i)
    for (Eigen::Index k = 0; k < x.coords.cols(); ++k) data.push_back(x.coords(i, k));
  j["data"] = data;
  return j;
}

namespace {

Matrix matrix_from_json(const Manifold& m, const json& j, const char* what) {
  if (j.at("manifold").get<std::string>() != m.name())
    throw std::invalid_argument(std::string(what) + ": manifold name mismatch");
  const auto shape = j.at("shape").get<std::vector<Eigen::Index>>();
  if (shape.size() != 2) throw std::invalid_argument(std::string(what) + ": bad shape");
  const auto data = j.at("data").get<std::vector<double>>();
  if (static_cast<Eigen::Index>(data.size()) != shape[0] * shape[1])
    throw std::invalid_argument(std::string(what) + ": data length does not match shape");
  Matrix out(shape[0], shape[1]);
  std::size_t idx = 0;
  for (Eigen::Index i = 0; i < shape[0]; ++i)
    for (Eigen::Index k = 0; k < shape[1]; ++k) out(i, k) = data[idx++];
  return out;
}

}  // namespace

Point point_from_json(const Manifold& m, const json& j) {
  Point x{matrix_from_json(m, j, "point_from_json")};
  m.validate_point(x);
  return x;
}

json tangent_to_json(const Manifold& m, const Tangent& v) {
  json j = point_to_json(m, Point{v.components});
  j["base"] = point_to_json(m, v.base);
  return j;
}

Tangent tangent_from_json(const Manifold& m, const json& j) {
  Point base = point_from_json(m, j.at("base"));
  Tangent v{base, matrix_from_json(m, j, "tangent_from_json")};
  m.validate_tangent(base, v);
  return v;
}

void write_text(const fs::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open for writing: " + path.string());
  out << content;
}

std::string read_text(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open: " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::uint64_t fnv1a(std::uint64_t h, const void* data, std::size_t bytes) {
  const auto* p = static_cast<const unsigned char*>(data);
  for (std::size_t i = 0; i < bytes; ++i) {
    h ^= p[i];
    h *= 1099511628211ull;
  }
  return h;
}

std::uint64_t hash_matrix(std::uint64_t h, const Matrix& m) {
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      const double v = m(i, j);
      h = fnv1a(h, &v, sizeof v);
    }
  return h;
}

std::string hash_hex(std::uint64_t h) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace riemflow
