#include "mtrsvd/io.hpp"

#include <charconv>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace mtrsvd::io {

std::string format_double(double v) {
  char buf[64];
  // %.17g always round-trips; trim to %.15g / %.16g when they do too.
  for (int prec = 15; prec <= 17; ++prec) {
    std::snprintf(buf, sizeof(buf), "%.*g", prec, v);
    double back = 0.0;
    std::sscanf(buf, "%lf", &back);
    if (back == v) break;
  }
  return buf;
}

void write_matrix_market(const std::filesystem::path& path, const Matrix& A) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open for writing: " + path.string());
  out << "%%MatrixMarket matrix array real general\n";
  out << A.rows() << " " << A.cols() << "\n";
  for (Index j = 0; j < A.cols(); ++j) {
    for (Index i = 0; i < A.rows(); ++i) {
      out << format_double(A(i, j)) << "\n";
    }
  }
}

Matrix read_matrix_market(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open: " + path.string());
  std::string header;
  std::getline(in, header);
  if (header.rfind("%%MatrixMarket", 0) != 0) {
    throw std::runtime_error("not a MatrixMarket file: " + path.string());
  }
  const bool coordinate = header.find("coordinate") != std::string::npos;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line[0] != '%') break;
  }
  std::istringstream sizes(line);
  Index rows = 0, cols = 0;
  sizes >> rows >> cols;
  if (rows < 1 || cols < 1) {
    throw std::runtime_error("bad MatrixMarket size line in " + path.string());
  }
  Matrix A = Matrix::Zero(rows, cols);
  if (coordinate) {
    long long nnz = 0;
    sizes >> nnz;
    for (long long e = 0; e < nnz; ++e) {
      Index i = 0, j = 0;
      double v = 0.0;
      if (!(in >> i >> j >> v)) {
        throw std::runtime_error("truncated MatrixMarket file: " + path.string());
      }
      A(i - 1, j - 1) = v;
    }
  } else {
    for (Index j = 0; j < cols; ++j) {
      for (Index i = 0; i < rows; ++i) {
        double v = 0.0;
        if (!(in >> v)) {
          throw std::runtime_error("truncated MatrixMarket file: " + path.string());
        }
        A(i, j) = v;
      }
    }
  }
  return A;
}

void write_vector(const std::filesystem::path& path, const Vector& v) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open for writing: " + path.string());
  for (Index i = 0; i < v.size(); ++i) {
    out << format_double(v(i)) << "\n";
  }
}

Vector read_vector(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open: " + path.string());
  std::vector<double> values;
  double v = 0.0;
  while (in >> v) values.push_back(v);
  Vector out(static_cast<Index>(values.size()));
  for (std::size_t i = 0; i < values.size(); ++i) {
    out(static_cast<Index>(i)) = values[i];
  }
  return out;
}

std::vector<std::vector<std::string>> read_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open: " + path.string());
  std::vector<std::vector<std::string>> rows;
  std::string line;
  std::size_t line_number = 0;
  while (std::getline(in, line)) {
    ++line_number;
    if (line.empty()) continue;
    std::vector<std::string> fields;
    std::size_t start = 0;
    while (true) {
      const std::size_t comma = line.find(',', start);
      fields.push_back(line.substr(start, comma - start));
      if (comma == std::string::npos) break;
      start = comma + 1;
    }
    if (!rows.empty() && fields.size() != rows.front().size()) {
      throw std::runtime_error("malformed CSV at " + path.string() + ":" +
                               std::to_string(line_number));
    }
    rows.push_back(std::move(fields));
  }
  return rows;
}

}  // namespace mtrsvd::io
