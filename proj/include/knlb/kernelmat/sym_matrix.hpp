#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

namespace knlb {

enum class MatrixTag : std::uint8_t { K = 0, K_bar = 1, Delta = 2, Delta_tilde = 3, G = 4, M = 5, other = 6 };

std::string to_string(MatrixTag tag);

// Dense symmetric n x n matrix with full row-major storage (both triangles kept,
// so row slices feed the SIMD matvec directly).
class SymMatrix {
 public:
  SymMatrix() = default;
  explicit SymMatrix(std::size_t n, MatrixTag tag = MatrixTag::other);
  SymMatrix(std::size_t n, std::vector<double> values, MatrixTag tag = MatrixTag::other);

  std::size_t size() const { return n_; }
  MatrixTag tag() const { return tag_; }
  void set_tag(MatrixTag tag) { tag_ = tag; }

  double operator()(std::size_t i, std::size_t j) const { return v_[i * n_ + j]; }
  // Writes both (i, j) and (j, i).
  void set(std::size_t i, std::size_t j, double value) {
    v_[i * n_ + j] = value;
    v_[j * n_ + i] = value;
  }
  double& at_raw(std::size_t i, std::size_t j) { return v_[i * n_ + j]; }

  const double* data() const { return v_.data(); }
  double* data() { return v_.data(); }
  std::span<const double> row(std::size_t i) const { return {v_.data() + i * n_, n_}; }
  const std::vector<double>& values() const { return v_; }

  // max |A_ij - A_ji|
  double asymmetry() const;
  bool all_finite() const;

  // y = A x
  void multiply(std::span<const double> x, std::span<double> y) const;

  SymMatrix& operator+=(const SymMatrix& o);
  SymMatrix& operator-=(const SymMatrix& o);
  SymMatrix& operator*=(double c);

  static SymMatrix identity(std::size_t n);
  static SymMatrix constant(std::size_t n, double c);

 private:
  std::size_t n_ = 0;
  std::vector<double> v_;
  MatrixTag tag_ = MatrixTag::other;
};

SymMatrix operator-(SymMatrix a, const SymMatrix& b);
SymMatrix operator+(SymMatrix a, const SymMatrix& b);

namespace io {

// Binary dump: the 32-byte KNLB header (distribution tag 0xFFFF, rows = cols = n),
// one byte of MatrixTag, then n * n float64 values row-major.
void write_sym_matrix(std::ostream& os, const SymMatrix& a, std::uint64_t seed = 0);
SymMatrix read_sym_matrix(std::istream& is);
void write_sym_matrix_file(const std::string& path, const SymMatrix& a, std::uint64_t seed = 0);
SymMatrix read_sym_matrix_file(const std::string& path);

// Debug CSV; refuses n > 200.
void write_sym_matrix_csv(std::ostream& os, const SymMatrix& a);

}  // namespace io

}  // namespace knlb
