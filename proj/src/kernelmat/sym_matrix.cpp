#include "knlb/kernelmat/sym_matrix.hpp"

#include <cmath>
#include <fstream>
#include <iomanip>
#include <stdexcept>

#include "knlb/sampling/binary_io.hpp"
#include "knlb/simd/kernels.hpp"

namespace knlb {

std::string to_string(MatrixTag tag) {
  switch (tag) {
    case MatrixTag::K:
      return "K";
    case MatrixTag::K_bar:
      return "K_bar";
    case MatrixTag::Delta:
      return "Delta";
    case MatrixTag::Delta_tilde:
      return "Delta_tilde";
    case MatrixTag::G:
      return "G";
    case MatrixTag::M:
      return "M";
    case MatrixTag::other:
      return "other";
  }
  return "other";
}

SymMatrix::SymMatrix(std::size_t n, MatrixTag tag) : n_(n), v_(n * n, 0.0), tag_(tag) {}

SymMatrix::SymMatrix(std::size_t n, std::vector<double> values, MatrixTag tag)
    : n_(n), v_(std::move(values)), tag_(tag) {
  if (v_.size() != n * n) throw std::invalid_argument("SymMatrix: value count does not match order");
}

double SymMatrix::asymmetry() const {
  double worst = 0.0;
  for (std::size_t i = 0; i < n_; ++i)
    for (std::size_t j = i + 1; j < n_; ++j) worst = std::max(worst, std::abs(v_[i * n_ + j] - v_[j * n_ + i]));
  return worst;
}

bool SymMatrix::all_finite() const {
  for (double x : v_)
    if (!std::isfinite(x)) return false;
  return true;
}

void SymMatrix::multiply(std::span<const double> x, std::span<double> y) const {
  if (x.size() != n_ || y.size() != n_) throw std::invalid_argument("SymMatrix::multiply: size mismatch");
  simd::active().symv(v_.data(), n_, x.data(), y.data());
}

SymMatrix& SymMatrix::operator+=(const SymMatrix& o) {
  if (o.n_ != n_) throw std::invalid_argument("SymMatrix: order mismatch");
  for (std::size_t k = 0; k < v_.size(); ++k) v_[k] += o.v_[k];
  return *this;
}

SymMatrix& SymMatrix::operator-=(const SymMatrix& o) {
  if (o.n_ != n_) throw std::invalid_argument("SymMatrix: order mismatch");
  for (std::size_t k = 0; k < v_.size(); ++k) v_[k] -= o.v_[k];
  return *this;
}

SymMatrix& SymMatrix::operator*=(double c) {
  for (double& x : v_) x *= c;
  return *this;
}

SymMatrix SymMatrix::identity(std::size_t n) {
  SymMatrix a(n);
  for (std::size_t i = 0; i < n; ++i) a.v_[i * n + i] = 1.0;
  return a;
}

SymMatrix SymMatrix::constant(std::size_t n, double c) {
  SymMatrix a(n);
  std::fill(a.v_.begin(), a.v_.end(), c);
  return a;
}

SymMatrix operator-(SymMatrix a, const SymMatrix& b) { return a -= b; }
SymMatrix operator+(SymMatrix a, const SymMatrix& b) { return a += b; }

namespace io {

void write_sym_matrix(std::ostream& os, const SymMatrix& a, std::uint64_t seed) {
  write_header(os, {kFormatVersion, kMatrixDistributionTag, a.size(), a.size(), seed});
  const auto tag = static_cast<std::uint8_t>(a.tag());
  os.write(reinterpret_cast<const char*>(&tag), 1);
  write_f64(os, a.data(), a.size() * a.size());
}

SymMatrix read_sym_matrix(std::istream& is) {
  const BinaryHeader h = read_header(is);
  if (h.distribution != kMatrixDistributionTag || h.rows != h.cols)
    throw std::runtime_error("binary dump does not hold a symmetric matrix");
  std::uint8_t tag = 0;
  is.read(reinterpret_cast<char*>(&tag), 1);
  if (!is || tag > std::uint8_t(MatrixTag::other)) throw std::runtime_error("bad matrix tag in dump");
  std::vector<double> v(h.rows * h.rows);
  read_f64(is, v.data(), v.size());
  return SymMatrix(h.rows, std::move(v), MatrixTag(tag));
}

void write_sym_matrix_file(const std::string& path, const SymMatrix& a, std::uint64_t seed) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw std::runtime_error("cannot open " + path + " for writing");
  write_sym_matrix(os, a, seed);
}

SymMatrix read_sym_matrix_file(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw std::runtime_error("cannot open " + path);
  return read_sym_matrix(is);
}

void write_sym_matrix_csv(std::ostream& os, const SymMatrix& a) {
  if (a.size() > 200) throw std::invalid_argument("CSV export is limited to n <= 200");
  os << std::setprecision(17);
  for (std::size_t i = 0; i < a.size(); ++i) {
    for (std::size_t j = 0; j < a.size(); ++j) {
      if (j) os << ',';
      os << a(i, j);
    }
    os << '\n';
  }
}

}  // namespace io

}  // namespace knlb
