#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "knlb/sampling/covariance.hpp"

namespace knlb {

enum class DistributionKind : std::uint16_t { gaussian = 1, sphere = 2 };

struct DataMeta {
  DistributionKind distribution = DistributionKind::gaussian;
  std::uint64_t seed = 0;
  std::uint64_t stream = 0;
};

// n x d sample batch, row-major, immutable once produced by a sampler.
class DataMatrix {
 public:
  DataMatrix() = default;
  DataMatrix(std::size_t rows, std::size_t cols, std::vector<double> values, DataMeta meta);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  const DataMeta& meta() const { return meta_; }
  std::span<const double> row(std::size_t i) const { return {values_.data() + i * cols_, cols_}; }
  const double* data() const { return values_.data(); }
  const std::vector<double>& values() const { return values_; }
  double operator()(std::size_t i, std::size_t j) const { return values_[i * cols_ + j]; }

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> values_;
  DataMeta meta_;
};

// Rows i.i.d. N(0, Sigma) for diagonal Sigma: standard normals scaled by sqrt(lambda_j).
DataMatrix sample_gaussian(std::size_t n, const CovarianceSpec& spec, std::uint64_t seed, std::uint64_t stream);

// Rows i.i.d. uniform on the sphere of radius sqrt(d).
DataMatrix sample_sphere(std::size_t n, std::size_t d, std::uint64_t seed, std::uint64_t stream);

class ZeroRowError : public std::invalid_argument {
 public:
  explicit ZeroRowError(std::size_t row)
      : std::invalid_argument("zero row at index " + std::to_string(row)), row_(row) {}
  std::size_t row() const { return row_; }

 private:
  std::size_t row_;
};

struct PolarPair {
  std::vector<double> norms;  // r_i = ||x_i||
  DataMatrix directions;      // u_i = x_i / r_i
};

PolarPair polar_decompose(const DataMatrix& x);

// A data distribution plus the covariance used by closed forms. Sphere data is
// isotropic with E[x x^T] = I, so its spec is the identity.
class Sampler {
 public:
  static Sampler gaussian(CovarianceSpec spec);
  static Sampler sphere(std::size_t d);

  DistributionKind kind() const { return kind_; }
  std::size_t dim() const { return spec_.dim(); }
  const CovarianceSpec& spec() const { return spec_; }

  DataMatrix draw(std::size_t n, std::uint64_t seed, std::uint64_t stream) const;

 private:
  Sampler(DistributionKind kind, CovarianceSpec spec) : kind_(kind), spec_(std::move(spec)) {}
  DistributionKind kind_;
  CovarianceSpec spec_;
};

}  // namespace knlb
