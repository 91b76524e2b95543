#include "knlb/sampling/sampling.hpp"

#include <cmath>

#include "knlb/sampling/rng.hpp"
#include "knlb/simd/kernels.hpp"

namespace knlb {

DataMatrix::DataMatrix(std::size_t rows, std::size_t cols, std::vector<double> values, DataMeta meta)
    : rows_(rows), cols_(cols), values_(std::move(values)), meta_(meta) {
  if (values_.size() != rows_ * cols_) throw std::invalid_argument("DataMatrix: value count does not match shape");
}

DataMatrix sample_gaussian(std::size_t n, const CovarianceSpec& spec, std::uint64_t seed, std::uint64_t stream) {
  if (n == 0) throw std::invalid_argument("sample_gaussian: n must be >= 1");
  const std::size_t d = spec.dim();
  const auto& s = spec.sqrt_eigenvalues();
  RandomStream rng(seed, stream);
  std::vector<double> v(n * d);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < d; ++j) v[i * d + j] = s[j] * rng.gaussian();
  return DataMatrix(n, d, std::move(v), {DistributionKind::gaussian, seed, stream});
}

DataMatrix sample_sphere(std::size_t n, std::size_t d, std::uint64_t seed, std::uint64_t stream) {
  if (n == 0) throw std::invalid_argument("sample_sphere: n must be >= 1");
  if (d < 2) throw std::invalid_argument("sample_sphere: d must be >= 2");
  RandomStream rng(seed, stream);
  std::vector<double> v(n * d);
  const double radius = std::sqrt(double(d));
  const auto& k = simd::active();
  for (std::size_t i = 0; i < n; ++i) {
    double* row = v.data() + i * d;
    double nrm2 = 0.0;
    while (!(nrm2 > 0.0)) {
      for (std::size_t j = 0; j < d; ++j) row[j] = rng.gaussian();
      nrm2 = k.dot(row, row, d);
    }
    const double scale = radius / std::sqrt(nrm2);
    for (std::size_t j = 0; j < d; ++j) row[j] *= scale;
  }
  return DataMatrix(n, d, std::move(v), {DistributionKind::sphere, seed, stream});
}

PolarPair polar_decompose(const DataMatrix& x) {
  const std::size_t n = x.rows(), d = x.cols();
  PolarPair out;
  out.norms.resize(n);
  std::vector<double> u(n * d);
  for (std::size_t i = 0; i < n; ++i) {
    const auto r = x.row(i);
    double s = 0.0;
    for (double v : r) s += v * v;
    const double nrm = std::sqrt(s);
    if (!(nrm > 0.0)) throw ZeroRowError(i);
    out.norms[i] = nrm;
    for (std::size_t j = 0; j < d; ++j) u[i * d + j] = r[j] / nrm;
  }
  out.directions = DataMatrix(n, d, std::move(u), x.meta());
  return out;
}

Sampler Sampler::gaussian(CovarianceSpec spec) { return Sampler(DistributionKind::gaussian, std::move(spec)); }

Sampler Sampler::sphere(std::size_t d) { return Sampler(DistributionKind::sphere, CovarianceSpec::identity(d)); }

DataMatrix Sampler::draw(std::size_t n, std::uint64_t seed, std::uint64_t stream) const {
  if (kind_ == DistributionKind::sphere) return sample_sphere(n, spec_.dim(), seed, stream);
  return sample_gaussian(n, spec_, seed, stream);
}

}  // namespace knlb
