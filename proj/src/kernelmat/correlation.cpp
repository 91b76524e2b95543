#include "knlb/kernelmat/correlation.hpp"

#include <cmath>
#include <stdexcept>
#include <vector>

#include "knlb/kernelmat/builders.hpp"
#include "knlb/orthopoly/gegenbauer.hpp"
#include "knlb/simd/kernels.hpp"

namespace knlb {

namespace {

double factorial(int k) { return std::tgamma(double(k) + 1.0); }

double int_pow(double x, int k) {
  double r = 1.0;
  for (int i = 0; i < k; ++i) r *= x;
  return r;
}

// Closed-form Hermite correlation in terms of a1 = x1'Sx1/tau2 - 1, a3 = x3'Sx3/tau2 - 1, s = x1'Sx3/tau2.
double correlation_core(int l, int lp, double a1, double a3, double s) {
  if (l > lp) {
    std::swap(l, lp);
    std::swap(a1, a3);
  }
  if ((lp - l) % 2 != 0) return 0.0;
  const int h = (lp - l) / 2;
  const double lf = factorial(l) * factorial(lp);
  double acc = 0.0;
  for (int j = 0; j <= l / 2; ++j) {
    const double coeff =
        lf / (std::ldexp(1.0, 2 * j + h) * factorial(j) * factorial(h + j) * factorial(l - 2 * j));
    acc += coeff * int_pow(a1, j) * int_pow(a3, h + j) * int_pow(s, l - 2 * j);
  }
  return acc;
}

}  // namespace

double conditional_mean_hermite(std::span<const double> x, int degree, const CovarianceSpec& spec) {
  if (degree < 0) throw std::invalid_argument("negative degree");
  if (x.size() != spec.dim()) throw std::invalid_argument("dimension mismatch");
  if (degree % 2) return 0.0;
  const int h = degree / 2;
  const double a = spec.quad(x.data()) / spec.tau(2) - 1.0;
  return factorial(degree) / (std::ldexp(1.0, h) * factorial(h)) * int_pow(a, h);
}

double conditional_correlation_hermite(std::span<const double> x1, std::span<const double> x3, int degree,
                                       int degree2, const CovarianceSpec& spec) {
  if (degree < 0 || degree2 < 0) throw std::invalid_argument("negative degree");
  if (x1.size() != spec.dim() || x3.size() != spec.dim()) throw std::invalid_argument("dimension mismatch");
  const double t2 = spec.tau(2);
  return correlation_core(degree, degree2, spec.quad(x1.data()) / t2 - 1.0, spec.quad(x3.data()) / t2 - 1.0,
                          spec.quad(x1.data(), x3.data()) / t2);
}

SymMatrix correlation_G_hermite(const DataMatrix& x, int degree, const CovarianceSpec& spec) {
  if (x.cols() != spec.dim()) throw std::invalid_argument("dimension mismatch");
  const std::size_t n = x.rows(), d = x.cols();
  const double t2 = spec.tau(2);
  // Whitened-by-Sigma^{1/2} rows turn every quadratic form into a plain Gram.
  std::vector<double> w(n * d);
  const auto& se = spec.sqrt_eigenvalues();
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t k = 0; k < d; ++k) w[i * d + k] = x(i, k) * se[k];
  SymMatrix q = gram(DataMatrix(n, d, std::move(w), x.meta()));
  std::vector<double> a(n);
  for (std::size_t i = 0; i < n; ++i) a[i] = q(i, i) / t2 - 1.0;
  SymMatrix g(n, MatrixTag::G);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i; j < n; ++j) g.set(i, j, correlation_core(degree, degree, a[i], a[j], q(i, j) / t2));
  return g;
}

SymMatrix correlation_G_gegenbauer(const DataMatrix& u, int degree) {
  const int d = int(u.cols());
  SymMatrix g = build_kernel_matrix(u, RowKernel::gegenbauer(degree, d), false);
  g *= 1.0 / orthopoly::sph_harm_dim_real(d, degree);
  g.set_tag(MatrixTag::G);
  return g;
}

bool has_closed_form_G(const RowKernel& k, const Sampler& sampler) {
  switch (k.kind()) {
    case RowKernel::Kind::hermite:
      return sampler.kind() == DistributionKind::gaussian;
    case RowKernel::Kind::gegenbauer:
      return sampler.kind() == DistributionKind::sphere;
    case RowKernel::Kind::constant:
      return true;
    case RowKernel::Kind::inner_product:
      return false;
  }
  return false;
}

SymMatrix correlation_G_closed(const DataMatrix& x, const RowKernel& k, const Sampler& sampler) {
  if (!has_closed_form_G(k, sampler)) throw std::invalid_argument("no closed-form G for " + k.describe());
  switch (k.kind()) {
    case RowKernel::Kind::hermite:
      return correlation_G_hermite(x, k.degree(), sampler.spec());
    case RowKernel::Kind::gegenbauer:
      return correlation_G_gegenbauer(x, k.degree());
    default: {
      SymMatrix g = SymMatrix::constant(x.rows(), k.scale() * k.scale());
      g.set_tag(MatrixTag::G);
      return g;
    }
  }
}

McMatrix correlation_G_mc(const DataMatrix& x, const RowKernel& k, const DataMatrix& z) {
  if (x.cols() != z.cols()) throw std::invalid_argument("correlation_G_mc: dimension mismatch");
  const std::size_t n = x.rows(), d = x.cols(), m = z.rows();
  if (m < 2) throw std::invalid_argument("correlation_G_mc needs at least two z draws");
  const auto& simd = simd::active();
  constexpr std::size_t chunk = 2048;
  std::vector<double> sum(n * n, 0.0), sum2(n * n, 0.0), tmp(n * n);
  std::vector<double> kz, kz2;  // n x c, row-major
  std::vector<double> cg;
  for (std::size_t s0 = 0; s0 < m; s0 += chunk) {
    const std::size_t c = std::min(chunk, m - s0);
    cg.resize(n * c);
    simd.cross_gram(x.data(), n, z.data() + s0 * d, c, d, cg.data(), c);
    kz.resize(n * c);
    k.map(cg, kz);
    kz2.resize(n * c);
    for (std::size_t t = 0; t < n * c; ++t) kz2[t] = kz[t] * kz[t];
    simd.gram(kz.data(), n, c, tmp.data());
    for (std::size_t t = 0; t < n * n; ++t) sum[t] += tmp[t];
    simd.gram(kz2.data(), n, c, tmp.data());
    for (std::size_t t = 0; t < n * n; ++t) sum2[t] += tmp[t];
  }
  McMatrix out{SymMatrix(n, MatrixTag::G), SymMatrix(n)};
  const double md = double(m);
  for (std::size_t t = 0; t < n * n; ++t) {
    const double mean = sum[t] / md;
    const double var = std::max(0.0, sum2[t] / md - mean * mean) * md / (md - 1.0);
    out.value.data()[t] = mean;
    out.std_error.data()[t] = std::sqrt(var / md);
  }
  return out;
}

McMatrix correlation_G_mc(const DataMatrix& x, const RowKernel& k, const Sampler& sampler, std::size_t m,
                          std::uint64_t seed, std::uint64_t stream) {
  return correlation_G_mc(x, k, sampler.draw(m, seed, stream));
}

ConditionalMean::ConditionalMean(const RowKernel& k, const Sampler& sampler, std::size_t m_inner,
                                 std::uint64_t seed, std::uint64_t stream)
    : k_(k), sampler_(sampler), exact_(has_closed_form_G(k, sampler)) {
  if (!exact_) inner_ = sampler.draw(m_inner, seed, stream);
}

double ConditionalMean::operator()(std::span<const double> z) const {
  if (exact_) {
    switch (k_.kind()) {
      case RowKernel::Kind::hermite:
        return conditional_mean_hermite(z, k_.degree(), sampler_.spec());
      case RowKernel::Kind::gegenbauer:
        return k_.degree() == 0 ? 1.0 : 0.0;
      default:
        return k_.scale();
    }
  }
  const auto& simd = simd::active();
  const std::size_t m = inner_.rows(), d = inner_.cols();
  std::vector<double> t(m);
  simd.cross_gram(z.data(), 1, inner_.data(), m, d, t.data(), m);
  k_.map(t, t);
  double acc = 0.0;
  for (double v : t) acc += v;
  return acc / double(m);
}

}  // namespace knlb
