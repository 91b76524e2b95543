#pragma once

#include <cstdint>
#include <span>

#include "knlb/kernelmat/row_kernel.hpp"
#include "knlb/kernelmat/sym_matrix.hpp"
#include "knlb/sampling/covariance.hpp"
#include "knlb/sampling/sampling.hpp"

namespace knlb {

// E_{y ~ N(0, Sigma)} He_l(<x, y> / sqrt(tau2)).
double conditional_mean_hermite(std::span<const double> x, int degree, const CovarianceSpec& spec);

// E_{y ~ N(0, Sigma)} He_l(<x1, y>/sqrt(tau2)) He_l'(<y, x3>/sqrt(tau2)); zero when l' - l is odd.
double conditional_correlation_hermite(std::span<const double> x1, std::span<const double> x3, int degree,
                                       int degree2, const CovarianceSpec& spec);

// G_ij = E_z[k(x_i, z) k(z, x_j)] for the degree-l Hermite kernel, diagonal included.
SymMatrix correlation_G_hermite(const DataMatrix& x, int degree, const CovarianceSpec& spec);

// Same for the Gegenbauer kernel on sphere data: G_ij = Q_l(<x_i, x_j>) / B(d, l).
SymMatrix correlation_G_gegenbauer(const DataMatrix& u, int degree);

// Closed form when one exists for (kernel, sampler); throws std::invalid_argument otherwise.
bool has_closed_form_G(const RowKernel& k, const Sampler& sampler);
SymMatrix correlation_G_closed(const DataMatrix& x, const RowKernel& k, const Sampler& sampler);

struct McMatrix {
  SymMatrix value;
  SymMatrix std_error;
};

// G^_ij = (1/m) sum_s k(x_i, z_s) k(z_s, x_j) over one shared set of z draws
// (rows of z). Entries are therefore correlated with each other; the standard
// errors are per entry.
McMatrix correlation_G_mc(const DataMatrix& x, const RowKernel& k, const DataMatrix& z);
McMatrix correlation_G_mc(const DataMatrix& x, const RowKernel& k, const Sampler& sampler, std::size_t m,
                          std::uint64_t seed, std::uint64_t stream);

// E_x[k(z, x)] for x drawn from the sampler. Closed form for Hermite/Gaussian,
// Gegenbauer/sphere and constant kernels; nested Monte Carlo (m_inner draws
// from the given stream) otherwise.
class ConditionalMean {
 public:
  ConditionalMean(const RowKernel& k, const Sampler& sampler, std::size_t m_inner, std::uint64_t seed,
                  std::uint64_t stream);
  bool exact() const { return exact_; }
  double operator()(std::span<const double> z) const;

 private:
  RowKernel k_;
  Sampler sampler_;
  bool exact_;
  DataMatrix inner_;
};

inline constexpr std::size_t kDefaultInnerMc = 2000;

}  // namespace knlb
