#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <limits>

#include "knlb/sampling/rng.hpp"
#include "knlb/simd/kernels.hpp"
#include "knlb/spectral/spectral.hpp"

namespace knlb::spectral {

namespace {

constexpr std::uint64_t kLanczosStream = 0x4c414e43;  // "LANC"

struct RitzCheck {
  double lo, hi;
  double err;  // relative error estimate of the worse extreme
};

RitzCheck check_ritz(const std::vector<double>& alpha, const std::vector<double>& beta, std::size_t k,
                     double beta_last) {
  Eigen::VectorXd diag(k), sub(k > 1 ? k - 1 : 0);
  for (std::size_t i = 0; i < k; ++i) diag[Eigen::Index(i)] = alpha[i];
  for (std::size_t i = 0; i + 1 < k; ++i) sub[Eigen::Index(i)] = beta[i];
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es;
  es.computeFromTridiagonal(diag, sub, Eigen::ComputeEigenvectors);
  const auto& th = es.eigenvalues();
  const auto& s = es.eigenvectors();
  const Eigen::Index last = Eigen::Index(k) - 1;
  const double scale = std::max({std::abs(th[0]), std::abs(th[last]), std::numeric_limits<double>::min()});
  // Residual bound r and the gap-refined bound r^2 / gap, whichever is smaller.
  auto err = [&](Eigen::Index idx, Eigen::Index nb) {
    const double r = std::abs(beta_last * s(last, idx));
    double e = r;
    if (k > 1) {
      const double gap = std::abs(th[idx] - th[nb]);
      if (gap > 0) e = std::min(e, r * r / gap);
    }
    return e / scale;
  };
  const double e_lo = err(0, std::min<Eigen::Index>(1, last));
  const double e_hi = err(last, std::max<Eigen::Index>(last - 1, 0));
  return {th[0], th[last], std::max(e_lo, e_hi)};
}

}  // namespace

LanczosResult lanczos_extremes(const SymMatrix& a, double rel_tol, std::uint64_t start_seed) {
  const std::size_t n = a.size();
  if (n == 0) return {0.0, 0.0, 0.0, 0};
  const auto& simd = simd::active();

  std::vector<double> basis;  // row j holds v_j
  basis.reserve(std::min<std::size_t>(n, 64) * n);
  std::vector<double> alpha, beta;
  std::vector<double> v(n), w(n);

  RandomStream rng(start_seed, kLanczosStream);
  for (double& x : v) x = rng.gaussian();
  double nv = std::sqrt(simd.dot(v.data(), v.data(), n));
  for (double& x : v) x /= nv;

  double anorm = 0.0;
  for (double x : a.values()) anorm = std::max(anorm, std::abs(x));
  const double breakdown = 1e-13 * std::max(anorm, 1e-300) * double(n);

  RitzCheck rc{0, 0, std::numeric_limits<double>::infinity()};
  for (std::size_t j = 0; j < n; ++j) {
    basis.insert(basis.end(), v.begin(), v.end());
    a.multiply(v, w);
    const double aj = simd.dot(v.data(), w.data(), n);
    alpha.push_back(aj);
    simd.axpy(-aj, v.data(), w.data(), n);
    if (j > 0) simd.axpy(-beta[j - 1], basis.data() + (j - 1) * n, w.data(), n);
    // Full reorthogonalization, two passes.
    for (int pass = 0; pass < 2; ++pass) {
      for (std::size_t i = 0; i <= j; ++i) {
        const double* vi = basis.data() + i * n;
        simd.axpy(-simd.dot(vi, w.data(), n), vi, w.data(), n);
      }
    }
    const double bj = std::sqrt(simd.dot(w.data(), w.data(), n));
    const std::size_t k = j + 1;
    const bool exhausted = bj <= breakdown || k == n;
    if (exhausted || k % 4 == 0 || k <= 2) {
      rc = check_ritz(alpha, beta, k, exhausted ? 0.0 : bj);
      if (exhausted || rc.err <= rel_tol) return {rc.lo, rc.hi, exhausted ? 0.0 : rc.err, k};
    }
    beta.push_back(bj);
    for (std::size_t i = 0; i < n; ++i) v[i] = w[i] / bj;
  }
  throw ConvergenceError("lanczos did not converge", rc.err);
}

double op_norm_lanczos(const SymMatrix& a, double rel_tol) {
  double best = 0.0;
  for (std::uint64_t s = 1; s <= 3; ++s) {
    const auto r = lanczos_extremes(a, rel_tol, s);
    best = std::max({best, std::abs(r.min_eig), std::abs(r.max_eig)});
  }
  return best;
}

double min_eig_lanczos(const SymMatrix& a, double rel_tol) {
  double best = std::numeric_limits<double>::infinity();
  for (std::uint64_t s = 1; s <= 3; ++s) best = std::min(best, lanczos_extremes(a, rel_tol, s).min_eig);
  return best;
}

}  // namespace knlb::spectral
