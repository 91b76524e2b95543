#include "knlb/kernelmat/approximation.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "knlb/kernelmat/builders.hpp"
#include "knlb/orthopoly/gegenbauer.hpp"
#include "knlb/orthopoly/hermite.hpp"

namespace knlb {

namespace {

double factorial(int k) { return std::tgamma(double(k) + 1.0); }

void require_order(const KernelFunction& f, int order) {
  if (f.max_order() < order) throw InsufficientDerivatives(order, f.max_order());
}

}  // namespace

SymMatrix build_K_bar_aniso(const DataMatrix& x, const KernelFunction& f, const Rational& q,
                            const CovarianceSpec& spec) {
  if (x.cols() != spec.dim()) throw std::invalid_argument("build_K_bar_aniso: dimension mismatch");
  return build_K_bar_aniso_from_gram(gram(x), f, q, spec);
}

SymMatrix build_K_bar_aniso_from_gram(const SymMatrix& g, const KernelFunction& f, const Rational& q,
                                      const CovarianceSpec& spec) {
  if (q.num() <= 0) throw std::invalid_argument("q must be positive");
  const int low = int(q.floor_four_thirds_q());
  const int high = int(q.floor_two_q());
  require_order(f, high);
  const double tau1 = spec.tau(1), tau2 = spec.tau(2);

  // Taylor part: sum_{l <= low} a_l t^l with a_l = f^{(l)}(0) / (l! tau1^l).
  std::vector<double> a(std::size_t(low) + 1);
  for (int l = 0; l <= low; ++l) a[l] = f.deriv0(l) / (factorial(l) * std::pow(tau1, l));

  // Band part collapsed onto Hermite degrees k <= low: b_k = sum_l a_l tau2^{l/2} c_{kl}.
  std::vector<double> b(std::size_t(low) + 1, 0.0);
  bool has_band = false;
  for (int l = low + 1; l <= high; ++l) {
    const double al = f.deriv0(l) / (factorial(l) * std::pow(tau1, l)) * std::pow(tau2, 0.5 * l);
    const auto c = orthopoly::monomial_hermite_coeffs(l);
    for (int k = 0; k <= low && k <= l; ++k) b[k] += al * c[k];
    has_band = true;
  }

  double shift = f.at_one();
  for (int j = 0; j <= low; ++j) shift -= f.deriv0(j) / factorial(j);

  const std::size_t n = g.size();
  const double inv_sqrt_tau2 = 1.0 / std::sqrt(tau2);
  std::vector<double> he(std::size_t(low) + 1);
  SymMatrix out(n, MatrixTag::K_bar);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i; j < n; ++j) {
      const double t = g(i, j);
      double v = 0.0;
      for (int l = low; l >= 0; --l) v = v * t + a[l];
      if (has_band) {
        orthopoly::hermite_eval_all(low, t * inv_sqrt_tau2, he);
        for (int k = 0; k <= low; ++k) v += b[k] * he[k];
      }
      if (i == j) v += shift;
      out.set(i, j, v);
    }
  }
  return out;
}

SymMatrix build_K_bar_iso(const DataMatrix& x, const KernelFunction& f, const Rational& q) {
  for (std::size_t i = 0; i < x.rows(); ++i) {
    double s = 0.0;
    for (double v : x.row(i)) s += v * v;
    if (s == 0.0) throw ZeroRowError(i);
  }
  return build_K_bar_iso_from_gram(gram(x), x.cols(), f, q);
}

SymMatrix build_K_bar_iso_from_gram(const SymMatrix& g, std::size_t d, const KernelFunction& f,
                                    const Rational& q) {
  if (q.num() <= 0) throw std::invalid_argument("q must be positive");
  const int top = int(q.floor_two_q());
  const int jmax = int(q.floor_q());
  require_order(f, top);
  const int di = int(d);
  const double dd = double(d);

  // coef[l][j] = f^{(l)}(0) / (l! d^{l/2}) c_{jl}^{(d)}
  std::vector<std::vector<double>> coef(std::size_t(top) + 1);
  for (int l = 0; l <= top; ++l) {
    const int mj = std::min(jmax, l);
    const auto c = orthopoly::gegenbauer_proj_coeffs(di, l, mj).coeffs;
    const double s = f.deriv0(l) / (factorial(l) * std::pow(dd, 0.5 * l));
    coef[l].resize(std::size_t(mj) + 1);
    for (int j = 0; j <= mj; ++j) coef[l][j] = s * c[j];
  }
  double shift = f.at_one();
  for (int j = 0; j <= jmax; ++j) shift -= f.deriv0(j) / factorial(j);

  const std::size_t n = g.size();
  std::vector<double> r(n);
  for (std::size_t i = 0; i < n; ++i) {
    if (!(g(i, i) > 0)) throw ZeroRowError(i);
    r[i] = std::sqrt(g(i, i));
  }
  const orthopoly::GegenbauerBasis basis(di, jmax);
  std::vector<double> qv(std::size_t(jmax) + 1);
  SymMatrix out(n, MatrixTag::K_bar);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t k = i; k < n; ++k) {
      // d <u_i, u_k>, clamped against rounding just past +-d.
      double s = dd * g(i, k) / (r[i] * r[k]);
      s = std::clamp(s, -dd, dd);
      basis.eval_all(s, qv);
      const double rho = r[i] * r[k] / dd;
      double v = 0.0, rp = 1.0;
      for (int l = 0; l <= top; ++l) {
        double inner = 0.0;
        for (std::size_t j = 0; j < coef[l].size(); ++j) inner += coef[l][j] * qv[j];
        v += rp * inner;
        rp *= rho;
      }
      if (i == k) v += shift;
      out.set(i, k, v);
    }
  }
  return out;
}

}  // namespace knlb
