#include "knlb/spectral/spectral.hpp"

#include <algorithm>
#include <cmath>

namespace knlb::spectral {

double op_norm_dense(const SymMatrix& a) {
  if (a.size() == 0) return 0.0;
  const auto ev = jacobi_eigenvalues(a);
  return std::max(std::abs(ev.front()), std::abs(ev.back()));
}

double op_norm(const SymMatrix& a, double rel_tol) {
  return a.size() <= kDenseThreshold ? op_norm_dense(a) : op_norm_lanczos(a, rel_tol);
}

double min_eig(const SymMatrix& a, double rel_tol) {
  if (a.size() == 0) return 0.0;
  if (a.size() <= kDenseThreshold) return jacobi_eigenvalues(a).front();
  return min_eig_lanczos(a, rel_tol);
}

double frobenius(const SymMatrix& a) {
  double s = 0.0;
  for (double x : a.values()) s += x * x;
  return std::sqrt(s);
}

SymMatrix offdiag(const SymMatrix& a) {
  SymMatrix out = a;
  for (std::size_t i = 0; i < a.size(); ++i) out.at_raw(i, i) = 0.0;
  return out;
}

std::vector<double> diag_part(const SymMatrix& a) {
  std::vector<double> d(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) d[i] = a(i, i);
  return d;
}

}  // namespace knlb::spectral
