#include "knlb/kernelmat/builders.hpp"

#include <stdexcept>

#include "knlb/simd/kernels.hpp"

namespace knlb {

SymMatrix gram(const DataMatrix& x) {
  SymMatrix g(x.rows());
  simd::active().gram(x.data(), x.rows(), x.cols(), g.data());
  return g;
}

std::vector<double> cross_gram(const DataMatrix& a, const DataMatrix& b) {
  if (a.cols() != b.cols()) throw std::invalid_argument("cross_gram: dimension mismatch");
  std::vector<double> out(a.rows() * b.rows());
  simd::active().cross_gram(a.data(), a.rows(), b.data(), b.rows(), a.cols(), out.data(), b.rows());
  return out;
}

SymMatrix build_K(const DataMatrix& x, const KernelFunction& f, double tau1) {
  return build_K_from_gram(gram(x), f, tau1);
}

SymMatrix build_K_from_gram(const SymMatrix& g, const KernelFunction& f, double tau1) {
  SymMatrix k = build_kernel_matrix_from_gram(g, RowKernel::inner_product(f, tau1));
  k.set_tag(MatrixTag::K);
  return k;
}

SymMatrix build_kernel_matrix(const DataMatrix& x, const RowKernel& k, bool zero_diagonal) {
  return build_kernel_matrix_from_gram(gram(x), k, zero_diagonal);
}

SymMatrix build_kernel_matrix_from_gram(const SymMatrix& g, const RowKernel& k, bool zero_diagonal) {
  const std::size_t n = g.size();
  SymMatrix out(n, zero_diagonal ? MatrixTag::Delta : MatrixTag::K);
  k.map(g.values(), {out.data(), n * n});
  if (zero_diagonal)
    for (std::size_t i = 0; i < n; ++i) out.at_raw(i, i) = 0.0;
  return out;
}

SymMatrix build_hermite_delta(const DataMatrix& x, int degree, double tau2) {
  return build_hermite_delta_from_gram(gram(x), degree, tau2);
}

SymMatrix build_hermite_delta_from_gram(const SymMatrix& g, int degree, double tau2) {
  return build_kernel_matrix_from_gram(g, RowKernel::hermite(degree, tau2), true);
}

SymMatrix hermite_matrix_from_gram(const SymMatrix& g, int degree, double tau2) {
  SymMatrix h = build_kernel_matrix_from_gram(g, RowKernel::hermite(degree, tau2), false);
  h.set_tag(MatrixTag::other);
  return h;
}

SymMatrix build_gegenbauer_delta(const DataMatrix& u, int degree) {
  return build_kernel_matrix_from_gram(gram(u), RowKernel::gegenbauer(degree, int(u.cols())), true);
}

SymMatrix build_decoupled_delta(const DataMatrix& x, const DataMatrix& x_tilde, const RowKernel& k) {
  if (x.rows() != x_tilde.rows() || x.cols() != x_tilde.cols())
    throw std::invalid_argument("build_decoupled_delta: shape mismatch");
  const std::size_t n = x.rows();
  std::vector<double> c = cross_gram(x, x_tilde);  // c[i n + j] = <x_i, x~_j>
  k.map(c, c);
  SymMatrix out(n, MatrixTag::Delta_tilde);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) out.set(i, j, 0.5 * (c[i * n + j] + c[j * n + i]));
  return out;
}

SymMatrix build_decoupled_delta(const DataMatrix& x, const DataMatrix& x_tilde, const EntryFn& k) {
  if (x.rows() != x_tilde.rows() || x.cols() != x_tilde.cols())
    throw std::invalid_argument("build_decoupled_delta: shape mismatch");
  const std::size_t n = x.rows();
  SymMatrix out(n, MatrixTag::Delta_tilde);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      out.set(i, j, 0.5 * (k(x.row(i), x_tilde.row(j)) + k(x.row(j), x_tilde.row(i))));
  return out;
}

SymMatrix hadamard(const SymMatrix& a, const SymMatrix& b) {
  if (a.size() != b.size()) throw std::invalid_argument("hadamard: order mismatch");
  SymMatrix out(a.size());
  const std::size_t nn = a.size() * a.size();
  for (std::size_t k = 0; k < nn; ++k) out.data()[k] = a.data()[k] * b.data()[k];
  return out;
}

}  // namespace knlb
