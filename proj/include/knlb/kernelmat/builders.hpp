#pragma once

#include <functional>
#include <span>
#include <vector>

#include "knlb/kernelmat/kernel_function.hpp"
#include "knlb/kernelmat/row_kernel.hpp"
#include "knlb/kernelmat/sym_matrix.hpp"
#include "knlb/sampling/sampling.hpp"

namespace knlb {

using EntryFn = std::function<double(std::span<const double>, std::span<const double>)>;

// X X^T
SymMatrix gram(const DataMatrix& x);

// Row-major a.rows() x b.rows() matrix of inner products.
std::vector<double> cross_gram(const DataMatrix& a, const DataMatrix& b);

// K_ij = f(<x_i, x_j> / tau1), diagonal included.
SymMatrix build_K(const DataMatrix& x, const KernelFunction& f, double tau1);
SymMatrix build_K_from_gram(const SymMatrix& g, const KernelFunction& f, double tau1);

// A_ij = k(x_i, x_j); diagonal zeroed on request.
SymMatrix build_kernel_matrix(const DataMatrix& x, const RowKernel& k, bool zero_diagonal = false);
SymMatrix build_kernel_matrix_from_gram(const SymMatrix& g, const RowKernel& k, bool zero_diagonal = false);

// Delta_ij = He_l(<x_i, x_j> / sqrt(tau2)) for i != j, zero diagonal.
SymMatrix build_hermite_delta(const DataMatrix& x, int degree, double tau2);
SymMatrix build_hermite_delta_from_gram(const SymMatrix& g, int degree, double tau2);

// H_ij = He_k(<x_i, x_j> / sqrt(tau2)), diagonal kept.
SymMatrix hermite_matrix_from_gram(const SymMatrix& g, int degree, double tau2);

// Delta_ij = Q_l^{(d)}(<x_i, x_j>) for i != j, zero diagonal; rows on the sphere of
// radius sqrt(d).
SymMatrix build_gegenbauer_delta(const DataMatrix& u, int degree);

// Delta~_ij = (k(x_i, x~_j) + k(x_j, x~_i)) / 2 for i != j, zero diagonal.
SymMatrix build_decoupled_delta(const DataMatrix& x, const DataMatrix& x_tilde, const RowKernel& k);
SymMatrix build_decoupled_delta(const DataMatrix& x, const DataMatrix& x_tilde, const EntryFn& k);

SymMatrix hadamard(const SymMatrix& a, const SymMatrix& b);

}  // namespace knlb
