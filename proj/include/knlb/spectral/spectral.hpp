#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "knlb/kernelmat/sym_matrix.hpp"

namespace knlb::spectral {

class ConvergenceError : public std::runtime_error {
 public:
  ConvergenceError(const std::string& what, double achieved)
      : std::runtime_error(what + " (achieved residual " + std::to_string(achieved) + ")"), achieved_(achieved) {}
  double achieved_residual() const { return achieved_; }

 private:
  double achieved_;
};

inline constexpr double kDefaultRelTol = 1e-6;

// Orders up to this use the dense Jacobi path; larger ones use Lanczos.
inline constexpr std::size_t kDenseThreshold = 64;

// All eigenvalues by cyclic Jacobi rotations, ascending. O(n^3) per sweep; the
// independent reference for the iterative path.
std::vector<double> jacobi_eigenvalues(const SymMatrix& a, double tol = 1e-14, int max_sweeps = 100);

struct LanczosResult {
  double min_eig;
  double max_eig;
  double residual;  // worst of the two extreme Ritz error estimates, relative to max |theta|
  std::size_t iterations;
};

// One Lanczos run with full reorthogonalization from a seeded random start.
// Stops once both extreme Ritz values meet rel_tol; throws ConvergenceError if
// they do not within n iterations.
LanczosResult lanczos_extremes(const SymMatrix& a, double rel_tol, std::uint64_t start_seed);

// max_i |lambda_i(A)|. Lanczos takes the max over three seeded starts.
double op_norm(const SymMatrix& a, double rel_tol = kDefaultRelTol);
double min_eig(const SymMatrix& a, double rel_tol = kDefaultRelTol);

// Force a particular path regardless of the order.
double op_norm_dense(const SymMatrix& a);
double op_norm_lanczos(const SymMatrix& a, double rel_tol = kDefaultRelTol);
double min_eig_lanczos(const SymMatrix& a, double rel_tol = kDefaultRelTol);

double frobenius(const SymMatrix& a);
// diag_perp(A): A with its diagonal set to zero.
SymMatrix offdiag(const SymMatrix& a);
std::vector<double> diag_part(const SymMatrix& a);

}  // namespace knlb::spectral
