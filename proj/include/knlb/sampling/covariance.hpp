#pragma once

#include <cstddef>
#include <vector>

namespace knlb {

struct EffectiveDims {
  double tau1, tau2, tau3, tau4;
  double R;  // tau2^2 / tau4
};

// Diagonal covariance Sigma = diag(eigenvalues).
class CovarianceSpec {
 public:
  explicit CovarianceSpec(std::vector<double> eigenvalues);

  static CovarianceSpec identity(std::size_t d);
  // lambda_i = i^exponent for i = 1..d, rescaled so that ||Sigma|| = 1.
  static CovarianceSpec power_law(std::size_t d, double exponent);

  std::size_t dim() const { return eig_.size(); }
  const std::vector<double>& eigenvalues() const { return eig_; }
  const std::vector<double>& sqrt_eigenvalues() const { return sqrt_eig_; }

  // tr(Sigma^k)
  double tau(int k) const;
  double op_norm() const { return op_norm_; }
  bool is_identity() const;
  bool invertible() const;

  // Quadratic forms for diagonal Sigma.
  double quad(const double* x, const double* y) const;  // x^T Sigma y
  double quad(const double* x) const { return quad(x, x); }

 private:
  std::vector<double> eig_;
  std::vector<double> sqrt_eig_;
  double tau_[4];
  double op_norm_;
};

// Throws std::domain_error if tau4 == 0.
EffectiveDims effective_dims(const CovarianceSpec& spec);

}  // namespace knlb
