#include "knlb/sampling/covariance.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace knlb {

CovarianceSpec::CovarianceSpec(std::vector<double> eigenvalues) : eig_(std::move(eigenvalues)) {
  if (eig_.empty()) throw std::invalid_argument("covariance needs at least one eigenvalue");
  for (std::size_t i = 0; i < eig_.size(); ++i)
    if (!(eig_[i] >= 0.0) || !std::isfinite(eig_[i]))
      throw std::invalid_argument("covariance eigenvalue " + std::to_string(i) + " is negative or not finite");
  sqrt_eig_.resize(eig_.size());
  std::transform(eig_.begin(), eig_.end(), sqrt_eig_.begin(), [](double v) { return std::sqrt(v); });
  for (int k = 1; k <= 4; ++k) {
    double s = 0.0;
    for (double v : eig_) s += std::pow(v, k);
    tau_[k - 1] = s;
  }
  op_norm_ = *std::max_element(eig_.begin(), eig_.end());
}

CovarianceSpec CovarianceSpec::identity(std::size_t d) { return CovarianceSpec(std::vector<double>(d, 1.0)); }

CovarianceSpec CovarianceSpec::power_law(std::size_t d, double exponent) {
  std::vector<double> ev(d);
  for (std::size_t i = 0; i < d; ++i) ev[i] = std::pow(double(i + 1), exponent);
  const double top = *std::max_element(ev.begin(), ev.end());
  for (double& v : ev) v /= top;
  return CovarianceSpec(std::move(ev));
}

double CovarianceSpec::tau(int k) const {
  if (k >= 1 && k <= 4) return tau_[k - 1];
  if (k < 1) throw std::invalid_argument("tau(k) needs k >= 1");
  double s = 0.0;
  for (double v : eig_) s += std::pow(v, k);
  return s;
}

bool CovarianceSpec::is_identity() const {
  return std::all_of(eig_.begin(), eig_.end(), [](double v) { return v == 1.0; });
}

bool CovarianceSpec::invertible() const {
  return std::all_of(eig_.begin(), eig_.end(), [](double v) { return v > 0.0; });
}

double CovarianceSpec::quad(const double* x, const double* y) const {
  double s = 0.0;
  for (std::size_t i = 0; i < eig_.size(); ++i) s += eig_[i] * x[i] * y[i];
  return s;
}

EffectiveDims effective_dims(const CovarianceSpec& spec) {
  const double t4 = spec.tau(4);
  if (!(t4 > 0.0)) throw std::domain_error("effective dimension R undefined: tau4 = 0");
  const double t2 = spec.tau(2);
  return {spec.tau(1), t2, spec.tau(3), t4, t2 * t2 / t4};
}

}  // namespace knlb
