#pragma once

#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace knlb::orthopoly {

// Number of degree-l spherical harmonics in d variables:
// B(d, 0) = 1, B(d, l) = (2l + d - 2)/l * binom(l + d - 3, l - 1).
// Throws std::overflow_error if the count does not fit in 64 bits.
std::uint64_t sph_harm_dim(int d, int degree);

// Same count in floating point; never overflows for moderate arguments.
double sph_harm_dim_real(int d, int degree);

// Gegenbauer polynomials Q_l^{(d)} on [-d, d], normalized so that Q_l(d) = 1 and
// E[Q_k(<x, y>) Q_l(<x, y>)] = delta_kl / B(d, l) for x, y uniform on the sphere of
// radius sqrt(d). Implemented as C_l^{(d-2)/2}(t/d) / C_l^{(d-2)/2}(1) through the
// normalized recurrence
//   (k + d - 2) Q_{k+1}(t) = (2k + d - 2)(t/d) Q_k(t) - k Q_{k-1}(t).
class GegenbauerBasis {
 public:
  GegenbauerBasis(int d, int max_degree);

  int dim() const { return d_; }
  int max_degree() const { return max_degree_; }

  // Throws std::domain_error when |t| > d.
  double eval(int degree, double t) const;

  // Q_0(t) .. Q_{max_degree}(t).
  void eval_all(double t, std::span<double> out) const;

 private:
  int d_;
  int max_degree_;
  std::vector<double> a_;  // (2k + d - 2) / (k + d - 2)
  std::vector<double> b_;  // k / (k + d - 2)
};

class QuadratureError : public std::runtime_error {
 public:
  QuadratureError(const std::string& what, double achieved)
      : std::runtime_error(what), achieved_(achieved) {}
  double achieved_error() const { return achieved_; }

 private:
  double achieved_;
};

struct ProjectionCoeffs {
  std::vector<double> coeffs;  // indexed by j = 0..max_j
  double max_error_estimate = 0.0;
};

// c_{j,l}^{(d)} = B(d, j) E[<x, e_1>^l Q_j(sqrt(d) <x, e_1>)] for x uniform on the
// sphere of radius sqrt(d), by adaptive Gauss-Kronrod quadrature against the
// marginal density of <x, e_1>/sqrt(d), proportional to (1 - s^2)^{(d-3)/2} on [-1, 1].
// Coefficients with j > l or j + l odd are exactly zero.
ProjectionCoeffs gegenbauer_proj_coeffs(int d, int degree, int max_j, double rel_tol = 1e-8);

}  // namespace knlb::orthopoly
