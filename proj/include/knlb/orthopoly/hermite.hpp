#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace knlb::orthopoly {

// He_degree(x) for the probabilist's Hermite polynomials, by the three-term
// recurrence He_{k+1}(x) = x He_k(x) - k He_{k-1}(x).
double hermite_eval(int degree, double x);

// Writes He_0(x) .. He_{max_degree}(x) into out (size max_degree + 1).
void hermite_eval_all(int max_degree, double x, std::span<double> out);

// E[z^k] for z ~ N(0, 1): (k-1)!! for even k, 0 for odd k.
double gaussian_moment(int k);

// Monomial coefficients of He_0 .. He_max, row l holding He_l(x) = sum_i row[i] x^i.
class HermiteTable {
 public:
  explicit HermiteTable(int max_degree);

  int max_degree() const { return max_degree_; }
  std::span<const double> row(int degree) const;

  // Horner evaluation of row `degree`; used as an independent check on the recurrence.
  double eval_monomial(int degree, double x) const;

 private:
  int max_degree_;
  std::vector<std::vector<double>> rows_;
};

// c_{k,l} = E[z^l He_k(z)] / k!, so that x^l = sum_k c_{k,l} He_k(x).
// Obtained from the integer recursion E[z^l He_k] = E[z^{l-1} He_{k+1}] + k E[z^{l-1} He_{k-1}].
// Returns the vector indexed by k = 0..l.
std::vector<double> monomial_hermite_coeffs(int degree);

struct HermiteTerm {
  int degree;
  double coeff;
};

// Expansion He_l(gamma x) = sum_k coeff_k He_{l - 2k}(x),
// coeff_k = l! gamma^{l-2k} (gamma^2 - 1)^k / (2^k k! (l-2k)!). Terms ordered by k.
std::vector<HermiteTerm> hermite_mult_coeffs(int degree, double gamma);

}  // namespace knlb::orthopoly
