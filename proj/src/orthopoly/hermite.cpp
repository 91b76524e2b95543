#include "knlb/orthopoly/hermite.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace knlb::orthopoly {

namespace {

void require_degree(int degree) {
  if (degree < 0) throw std::invalid_argument("negative polynomial degree: " + std::to_string(degree));
}

}  // namespace

double hermite_eval(int degree, double x) {
  require_degree(degree);
  if (degree == 0) return 1.0;
  double prev = 1.0, cur = x;
  for (int k = 1; k < degree; ++k) {
    const double next = x * cur - k * prev;
    prev = cur;
    cur = next;
  }
  return cur;
}

void hermite_eval_all(int max_degree, double x, std::span<double> out) {
  require_degree(max_degree);
  if (out.size() < std::size_t(max_degree) + 1) throw std::invalid_argument("hermite_eval_all: output too small");
  out[0] = 1.0;
  if (max_degree == 0) return;
  out[1] = x;
  for (int k = 1; k < max_degree; ++k) out[k + 1] = x * out[k] - k * out[k - 1];
}

double gaussian_moment(int k) {
  if (k < 0) throw std::invalid_argument("negative moment order");
  if (k % 2 == 1) return 0.0;
  double m = 1.0;
  for (int i = k - 1; i > 1; i -= 2) m *= i;
  return m;
}

HermiteTable::HermiteTable(int max_degree) : max_degree_(max_degree) {
  require_degree(max_degree);
  rows_.resize(std::size_t(max_degree) + 1);
  rows_[0] = {1.0};
  if (max_degree >= 1) rows_[1] = {0.0, 1.0};
  for (int l = 1; l < max_degree; ++l) {
    std::vector<double> next(std::size_t(l) + 2, 0.0);
    for (int i = 0; i <= l; ++i) next[i + 1] += rows_[l][i];
    for (int i = 0; i <= l - 1; ++i) next[i] -= l * rows_[l - 1][i];
    rows_[l + 1] = std::move(next);
  }
}

std::span<const double> HermiteTable::row(int degree) const {
  if (degree < 0 || degree > max_degree_)
    throw std::out_of_range("HermiteTable row " + std::to_string(degree) + " beyond max degree " +
                            std::to_string(max_degree_));
  return rows_[degree];
}

double HermiteTable::eval_monomial(int degree, double x) const {
  const auto r = row(degree);
  double acc = 0.0;
  for (std::size_t i = r.size(); i-- > 0;) acc = acc * x + r[i];
  return acc;
}

std::vector<double> monomial_hermite_coeffs(int degree) {
  require_degree(degree);
  // moments[k] = E[z^m He_k(z)] for the current m, k = 0..degree + 1.
  std::vector<double> moments(std::size_t(degree) + 2, 0.0);
  moments[0] = 1.0;
  for (int m = 1; m <= degree; ++m) {
    std::vector<double> next(moments.size(), 0.0);
    for (int k = 0; k <= degree; ++k) {
      double v = moments[k + 1];
      if (k > 0) v += k * moments[k - 1];
      next[k] = v;
    }
    moments = std::move(next);
  }
  std::vector<double> c(std::size_t(degree) + 1, 0.0);
  double factorial = 1.0;
  for (int k = 0; k <= degree; ++k) {
    if (k > 0) factorial *= k;
    c[k] = moments[k] / factorial;
  }
  return c;
}

std::vector<HermiteTerm> hermite_mult_coeffs(int degree, double gamma) {
  require_degree(degree);
  std::vector<HermiteTerm> terms;
  const double g2m1 = gamma * gamma - 1.0;
  for (int k = 0; 2 * k <= degree; ++k) {
    // l! / (2^k k! (l-2k)!) as a running product keeps every step an integer.
    double ratio = 1.0;
    for (int i = degree - 2 * k + 1; i <= degree; ++i) ratio *= i;
    for (int i = 1; i <= k; ++i) ratio /= 2.0 * i;
    const double coeff = ratio * std::pow(gamma, degree - 2 * k) * std::pow(g2m1, k);
    terms.push_back({degree - 2 * k, coeff});
  }
  return terms;
}

}  // namespace knlb::orthopoly
