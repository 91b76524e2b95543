#include "knlb/orthopoly/gegenbauer.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>
#include <limits>

namespace knlb::orthopoly {

namespace {

void require_dim(int d) {
  if (d < 3) throw std::invalid_argument("Gegenbauer basis needs d >= 3, got " + std::to_string(d));
}

}  // namespace

std::uint64_t sph_harm_dim(int d, int degree) {
  require_dim(d);
  if (degree < 0) throw std::invalid_argument("negative degree");
  if (degree == 0) return 1;
  using u128 = unsigned __int128;
  constexpr u128 kMax = std::numeric_limits<std::uint64_t>::max();
  // binom(l + d - 3, l - 1), built as a product of exact partial binomials.
  const std::uint64_t top = std::uint64_t(degree) + std::uint64_t(d) - 3;
  const std::uint64_t k = std::uint64_t(degree) - 1;
  u128 binom = 1;
  for (std::uint64_t i = 1; i <= k; ++i) {
    binom = binom * (top - k + i) / i;
    if (binom > kMax) throw std::overflow_error("B(d, l) overflows 64 bits");
  }
  const u128 num = binom * u128(2 * std::uint64_t(degree) + std::uint64_t(d) - 2);
  const u128 b = num / u128(degree);
  if (b > kMax) throw std::overflow_error("B(d, l) overflows 64 bits");
  return std::uint64_t(b);
}

double sph_harm_dim_real(int d, int degree) {
  require_dim(d);
  if (degree < 0) throw std::invalid_argument("negative degree");
  if (degree == 0) return 1.0;
  const double lb = std::lgamma(double(degree + d - 2)) - std::lgamma(double(degree)) -
                    std::lgamma(double(d - 1));
  return double(2 * degree + d - 2) / degree * std::exp(lb);
}

GegenbauerBasis::GegenbauerBasis(int d, int max_degree) : d_(d), max_degree_(max_degree) {
  require_dim(d);
  if (max_degree < 0) throw std::invalid_argument("negative degree");
  a_.resize(std::size_t(max_degree) + 1);
  b_.resize(std::size_t(max_degree) + 1);
  for (int k = 0; k <= max_degree; ++k) {
    a_[k] = double(2 * k + d - 2) / double(k + d - 2);
    b_[k] = double(k) / double(k + d - 2);
  }
}

double GegenbauerBasis::eval(int degree, double t) const {
  if (degree < 0 || degree > max_degree_)
    throw std::out_of_range("Gegenbauer degree " + std::to_string(degree) + " outside basis");
  if (!(std::abs(t) <= double(d_)))
    throw std::domain_error("Gegenbauer argument " + std::to_string(t) + " outside [-d, d]");
  const double s = t / d_;
  if (degree == 0) return 1.0;
  double prev = 1.0, cur = s;
  for (int k = 1; k < degree; ++k) {
    const double next = a_[k] * s * cur - b_[k] * prev;
    prev = cur;
    cur = next;
  }
  return cur;
}

void GegenbauerBasis::eval_all(double t, std::span<double> out) const {
  if (out.size() < std::size_t(max_degree_) + 1) throw std::invalid_argument("eval_all: output too small");
  if (!(std::abs(t) <= double(d_)))
    throw std::domain_error("Gegenbauer argument " + std::to_string(t) + " outside [-d, d]");
  const double s = t / d_;
  out[0] = 1.0;
  if (max_degree_ == 0) return;
  out[1] = s;
  for (int k = 1; k < max_degree_; ++k) out[k + 1] = a_[k] * s * out[k] - b_[k] * out[k - 1];
}

ProjectionCoeffs gegenbauer_proj_coeffs(int d, int degree, int max_j, double rel_tol) {
  require_dim(d);
  if (degree < 0 || max_j < 0) throw std::invalid_argument("negative degree");
  if (max_j > degree) throw std::invalid_argument("max_j must not exceed the monomial degree");

  using boost::math::quadrature::gauss_kronrod;
  const double half_exp = 0.5 * (d - 3);
  const double sqrt_d = std::sqrt(double(d));
  auto weight = [half_exp](double s) {
    const double u = 1.0 - s * s;
    return u <= 0.0 ? 0.0 : std::pow(u, half_exp);
  };
  const int max_depth = 30;
  double norm_err = 0.0;
  const double norm = gauss_kronrod<double, 61>::integrate(weight, -1.0, 1.0, max_depth, rel_tol * 1e-2, &norm_err);

  GegenbauerBasis basis(d, max_j);
  ProjectionCoeffs out;
  out.coeffs.assign(std::size_t(max_j) + 1, 0.0);
  for (int j = 0; j <= max_j; ++j) {
    if ((j + degree) % 2 != 0) continue;
    auto integrand = [&](double s) {
      return std::pow(sqrt_d * s, degree) * basis.eval(j, d * s) * weight(s);
    };
    double err = 0.0, l1 = 0.0;
    const double value =
        gauss_kronrod<double, 61>::integrate(integrand, -1.0, 1.0, max_depth, rel_tol * 1e-2, &err, &l1);
    // Cancellation makes the value much smaller than the L1 mass for j > 0, so the
    // error is judged against the L1 norm of the integrand.
    const double rel = l1 > 0.0 ? err / l1 : 0.0;
    if (!(rel <= rel_tol) || !std::isfinite(value))
      throw QuadratureError("c_{" + std::to_string(j) + "," + std::to_string(degree) +
                                "} quadrature did not converge (relative error " + std::to_string(rel) + ")",
                            rel);
    out.max_error_estimate = std::max(out.max_error_estimate, rel);
    out.coeffs[j] = sph_harm_dim_real(d, j) * value / norm;
  }
  return out;
}

}  // namespace knlb::orthopoly
