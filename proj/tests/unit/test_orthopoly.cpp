#include <cmath>
#include <random>

#include "doctest.h"
#include "knlb/orthopoly/coeff_table.hpp"
#include "knlb/orthopoly/gegenbauer.hpp"
#include "knlb/orthopoly/hermite.hpp"
#include "knlb/sampling/sampling.hpp"
#include "knlb/util/stats.hpp"

using namespace knlb;
using namespace knlb::orthopoly;

namespace {

// Exact E[z^k] by the double factorial, kept separate from the library's version.
double moment(int k) {
  if (k % 2) return 0.0;
  double r = 1.0;
  for (int i = k - 1; i > 0; i -= 2) r *= i;
  return r;
}

double binom(int n, int k) {
  if (k < 0 || k > n) return 0.0;
  return std::round(std::exp(std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0)));
}

}  // namespace

TEST_CASE("hermite_eval examples") {
  CHECK(hermite_eval(0, 7.3) == 1.0);
  CHECK(hermite_eval(2, 1.5) == doctest::Approx(1.25));
  CHECK(hermite_eval(4, 0.0) == doctest::Approx(3.0));
  CHECK(hermite_eval(3, 2.0) == doctest::Approx(8.0 - 6.0));
}

TEST_CASE("hermite recurrence holds on random points") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(-5, 5);
  for (int l = 1; l <= 12; ++l)
    for (int s = 0; s < 100; ++s) {
      const double x = u(rng);
      const double next = hermite_eval(l + 1, x);
      CHECK(std::abs(next - x * hermite_eval(l, x) + l * hermite_eval(l - 1, x)) <= 1e-9 * (1 + std::abs(next)));
    }
}

TEST_CASE("HermiteTable rows") {
  const HermiteTable t(8);
  REQUIRE(t.row(0).size() == 1);
  CHECK(t.row(0)[0] == 1.0);
  REQUIRE(t.row(1).size() == 2);
  CHECK(t.row(1)[0] == 0.0);
  CHECK(t.row(1)[1] == 1.0);
  for (int l = 0; l <= 8; ++l) {
    CHECK(t.row(l).back() == 1.0);
    for (double x : {-2.3, 0.1, 1.7}) CHECK(t.eval_monomial(l, x) == doctest::Approx(hermite_eval(l, x)).epsilon(1e-12));
  }
  // He_4 = x^4 - 6x^2 + 3
  const auto r4 = t.row(4);
  CHECK(r4[0] == 3.0);
  CHECK(r4[2] == -6.0);
  CHECK(r4[1] == 0.0);
}

TEST_CASE("monomial_hermite_coeffs examples and moment oracle") {
  CHECK(monomial_hermite_coeffs(1) == std::vector<double>{0, 1});
  CHECK(monomial_hermite_coeffs(2) == std::vector<double>{1, 0, 1});
  CHECK(monomial_hermite_coeffs(3) == std::vector<double>{0, 3, 0, 1});
  const HermiteTable t(10);
  for (int l = 0; l <= 10; ++l) {
    const auto c = monomial_hermite_coeffs(l);
    REQUIRE(c.size() == std::size_t(l + 1));
    for (int k = 0; k <= l; ++k) {
      // c_{kl} = E[z^l He_k] / k! expanded through the monomial table.
      double e = 0.0;
      const auto row = t.row(k);
      for (std::size_t i = 0; i < row.size(); ++i) e += row[i] * moment(l + int(i));
      CHECK(c[k] == doctest::Approx(e / std::tgamma(k + 1.0)).epsilon(1e-12));
      if ((k + l) % 2) CHECK(c[k] == 0.0);
    }
  }
}

TEST_CASE("monomial reconstruction") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(-5, 5);
  for (int l = 0; l <= 10; ++l) {
    const auto c = monomial_hermite_coeffs(l);
    for (int s = 0; s < 100; ++s) {
      const double x = u(rng);
      double acc = 0.0;
      for (int k = 0; k <= l; ++k) acc += c[k] * hermite_eval(k, x);
      CHECK(std::abs(std::pow(x, l) - acc) <= 1e-8 * (1 + std::pow(std::abs(x), l)));
    }
  }
}

TEST_CASE("hermite multiplication") {
  SUBCASE("identity scaling") {
    const auto t = hermite_mult_coeffs(3, 1.0);
    double other = 0.0;
    for (const auto& term : t) {
      if (term.degree == 3) CHECK(term.coeff == doctest::Approx(1.0));
      else other += std::abs(term.coeff);
    }
    CHECK(other == 0.0);
  }
  SUBCASE("degree two") {
    const double g = 1.7;
    const auto t = hermite_mult_coeffs(2, g);
    REQUIRE(t.size() == 2);
    CHECK(t[0].degree == 2);
    CHECK(t[0].coeff == doctest::Approx(g * g));
    CHECK(t[1].degree == 0);
    CHECK(t[1].coeff == doctest::Approx(g * g - 1));
  }
  SUBCASE("l=4, gamma=2 at x=0.7") {
    double acc = 0.0;
    for (const auto& term : hermite_mult_coeffs(4, 2.0)) acc += term.coeff * hermite_eval(term.degree, 0.7);
    CHECK(acc == doctest::Approx(hermite_eval(4, 1.4)).epsilon(1e-12));
  }
  SUBCASE("pointwise property") {
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> u(-4, 4);
    for (double g : {0.3, 1.0, 2.5})
      for (int l = 0; l <= 8; ++l)
        for (int s = 0; s < 30; ++s) {
          const double x = u(rng);
          double acc = 0.0;
          for (const auto& term : hermite_mult_coeffs(l, g)) acc += term.coeff * hermite_eval(term.degree, x);
          const double direct = hermite_eval(l, g * x);
          CHECK(std::abs(acc - direct) <= 1e-9 * std::max(1.0, std::abs(direct)));
        }
  }
}

TEST_CASE("sph_harm_dim") {
  for (int d : {3, 5, 20}) {
    CHECK(sph_harm_dim(d, 0) == 1);
    CHECK(sph_harm_dim(d, 1) == std::uint64_t(d));
  }
  CHECK(sph_harm_dim(3, 2) == 5);
  // Oracle: dim of homogeneous harmonics = binom(l+d-1, d-1) - binom(l+d-3, d-1).
  for (int d = 3; d <= 12; ++d)
    for (int l = 0; l <= 6; ++l)
      CHECK(double(sph_harm_dim(d, l)) == binom(l + d - 1, d - 1) - binom(l + d - 3, d - 1));
  CHECK(sph_harm_dim_real(50, 3) == doctest::Approx(double(sph_harm_dim(50, 3))));
  CHECK_THROWS_AS(sph_harm_dim(1000, 40), std::overflow_error);
}

TEST_CASE("gegenbauer evaluation") {
  const GegenbauerBasis b(20, 6);
  for (int l = 0; l <= 6; ++l) CHECK(b.eval(l, 20.0) == doctest::Approx(1.0).epsilon(1e-13));
  CHECK(b.eval(0, 3.3) == 1.0);
  CHECK(b.eval(1, 5.0) == doctest::Approx(0.25));
  CHECK_THROWS_AS(b.eval(2, 20.5), std::domain_error);
  CHECK_THROWS_AS(GegenbauerBasis(2, 3), std::invalid_argument);
  // d = 3 gives Legendre polynomials in t/3.
  const GegenbauerBasis leg(3, 3);
  const double s = 0.4;
  CHECK(leg.eval(2, 3 * s) == doctest::Approx((3 * s * s - 1) / 2));
  CHECK(leg.eval(3, 3 * s) == doctest::Approx((5 * s * s * s - 3 * s) / 2));
  std::vector<double> all(7);
  b.eval_all(-7.5, all);
  for (int l = 0; l <= 6; ++l) CHECK(all[l] == doctest::Approx(b.eval(l, -7.5)));
}

TEST_CASE("gegenbauer orthogonality by Monte Carlo") {
  const int d = 20, lmax = 4;
  const std::size_t m = 40000;
  const auto x = sample_sphere(m, d, 5, 1), y = sample_sphere(m, d, 5, 2);
  const GegenbauerBasis b(d, lmax);
  std::vector<RunningStats> acc(25);
  std::vector<double> q(5);
  for (std::size_t s = 0; s < m; ++s) {
    double ip = 0;
    for (int k = 0; k < d; ++k) ip += x(s, k) * y(s, k);
    b.eval_all(std::clamp(ip, -20.0, 20.0), q);
    for (int k = 0; k <= lmax; ++k)
      for (int l = 0; l <= lmax; ++l) acc[k * 5 + l].add(q[k] * q[l]);
  }
  for (int k = 0; k <= lmax; ++k)
    for (int l = 0; l <= lmax; ++l) {
      const double bl = sph_harm_dim_real(d, l);
      const auto& r = acc[k * 5 + l];
      CHECK(std::abs(bl * r.mean() - (k == l)) <= 5 * bl * r.std_error() + 1e-12);
    }
}

TEST_CASE("gegenbauer projection coefficients") {
  for (int d : {3, 10, 50}) {
    const auto c0 = gegenbauer_proj_coeffs(d, 0, 0);
    CHECK(c0.coeffs.size() == 1);
    CHECK(c0.coeffs[0] == doctest::Approx(1.0).epsilon(1e-10));
    const auto c1 = gegenbauer_proj_coeffs(d, 1, 1);
    CHECK(c1.coeffs[0] == doctest::Approx(0.0));
    CHECK(c1.coeffs[1] == doctest::Approx(std::sqrt(double(d))).epsilon(1e-9));
    const auto c4 = gegenbauer_proj_coeffs(d, 4, 4);
    CHECK(c4.coeffs[1] == 0.0);
    CHECK(c4.coeffs[3] == 0.0);
    // c_{0,2l} = E[(sqrt(d) s)^{2l}] with exact sphere moments E[s^{2m}] = prod (2i+1)/(d+2i).
    double m4 = 1.0;
    for (int i = 0; i < 2; ++i) m4 *= double(2 * i + 1) / double(d + 2 * i);
    CHECK(c4.coeffs[0] == doctest::Approx(m4 * d * d).epsilon(1e-9));
  }
  SUBCASE("sum rule: sum_j c_{jl} Q_j(d) = d^{l/2}") {
    const int d = 12;
    for (int l = 0; l <= 6; ++l) {
      const auto c = gegenbauer_proj_coeffs(d, l, l).coeffs;
      double s = 0;
      for (double v : c) s += v;  // Q_j(d) = 1
      CHECK(s == doctest::Approx(std::pow(double(d), 0.5 * l)).epsilon(1e-8));
    }
  }
  SUBCASE("Monte Carlo oracle, d = 10") {
    const int d = 10;
    const std::size_t m = 200000;
    const auto x = sample_sphere(m, d, 9, 3);
    const GegenbauerBasis b(d, 4);
    for (int l = 2; l <= 4; ++l) {
      const auto c = gegenbauer_proj_coeffs(d, l, l).coeffs;
      for (int j = l % 2; j <= l; j += 2) {
        RunningStats rs;
        for (std::size_t s = 0; s < m; ++s) rs.add(std::pow(x(s, 0), l) * b.eval(j, std::sqrt(double(d)) * x(s, 0)));
        const double bj = sph_harm_dim_real(d, j);
        CHECK(std::abs(bj * rs.mean() - c[j]) <= 5 * bj * rs.std_error());
      }
    }
  }
}

TEST_CASE("coefficient tables serialize and round-trip") {
  const auto t = monomial_hermite_table(5);
  const auto j = t.to_json();
  CHECK(j["kind"] == "monomial-to-hermite");
  const auto back = CoeffTable::from_json(j);
  REQUIRE(back.entries.size() == t.entries.size());
  for (std::size_t i = 0; i < t.entries.size(); ++i) {
    CHECK(back.entries[i].indices == t.entries[i].indices);
    CHECK(back.entries[i].value == t.entries[i].value);
    const int k = t.entries[i].indices[0], l = t.entries[i].indices[1];
    CHECK((k <= l && (k + l) % 2 == 0));
  }
  CHECK(coeff_kind_from_string("gegenbauer-projection") == CoeffKind::gegenbauer_projection);
  CHECK_THROWS(coeff_kind_from_string("nope"));
  const auto g = gegenbauer_projection_table(10, 4, 2);
  CHECK(g.params["d"] == 10);
}
