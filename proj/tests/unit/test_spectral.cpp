#include <algorithm>
#include <cmath>

#include "doctest.h"
#include "knlb/kernelmat/builders.hpp"
#include "knlb/sampling/rng.hpp"
#include "knlb/sampling/sampling.hpp"
#include "knlb/spectral/spectral.hpp"

using namespace knlb;

namespace {

SymMatrix random_sym(std::size_t n, std::uint64_t seed) {
  RandomStream rng(seed, 1);
  SymMatrix a(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i; j < n; ++j) a.set(i, j, rng.gaussian());
  return a;
}

// Power iteration on A^2 as an independent check of the extreme |eigenvalue|.
double power_norm(const SymMatrix& a, int iters) {
  const std::size_t n = a.size();
  std::vector<double> v(n, 1.0), w(n);
  double lam = 0;
  for (int it = 0; it < iters; ++it) {
    for (std::size_t i = 0; i < n; ++i) {
      double s = 0;
      for (std::size_t j = 0; j < n; ++j) s += a(i, j) * v[j];
      w[i] = s;
    }
    double nn = 0;
    for (double x : w) nn += x * x;
    double vv = 0;
    for (double x : v) vv += x * x;
    lam = std::sqrt(nn / vv);
    for (std::size_t i = 0; i < n; ++i) v[i] = w[i] / std::sqrt(nn);
  }
  return lam;
}

}  // namespace

TEST_CASE("operator norm examples") {
  CHECK(spectral::op_norm(SymMatrix::identity(30)) == doctest::Approx(1.0));
  CHECK(spectral::op_norm_lanczos(SymMatrix::identity(100)) == doctest::Approx(1.0));
  std::vector<double> a{1, -2, 0.5, 3, 1.5};
  SymMatrix r(5);
  double a2 = 0;
  for (std::size_t i = 0; i < 5; ++i) {
    a2 += a[i] * a[i];
    for (std::size_t j = 0; j < 5; ++j) r.at_raw(i, j) = a[i] * a[j];
  }
  CHECK(spectral::op_norm(r) == doctest::Approx(a2).epsilon(1e-10));
  CHECK(spectral::op_norm_lanczos(r) == doctest::Approx(a2).epsilon(1e-10));

  const auto m = random_sym(50, 3);
  const auto ev = spectral::jacobi_eigenvalues(m);
  const double oracle = std::max(std::abs(ev.front()), std::abs(ev.back()));
  CHECK(std::abs(spectral::op_norm_lanczos(m, 1e-12) - oracle) <= 1e-8 * oracle);
  CHECK(std::abs(spectral::op_norm(m) - oracle) <= 1e-8 * oracle);
  CHECK(power_norm(m, 3000) == doctest::Approx(oracle).epsilon(1e-4));
  CHECK(spectral::op_norm(SymMatrix(20)) == 0.0);
  CHECK(spectral::op_norm_lanczos(SymMatrix(200)) == 0.0);
}

TEST_CASE("jacobi oracle on a known spectrum") {
  SymMatrix d(5);
  for (std::size_t i = 0; i < 5; ++i) d.set(i, i, double(i + 1));
  const auto ev = spectral::jacobi_eigenvalues(d);
  for (std::size_t i = 0; i < 5; ++i) CHECK(ev[i] == doctest::Approx(double(i + 1)));
  // trace and Frobenius norm are preserved
  const auto m = random_sym(40, 5);
  const auto e = spectral::jacobi_eigenvalues(m);
  double tr = 0, sq = 0, etr = 0, esq = 0;
  for (std::size_t i = 0; i < 40; ++i) tr += m(i, i);
  for (double v : m.values()) sq += v * v;
  for (double v : e) {
    etr += v;
    esq += v * v;
  }
  CHECK(etr == doctest::Approx(tr).epsilon(1e-11));
  CHECK(esq == doctest::Approx(sq).epsilon(1e-11));
  CHECK(std::is_sorted(e.begin(), e.end()));
}

TEST_CASE("minimum eigenvalue") {
  CHECK(spectral::min_eig(SymMatrix::identity(10)) == doctest::Approx(1.0));
  CHECK(spectral::min_eig_lanczos(SymMatrix::identity(100)) == doctest::Approx(1.0));
  SymMatrix d(5);
  for (std::size_t i = 0; i < 5; ++i) d.set(i, i, double(i + 1));
  CHECK(spectral::min_eig(d) == doctest::Approx(1.0));
  CHECK(spectral::min_eig_lanczos(d, 1e-12) == doctest::Approx(1.0));

  const auto x = sample_gaussian(30, CovarianceSpec::identity(40), 7, 1);
  const auto g = gram(x);
  const auto ev = spectral::jacobi_eigenvalues(g);
  CHECK(std::abs(spectral::min_eig_lanczos(g, 1e-12) - ev.front()) <= 1e-8 * ev.front());
  CHECK(std::abs(spectral::min_eig(g) - ev.front()) <= 1e-8 * ev.front());
}

TEST_CASE("Lanczos versus Jacobi up to n = 256") {
  for (std::size_t n : {65, 100, 180, 256}) {
    const auto m = random_sym(n, 100 + n);
    const auto ev = spectral::jacobi_eigenvalues(m);
    const double oracle = std::max(std::abs(ev.front()), std::abs(ev.back()));
    CHECK(std::abs(spectral::op_norm(m, 1e-12) - oracle) <= 1e-8 * oracle);
    const auto lr = spectral::lanczos_extremes(m, 1e-12, 1);
    CHECK(std::abs(lr.min_eig - ev.front()) <= 1e-8 * oracle);
    CHECK(std::abs(lr.max_eig - ev.back()) <= 1e-8 * oracle);
  }
}

TEST_CASE("Lanczos is deterministic and the dense path agrees with itself") {
  const auto m = random_sym(90, 9);
  CHECK(spectral::op_norm_lanczos(m) == spectral::op_norm_lanczos(m));
  const auto s = random_sym(40, 10);
  CHECK(spectral::op_norm(s) == spectral::op_norm_dense(s));
}

TEST_CASE("norm inequalities and scale equivariance") {
  for (std::uint64_t s = 0; s < 100; ++s) {
    const auto m = random_sym(10 + s % 20, 200 + s);
    CHECK(spectral::op_norm(m) <= spectral::frobenius(m) * (1 + 1e-12));
  }
  const auto a = random_sym(120, 11), b = random_sym(120, 12);
  const double na = spectral::op_norm(a, 1e-10), nb = spectral::op_norm(b, 1e-10);
  CHECK(spectral::op_norm(a + b, 1e-10) <= (na + nb) * (1 + 1e-9));
  for (double c : {-3.0, 0.25, 7.5}) {
    auto ca = a;
    ca *= c;
    CHECK(std::abs(spectral::op_norm(ca, 1e-12) - std::abs(c) * spectral::op_norm(a, 1e-12)) <=
          1e-10 * std::abs(c) * na);
  }
}

TEST_CASE("Hadamard product with an outer product") {
  RandomStream rng(13, 1);
  const std::size_t n = 40;
  for (int rep = 0; rep < 100; ++rep) {
    std::vector<double> a(n);
    double amax = 0;
    for (auto& v : a) {
      v = rng.gaussian();
      amax = std::max(amax, v * v);
    }
    const auto p = random_sym(n, 1000 + rep);
    SymMatrix h(n);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) h.at_raw(i, j) = a[i] * a[j] * p(i, j);
    CHECK(spectral::op_norm(h, 1e-10) <= amax * spectral::op_norm(p, 1e-10) + 1e-9);
  }
}

TEST_CASE("diagonal split") {
  const auto off = spectral::offdiag(SymMatrix::identity(4));
  for (double v : off.values()) CHECK(v == 0.0);
  CHECK(spectral::frobenius(SymMatrix::constant(3, 1.0)) == doctest::Approx(3.0));
  const auto m = random_sym(6, 14);
  const auto d = spectral::diag_part(m);
  const auto o = spectral::offdiag(m);
  for (std::size_t i = 0; i < 6; ++i) {
    CHECK(d[i] == m(i, i));
    CHECK(o(i, i) == 0.0);
    for (std::size_t j = 0; j < 6; ++j)
      if (i != j) CHECK(o(i, j) == m(i, j));
  }
}
