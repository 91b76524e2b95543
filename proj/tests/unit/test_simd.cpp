#include <cmath>
#include <vector>

#include "doctest.h"
#include "knlb/orthopoly/gegenbauer.hpp"
#include "knlb/orthopoly/hermite.hpp"
#include "knlb/sampling/rng.hpp"
#include "knlb/simd/kernels.hpp"

using namespace knlb;

namespace {

std::vector<double> randn(std::size_t n, std::uint64_t s) {
  RandomStream r(s, 7);
  std::vector<double> v(n);
  for (auto& x : v) x = r.gaussian();
  return v;
}

void check_close(const std::vector<double>& a, const std::vector<double>& b, double scale) {
  REQUIRE(a.size() == b.size());
  for (std::size_t i = 0; i < a.size(); ++i) CHECK(std::abs(a[i] - b[i]) <= 1e-12 * scale);
}

}  // namespace

TEST_CASE("scalar reference kernels") {
  const auto& s = simd::scalar_kernels();
  CHECK(s.isa == simd::Isa::scalar);
  const std::vector<double> a{1, 2, 3}, b{4, -5, 6};
  CHECK(s.dot(a.data(), b.data(), 3) == 12.0);
  std::vector<double> y{1, 1, 1};
  s.axpy(2.0, a.data(), y.data(), 3);
  CHECK(y == std::vector<double>{3, 5, 7});
  std::vector<double> t{0.3, -1.2, 2.5}, out(3);
  s.hermite_map(t.data(), out.data(), 3, 4, 0.5);
  for (int i = 0; i < 3; ++i) CHECK(out[i] == doctest::Approx(orthopoly::hermite_eval(4, 0.5 * t[i])));
  std::vector<double> g{10.0, -3.0, 0.0}, gout(3);
  s.gegenbauer_map(g.data(), gout.data(), 3, 3, 10);
  CHECK(gout[0] == doctest::Approx(1.0));
  CHECK(gout[1] == doctest::Approx(orthopoly::GegenbauerBasis(10, 3).eval(3, -3.0)));
}

TEST_CASE("AVX2 variants match the scalar reference") {
  const auto* v = simd::avx2_kernels();
  if (v == nullptr || !simd::cpu_supports(simd::Isa::avx2)) {
    MESSAGE("AVX2 variant unavailable; skipping");
    return;
  }
  const auto& s = simd::scalar_kernels();
  for (std::size_t n : {1, 3, 4, 7, 16, 33, 257}) {
    const auto a = randn(n, n), b = randn(n, n + 1);
    double sc = 0;
    for (std::size_t i = 0; i < n; ++i) sc += std::abs(a[i] * b[i]);
    CHECK(std::abs(v->dot(a.data(), b.data(), n) - s.dot(a.data(), b.data(), n)) <= 1e-12 * sc);

    auto y1 = b, y2 = b;
    s.axpy(0.7, a.data(), y1.data(), n);
    v->axpy(0.7, a.data(), y2.data(), n);
    check_close(y1, y2, 4.0);
  }
  const std::size_t shapes[][3] = {{5, 7, 3}, {13, 9, 17}, {32, 32, 64}, {1, 1, 1}};
  for (const auto& sh : shapes) {
    const std::size_t na = sh[0], nb = sh[1], d = sh[2];
    const auto a = randn(na * d, 21), b = randn(nb * d, 22);
    std::vector<double> o1(na * nb), o2(o1.size());
    s.cross_gram(a.data(), na, b.data(), nb, d, o1.data(), nb);
    v->cross_gram(a.data(), na, b.data(), nb, d, o2.data(), nb);
    check_close(o1, o2, 10.0 * double(d));
    std::vector<double> g1(na * na), g2(g1.size());
    s.gram(a.data(), na, d, g1.data());
    v->gram(a.data(), na, d, g2.data());
    check_close(g1, g2, 10.0 * double(d));
  }
  for (std::size_t n : {1, 5, 64, 101}) {
    const auto m = randn(n * n, 30 + n), x = randn(n, 40 + n);
    std::vector<double> y1(n), y2(n);
    s.symv(m.data(), n, x.data(), y1.data());
    v->symv(m.data(), n, x.data(), y2.data());
    check_close(y1, y2, 10.0 * double(n));
  }
  const auto t = randn(203, 50);
  for (int deg = 0; deg <= 8; ++deg) {
    std::vector<double> o1(t.size()), o2(t.size());
    s.hermite_map(t.data(), o1.data(), t.size(), deg, 0.9);
    v->hermite_map(t.data(), o2.data(), t.size(), deg, 0.9);
    for (std::size_t i = 0; i < t.size(); ++i)
      CHECK(std::abs(o1[i] - o2[i]) <= 1e-12 * std::max(1.0, std::abs(o1[i])) * (deg + 1));
  }
  const int d = 40;
  std::vector<double> g(203);
  RandomStream r(51, 1);
  for (auto& e : g) e = (2 * r.uniform() - 1) * d;
  g[0] = d;
  g[1] = -d;
  for (int deg = 0; deg <= 6; ++deg) {
    std::vector<double> o1(g.size()), o2(g.size());
    s.gegenbauer_map(g.data(), o1.data(), g.size(), deg, d);
    v->gegenbauer_map(g.data(), o2.data(), g.size(), deg, d);
    check_close(o1, o2, 1.0 + deg);
  }
}

TEST_CASE("dispatch honors the environment override") {
  const auto& k = simd::active();
  CHECK((k.isa == simd::Isa::scalar || simd::cpu_supports(k.isa)));
  CHECK(simd::isa_name(simd::Isa::scalar) == "scalar");
}
