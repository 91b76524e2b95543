#include <cmath>
#include <sstream>

#include "doctest.h"
#include "knlb/sampling/binary_io.hpp"
#include "knlb/sampling/covariance.hpp"
#include "knlb/sampling/rng.hpp"
#include "knlb/sampling/sampling.hpp"
#include "knlb/util/stats.hpp"

using namespace knlb;

TEST_CASE("gaussian coordinate variances") {
  const CovarianceSpec spec({1.0, 0.5, 0.1, 2.0});
  const std::size_t n = 100000;
  const auto x = sample_gaussian(n, spec, 42, 1);
  for (std::size_t j = 0; j < 4; ++j) {
    RunningStats rs;
    for (std::size_t i = 0; i < n; ++i) rs.add(x(i, j) * x(i, j));
    CHECK(std::abs(rs.mean() - spec.eigenvalues()[j]) <= 5 * rs.std_error());
  }
}

TEST_CASE("zero spectrum gives zero data") {
  const auto x = sample_gaussian(10, CovarianceSpec({0.0, 0.0, 0.0}), 1, 1);
  for (double v : x.values()) CHECK(v == 0.0);
}

TEST_CASE("determinism and stream separation") {
  const auto spec = CovarianceSpec::identity(7);
  const auto a = sample_gaussian(50, spec, 9, 3), b = sample_gaussian(50, spec, 9, 3);
  CHECK(a.values() == b.values());
  const auto c = sample_gaussian(50, spec, 9, 4);
  CHECK(a.values() != c.values());
  CHECK(hash64(1, 2) != hash64(2, 1));
  CHECK(stream_id(0, 1, role::data) != stream_id(1, 0, role::data));
  CHECK(stream_id(3, 4, role::data) != stream_id(3, 4, role::decoupled));
  const auto s1 = sample_sphere(20, 5, 1, 1), s2 = sample_sphere(20, 5, 1, 1);
  CHECK(s1.values() == s2.values());
}

TEST_CASE("decoupled copies are uncorrelated") {
  const auto spec = CovarianceSpec::identity(3);
  const std::size_t n = 100000;
  const auto a = sample_gaussian(n, spec, 77, stream_id(0, 0, role::data));
  const auto b = sample_gaussian(n, spec, 77, stream_id(0, 0, role::decoupled));
  for (std::size_t j = 0; j < 3; ++j) {
    RunningStats rs;
    for (std::size_t i = 0; i < n; ++i) rs.add(a(i, j) * b(i, j));
    CHECK(std::abs(rs.mean()) <= 5 * rs.std_error());
  }
}

TEST_CASE("sphere samples") {
  const std::size_t n = 100000, d = 12;
  const auto x = sample_sphere(n, d, 5, 2);
  RunningStats first, cross;
  for (std::size_t i = 0; i < n; ++i) {
    double s = 0;
    for (std::size_t k = 0; k < d; ++k) s += x(i, k) * x(i, k);
    if (i < 1000) CHECK(std::abs(std::sqrt(s) - std::sqrt(double(d))) <= 1e-12 * std::sqrt(double(d)));
    first.add(x(i, 0) * x(i, 0));
    if (i + 1 < n) {
      double ip = 0;
      for (std::size_t k = 0; k < d; ++k) ip += x(i, k) * x(i + 1, k);
      cross.add(ip);
    }
  }
  CHECK(std::abs(first.mean() - 1.0) <= 5 * first.std_error());
  CHECK(std::abs(cross.mean()) <= 5 * cross.std_error());
  CHECK(x.meta().distribution == DistributionKind::sphere);
}

TEST_CASE("polar decomposition") {
  const DataMatrix x(2, 2, {3, 4, 0.6, 0.8}, {});
  const auto p = polar_decompose(x);
  CHECK(p.norms[0] == doctest::Approx(5.0));
  CHECK(p.norms[1] == doctest::Approx(1.0));
  CHECK(p.directions(0, 0) == doctest::Approx(0.6));
  CHECK(p.directions(0, 1) == doctest::Approx(0.8));
  CHECK_THROWS_AS(polar_decompose(DataMatrix(2, 2, {1, 0, 0, 0}, {})), ZeroRowError);
  try {
    polar_decompose(DataMatrix(3, 1, {1, 2, 0}, {}));
  } catch (const ZeroRowError& e) {
    CHECK(e.row() == 2);
  }

  const std::size_t n = 50000, d = 6;
  const auto g = sample_gaussian(n, CovarianceSpec::identity(d), 3, 3);
  const auto pg = polar_decompose(g);
  // Reconstruction and norm/direction independence.
  std::vector<double> r, u;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t k = 0; k < d; ++k)
      if (i < 100) CHECK(pg.norms[i] * pg.directions(i, k) == doctest::Approx(g(i, k)).epsilon(1e-12));
    r.push_back(pg.norms[i]);
    u.push_back(pg.directions(i, 0));
  }
  const auto mr = mean_stderr(r), mu = mean_stderr(u);
  RunningStats prod;
  for (std::size_t i = 0; i < n; ++i) prod.add((r[i] - mr.mean) * (u[i] - mu.mean));
  CHECK(std::abs(prod.mean()) <= 5 * prod.std_error());
}

TEST_CASE("covariance spec and effective dimensions") {
  const auto id = effective_dims(CovarianceSpec::identity(9));
  CHECK(id.tau1 == 9);
  CHECK(id.tau4 == 9);
  CHECK(id.R == doctest::Approx(9));
  const auto e = effective_dims(CovarianceSpec({1.0, 0.5}));
  CHECK(e.tau1 == doctest::Approx(1.5));
  CHECK(e.tau2 == doctest::Approx(1.25));
  CHECK(e.tau4 == doctest::Approx(1.0625));
  CHECK(e.R == doctest::Approx(1.25 * 1.25 / 1.0625));
  CHECK(effective_dims(CovarianceSpec({1.0, 0.0, 0.0})).R == doctest::Approx(1.0));
  CHECK_THROWS_AS(effective_dims(CovarianceSpec({0.0, 0.0})), std::domain_error);
  CHECK_THROWS(CovarianceSpec({1.0, -0.1}));
  const auto p = CovarianceSpec::power_law(100, -0.5);
  CHECK(p.op_norm() == doctest::Approx(1.0));
  CHECK(p.eigenvalues()[3] == doctest::Approx(0.5));
  const auto pe = effective_dims(p);
  CHECK(pe.tau1 >= pe.tau2);
  CHECK(pe.tau2 >= pe.tau3);
  CHECK(pe.tau3 >= pe.tau4);
  CHECK(CovarianceSpec::identity(4).is_identity());
  CHECK_FALSE(p.is_identity());
}

TEST_CASE("Whittle-type moment check") {
  std::vector<double> lam(200);
  for (std::size_t i = 0; i < 200; ++i) lam[i] = 1.0 / double(i + 1);
  const CovarianceSpec spec(lam);
  const double t1 = spec.tau(1), t2 = spec.tau(2);
  const std::size_t m = 20000;
  RandomStream rng(4, 4);
  for (int s : {2, 4}) {
    RunningStats rs;
    for (std::size_t k = 0; k < m; ++k) {
      double q = 0;
      for (double l : lam) {
        const double z = rng.gaussian();
        q += l * z * z;
      }
      rs.add(std::pow(std::abs(q / t1 - 1.0), s));
    }
    const double scale = std::pow(t2, s / 2.0) * std::pow(t1, -s);
    const double c_fit = rs.mean() / scale;
    MESSAGE("s=" << s << " fitted constant " << c_fit);
    CHECK(c_fit <= 100.0);
  }
}

TEST_CASE("binary dump round trip") {
  const auto x = sample_gaussian(7, CovarianceSpec::identity(3), 123, 5);
  std::stringstream ss;
  io::write_data_matrix(ss, x);
  const std::string bytes = ss.str();
  CHECK(bytes.size() == 32 + 7 * 3 * 8);
  CHECK(bytes.substr(0, 4) == "KNLB");
  const auto y = io::read_data_matrix(ss);
  CHECK(y.values() == x.values());
  CHECK(y.meta().seed == 123);
  CHECK(y.meta().distribution == DistributionKind::gaussian);
  std::stringstream bad("NOPE0000000000000000000000000000");
  CHECK_THROWS(io::read_data_matrix(bad));
}
