#include <cmath>

#include "doctest.h"
#include "knlb/bounds/bounds.hpp"
#include "knlb/kernelmat/builders.hpp"
#include "knlb/kernelmat/row_kernel.hpp"
#include "knlb/sampling/rng.hpp"
#include "knlb/spectral/spectral.hpp"
#include "knlb/util/stats.hpp"

using namespace knlb;

TEST_CASE("zero kernel gives zero terms") {
  const auto sampler = Sampler::gaussian(CovarianceSpec::identity(10));
  const auto r = thm1_terms(sampler, RowKernel::constant(0.0), 20, 3, 1);
  for (const auto& e : {r.term_diag, r.term_mean, r.term_corr, r.term_max, r.lower_corr, r.lower_diag})
    CHECK(e.value == 0.0);
  CHECK(r.total_upper() == 0.0);
  CHECK(r.closed_form_G);
  CHECK_THROWS(thm1_terms(sampler, RowKernel::constant(0.0), 20, 1, 1));
}

TEST_CASE("linear Hermite kernel, isotropic data") {
  const std::size_t n = 50, d = 400;
  const auto sampler = Sampler::gaussian(CovarianceSpec::identity(d));
  const auto r = thm1_terms(sampler, RowKernel::hermite(1, double(d)), n, 20, 2);
  CHECK(r.term_mean.value == 0.0);
  // G_ii = |x_i|^2 / d, so sqrt(sum_{i>1} G_ii) ~ sqrt(n - 1) with spread O(1/sqrt d).
  CHECK(std::abs(r.lower_diag.value - std::sqrt(double(n - 1))) <= 5 * r.lower_diag.std_error + 0.1);
  CHECK(r.exact_conditional_mean);
  const auto j = r.to_json();
  CHECK(j["log_base"] == "e");
  CHECK(j.contains("term_corr"));
}

TEST_CASE("upper terms dominate the measured norm") {
  const std::size_t n = 100, d = 400;
  const auto sampler = Sampler::gaussian(CovarianceSpec::identity(d));
  const auto r = thm1_terms(sampler, RowKernel::hermite(2, double(d)), n, 10, 3);
  MESSAGE("offdiag norm " << r.norm_offdiag_K.value << " total upper " << r.total_upper());
  CHECK(r.total_upper() >= r.norm_offdiag_K.value);
  for (const auto& e : {r.term_diag, r.term_mean, r.term_corr, r.term_max}) {
    CHECK(e.value >= 0.0);
    CHECK(e.std_error >= 0.0);
  }
}

TEST_CASE("lower terms on fixed ensembles") {
  const std::size_t n = 9;
  std::vector<SymMatrix> id(4, SymMatrix::identity(n)), zero(4, SymMatrix(n));
  const auto [lc, ld] = thm2_terms(id);
  CHECK(lc.value == doctest::Approx(3.0));
  CHECK(ld.value == doctest::Approx(std::sqrt(8.0)));
  CHECK(lc.std_error == 0.0);
  const auto [zc, zd] = thm2_terms(zero);
  CHECK(zc.value == 0.0);
  CHECK(zd.value == 0.0);
}

TEST_CASE("lower diagonal term against a closed-form diagonal") {
  const std::size_t n = 200, d = 200, trials = 6;
  const std::uint64_t seed = 4;
  const auto spec = CovarianceSpec::identity(d);
  const auto sampler = Sampler::gaussian(spec);
  const auto r = thm1_terms(sampler, RowKernel::hermite(3, double(d)), n, trials, seed);
  // E_z He_3(s Y)^2 = 15 s^6 - 18 s^4 + 9 s^2 with s^2 = |x|^2 / d.
  std::vector<double> per(trials);
  for (std::size_t t = 0; t < trials; ++t) {
    const auto x = sampler.draw(n, seed, stream_id(0, t, role::data));
    double sum = 0;
    for (std::size_t i = 1; i < n; ++i) {
      double s2 = 0;
      for (double v : x.row(i)) s2 += v * v;
      s2 /= double(d);
      sum += 15 * s2 * s2 * s2 - 18 * s2 * s2 + 9 * s2;
    }
    per[t] = std::sqrt(sum);
  }
  const auto oracle = mean_stderr(per);
  CHECK(r.lower_diag.value == doctest::Approx(oracle.mean).epsilon(1e-10));
  CHECK(std::abs(r.lower_diag.value - std::sqrt((n - 1) * 6.0)) <= 5 * r.lower_diag.std_error + 0.05 * std::sqrt(6.0 * n));
}

TEST_CASE("nested Monte Carlo budget") {
  const std::size_t d = 20;
  const auto sampler = Sampler::gaussian(CovarianceSpec::identity(d));
  const auto k = RowKernel::inner_product(KernelFunction::exponential(), double(d));
  BoundOptions o;
  o.z_samples = 500;
  o.z_outer = 50;
  o.m_inner = 2000;
  o.nested_budget = 1e4;
  const auto r = thm1_terms(sampler, k, 30, 2, 5, o);
  CHECK(r.budget_exhausted);
  CHECK_FALSE(r.closed_form_G);
  o.nested_budget = 4e8;
  CHECK_FALSE(thm1_terms(sampler, k, 30, 2, 5, o).budget_exhausted);
}

TEST_CASE("decoupling ratio") {
  const std::size_t d = 50;
  const auto sampler = Sampler::gaussian(CovarianceSpec::identity(d));
  const auto k = RowKernel::hermite(2, double(d));
  const auto coupled = decoupling_ratio(sampler, k, 30, 10, 6, 1e-8, 1, 0, true);
  CHECK(coupled.ratio == doctest::Approx(1.0).epsilon(1e-12));
  const auto one = decoupling_ratio(sampler, RowKernel::constant(1.0), 30, 10, 6);
  CHECK(one.norm_delta.value == doctest::Approx(29.0));
  CHECK(one.norm_delta_tilde.value == doctest::Approx(29.0));
  CHECK(one.ratio == doctest::Approx(1.0));
  const auto r = decoupling_ratio(sampler, k, 40, 12, 7);
  CHECK(r.delta_samples.size() == 12);
  CHECK(r.ratio > 0.125);
  CHECK(r.ratio < 8.0);
  CHECK(r.to_json()["ratio"].get<double>() == r.ratio);
  // Independent recomputation of the first trial.
  const auto x = sampler.draw(40, 7, stream_id(0, 0, role::data));
  CHECK(r.delta_samples[0] ==
        doctest::Approx(spectral::op_norm(build_hermite_delta(x, 2, double(d)), 1e-8)).epsilon(1e-6));
}

TEST_CASE("bound report is reproducible across worker counts") {
  const auto sampler = Sampler::gaussian(CovarianceSpec::identity(30));
  BoundOptions o1, o4;
  o4.workers = 4;
  const auto a = thm1_terms(sampler, RowKernel::hermite(3, 30.0), 25, 4, 8, o1);
  const auto b = thm1_terms(sampler, RowKernel::hermite(3, 30.0), 25, 4, 8, o4);
  CHECK(a.to_json() == b.to_json());
}
