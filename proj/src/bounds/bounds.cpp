#include "knlb/bounds/bounds.hpp"

#include <cmath>
#include <stdexcept>

#include "knlb/kernelmat/builders.hpp"
#include "knlb/kernelmat/correlation.hpp"
#include "knlb/sampling/rng.hpp"
#include "knlb/util/parallel.hpp"
#include "knlb/util/stats.hpp"

namespace knlb {

nlohmann::json to_json(const Estimate& e) { return {{"value", e.value}, {"stderr", e.std_error}}; }

namespace {

Estimate mean_of(const std::vector<double>& v) {
  const auto ms = mean_stderr(v);
  return {ms.mean, ms.std_error};
}

// c * sqrt(mean) with the delta-method standard error.
Estimate scaled_sqrt(const Estimate& mean, double c) {
  const double m = std::max(mean.value, 0.0);
  const double v = c * std::sqrt(m);
  const double se = m > 0 ? c * mean.std_error / (2.0 * std::sqrt(m)) : 0.0;
  return {v, se};
}

}  // namespace

TrialTerms thm1_trial(const Sampler& sampler, const RowKernel& k, std::size_t n, std::uint64_t seed,
                      std::uint64_t trial, const BoundOptions& opts) {
  const std::uint64_t p = opts.point;
  const DataMatrix x = sampler.draw(n, seed, stream_id(p, trial, role::data));
  const SymMatrix g = gram(x);
  const SymMatrix kmat = build_kernel_matrix_from_gram(g, k);

  TrialTerms t{};
  t.norm_K = spectral::op_norm(kmat, opts.rel_tol);
  t.norm_offdiag_K = spectral::op_norm(spectral::offdiag(kmat), opts.rel_tol);
  t.max_diag = 0.0;
  for (std::size_t i = 0; i < n; ++i) t.max_diag = std::max(t.max_diag, std::abs(kmat(i, i)));

  std::size_t m_inner = opts.m_inner;
  t.budget_exhausted = false;
  if (!has_closed_form_G(k, sampler)) {
    const double cost = double(m_inner) * double(n + opts.z_outer);
    if (cost > opts.nested_budget) {
      m_inner = std::max<std::size_t>(100, std::size_t(opts.nested_budget / double(n + opts.z_outer)));
      t.budget_exhausted = true;
    }
  }
  const ConditionalMean cm(k, sampler, m_inner, seed, stream_id(p, trial, role::inner_mc));

  double msq = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double c = cm(x.row(i));
    msq += c * c;
  }
  t.mean_sq = msq / double(n);

  const SymMatrix gmat =
      has_closed_form_G(k, sampler)
          ? correlation_G_closed(x, k, sampler)
          : correlation_G_mc(x, k, sampler, opts.z_samples, seed, stream_id(p, trial, role::z_samples)).value;
  t.norm_G = spectral::op_norm(gmat, opts.rel_tol);
  t.sqrt_n_norm_G = std::sqrt(double(n) * t.norm_G);
  double sum_diag = 0.0;
  for (std::size_t i = 1; i < n; ++i) sum_diag += gmat(i, i);
  t.sqrt_sum_Gii = std::sqrt(std::max(sum_diag, 0.0));

  const DataMatrix z = sampler.draw(opts.z_outer, seed, stream_id(p, trial, role::test_points));
  std::vector<double> kz = cross_gram(z, x);
  k.map(kz, kz);
  double dev = 0.0;
  for (std::size_t s = 0; s < z.rows(); ++s) {
    const double c = cm(z.row(s));
    double worst = 0.0;
    for (std::size_t i = 0; i < n; ++i) worst = std::max(worst, (kz[s * n + i] - c) * (kz[s * n + i] - c));
    dev += worst;
  }
  t.max_dev_sq = dev / double(z.rows());
  return t;
}

BoundReport aggregate_bound_terms(std::span<const TrialTerms> per, std::size_t n, std::size_t d,
                                  const std::string& kernel, bool closed_form_G) {
  const std::size_t trials = per.size();
  auto column = [&](double TrialTerms::*field) {
    std::vector<double> v(trials);
    for (std::size_t t = 0; t < trials; ++t) v[t] = per[t].*field;
    return mean_of(v);
  };
  BoundReport r;
  r.n = n;
  r.d = d;
  r.trials = trials;
  r.kernel = kernel;
  r.closed_form_G = closed_form_G;
  r.exact_conditional_mean = closed_form_G;
  for (const auto& t : per) r.budget_exhausted = r.budget_exhausted || t.budget_exhausted;

  const double nd = double(n), logn = std::log(nd);
  r.term_diag = column(&TrialTerms::max_diag);
  r.term_mean = scaled_sqrt(column(&TrialTerms::mean_sq), nd * std::sqrt(logn));
  r.term_corr = scaled_sqrt(column(&TrialTerms::norm_G), std::sqrt(nd * logn));
  r.term_max = scaled_sqrt(column(&TrialTerms::max_dev_sq), logn * std::sqrt(nd));
  r.lower_corr = column(&TrialTerms::sqrt_n_norm_G);
  r.lower_diag = column(&TrialTerms::sqrt_sum_Gii);
  r.norm_K = column(&TrialTerms::norm_K);
  r.norm_offdiag_K = column(&TrialTerms::norm_offdiag_K);
  return r;
}

BoundReport thm1_terms(const Sampler& sampler, const RowKernel& k, std::size_t n, std::size_t trials,
                       std::uint64_t seed, const BoundOptions& opts) {
  if (trials < 2) throw std::invalid_argument("thm1_terms needs at least two trials");
  if (n < 2) throw std::invalid_argument("thm1_terms needs n >= 2");
  std::vector<TrialTerms> per(trials);
  parallel_for(trials, opts.workers, [&](std::size_t t) { per[t] = thm1_trial(sampler, k, n, seed, t, opts); });
  return aggregate_bound_terms(per, n, sampler.dim(), k.describe(), has_closed_form_G(k, sampler));
}

nlohmann::json BoundReport::to_json() const {
  return {{"n", n},
          {"d", d},
          {"trials", trials},
          {"kernel", kernel},
          {"log_base", "e"},
          {"term_diag", knlb::to_json(term_diag)},
          {"term_mean", knlb::to_json(term_mean)},
          {"term_corr", knlb::to_json(term_corr)},
          {"term_max", knlb::to_json(term_max)},
          {"total_upper", total_upper()},
          {"lower_corr", knlb::to_json(lower_corr)},
          {"lower_diag", knlb::to_json(lower_diag)},
          {"norm_K", knlb::to_json(norm_K)},
          {"norm_offdiag_K", knlb::to_json(norm_offdiag_K)},
          {"ratio_K_over_upper", total_upper() > 0 ? norm_K.value / total_upper() : 0.0},
          {"ratio_offdiag_over_lower", lower_max() > 0 ? norm_offdiag_K.value / lower_max() : 0.0},
          {"closed_form_G", closed_form_G},
          {"exact_conditional_mean", exact_conditional_mean},
          {"budget_exhausted", budget_exhausted}};
}

std::pair<Estimate, Estimate> thm2_terms(std::span<const SymMatrix> ensemble, double rel_tol) {
  std::vector<double> corr, diag;
  for (const auto& g : ensemble) {
    corr.push_back(std::sqrt(double(g.size()) * spectral::op_norm(g, rel_tol)));
    double s = 0.0;
    for (std::size_t i = 1; i < g.size(); ++i) s += g(i, i);
    diag.push_back(std::sqrt(std::max(s, 0.0)));
  }
  return {mean_of(corr), mean_of(diag)};
}

DecouplingReport aggregate_decoupling(std::vector<double> delta, std::vector<double> delta_tilde, std::size_t n,
                                      std::size_t d) {
  if (delta.size() != delta_tilde.size()) throw std::invalid_argument("unpaired decoupling samples");
  const std::size_t trials = delta.size();
  DecouplingReport r;
  r.n = n;
  r.d = d;
  r.trials = trials;
  r.delta_samples = std::move(delta);
  r.delta_tilde_samples = std::move(delta_tilde);
  r.norm_delta = mean_of(r.delta_samples);
  r.norm_delta_tilde = mean_of(r.delta_tilde_samples);
  const double a = r.norm_delta.value, b = r.norm_delta_tilde.value;
  r.ratio = b > 0 ? a / b : 0.0;
  if (a > 0 && b > 0 && trials > 1) {
    double cov = 0.0;
    for (std::size_t t = 0; t < trials; ++t) cov += (r.delta_samples[t] - a) * (r.delta_tilde_samples[t] - b);
    cov /= double(trials - 1) * double(trials);  // covariance of the two means
    const double va = r.norm_delta.std_error * r.norm_delta.std_error;
    const double vb = r.norm_delta_tilde.std_error * r.norm_delta_tilde.std_error;
    const double rel = va / (a * a) + vb / (b * b) - 2.0 * cov / (a * b);
    r.ratio_std_error = r.ratio * std::sqrt(std::max(rel, 0.0));
  }
  return r;
}

DecouplingReport decoupling_ratio(const Sampler& sampler, const RowKernel& k, std::size_t n, std::size_t trials,
                                  std::uint64_t seed, double rel_tol, std::size_t workers, std::uint64_t point,
                                  bool coupled) {
  if (trials < 2) throw std::invalid_argument("decoupling_ratio needs at least two trials");
  std::vector<double> delta(trials), delta_tilde(trials);
  parallel_for(trials, workers, [&](std::size_t t) {
    const DataMatrix x = sampler.draw(n, seed, stream_id(point, t, role::data));
    const DataMatrix xt = coupled ? x : sampler.draw(n, seed, stream_id(point, t, role::decoupled));
    delta[t] = spectral::op_norm(build_kernel_matrix(x, k, true), rel_tol);
    delta_tilde[t] = spectral::op_norm(build_decoupled_delta(x, xt, k), rel_tol);
  });
  return aggregate_decoupling(std::move(delta), std::move(delta_tilde), n, sampler.dim());
}

nlohmann::json DecouplingReport::to_json() const {
  return {{"n", n},
          {"d", d},
          {"trials", trials},
          {"norm_delta", knlb::to_json(norm_delta)},
          {"norm_delta_tilde", knlb::to_json(norm_delta_tilde)},
          {"ratio", ratio},
          {"ratio_stderr", ratio_std_error}};
}

}  // namespace knlb
