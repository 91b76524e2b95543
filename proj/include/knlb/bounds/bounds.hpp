#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "json.hpp"
#include "knlb/kernelmat/row_kernel.hpp"
#include "knlb/kernelmat/sym_matrix.hpp"
#include "knlb/sampling/covariance.hpp"
#include "knlb/sampling/sampling.hpp"
#include "knlb/spectral/spectral.hpp"

namespace knlb {

struct Estimate {
  double value = 0.0;
  double std_error = 0.0;
};

nlohmann::json to_json(const Estimate& e);

// Monte Carlo estimates of the general upper-bound terms
//   E max_i |k(x_i, x_i)|,  n sqrt(log n E[(E_z k(x_1, z))^2]),
//   sqrt(n log n E||G||),   log n sqrt(n E max_i (k(z, x_i) - E_x k(z, x))^2)
// and the lower-bound terms E sqrt(n ||G||), E sqrt(sum_{i>1} G_ii), with the
// measured ||K|| and ||diag_perp K|| over the same draws. Logarithms are natural.
struct BoundReport {
  std::size_t n = 0, d = 0, trials = 0;
  std::string kernel;
  Estimate term_diag, term_mean, term_corr, term_max;
  Estimate lower_corr, lower_diag;
  Estimate norm_K, norm_offdiag_K;
  bool closed_form_G = false;
  bool exact_conditional_mean = false;
  bool budget_exhausted = false;  // nested Monte Carlo ran with fewer inner draws than requested

  double total_upper() const { return term_diag.value + term_mean.value + term_corr.value + term_max.value; }
  double lower_max() const { return std::max(lower_corr.value, lower_diag.value); }
  nlohmann::json to_json() const;
};

struct BoundOptions {
  std::size_t z_samples = 4000;  // MC draws for G when no closed form exists
  std::size_t z_outer = 256;     // fresh z per trial for the max-deviation term
  std::size_t m_inner = 2000;    // nested draws for E_x k(z, x) without closed form
  double nested_budget = 4e8;    // kernel evaluations allowed for the nested estimate per trial
  double rel_tol = 1e-6;
  std::size_t workers = 1;
  std::uint64_t point = 0;  // grid point index for stream derivation
};

// Raw per-trial quantities; aggregation is a deterministic mean over trial index.
struct TrialTerms {
  double max_diag, mean_sq, norm_G, max_dev_sq, sqrt_n_norm_G, sqrt_sum_Gii, norm_K, norm_offdiag_K;
  bool budget_exhausted;
};

TrialTerms thm1_trial(const Sampler& sampler, const RowKernel& k, std::size_t n, std::uint64_t seed,
                      std::uint64_t trial, const BoundOptions& opts);

BoundReport aggregate_bound_terms(std::span<const TrialTerms> per_trial, std::size_t n, std::size_t d,
                                  const std::string& kernel, bool closed_form_G);

BoundReport thm1_terms(const Sampler& sampler, const RowKernel& k, std::size_t n, std::size_t trials,
                       std::uint64_t seed, const BoundOptions& opts = {});

// (E sqrt(n ||G||), E sqrt(sum_{i>1} G_ii)) over an ensemble of correlation matrices.
std::pair<Estimate, Estimate> thm2_terms(std::span<const SymMatrix> ensemble, double rel_tol = 1e-6);

struct DecouplingReport {
  std::size_t n = 0, d = 0, trials = 0;
  Estimate norm_delta, norm_delta_tilde;
  double ratio = 0.0, ratio_std_error = 0.0;
  std::vector<double> delta_samples, delta_tilde_samples;
  nlohmann::json to_json() const;
};

DecouplingReport aggregate_decoupling(std::vector<double> delta, std::vector<double> delta_tilde, std::size_t n,
                                      std::size_t d);

// Paired estimates of E||Delta|| and E||Delta~|| with X~ from an independent
// stream (or X itself when coupled = true).
DecouplingReport decoupling_ratio(const Sampler& sampler, const RowKernel& k, std::size_t n, std::size_t trials,
                                  std::uint64_t seed, double rel_tol = 1e-6, std::size_t workers = 1,
                                  std::uint64_t point = 0, bool coupled = false);

}  // namespace knlb
