#pragma once

#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Cholesky>

#include "json.hpp"
#include "knlb/bounds/bounds.hpp"
#include "knlb/kernelmat/row_kernel.hpp"
#include "knlb/kernelmat/sym_matrix.hpp"
#include "knlb/krr/target.hpp"
#include "knlb/sampling/covariance.hpp"
#include "knlb/sampling/sampling.hpp"

namespace knlb {

class SingularSystemError : public std::runtime_error {
 public:
  explicit SingularSystemError(double min_eig)
      : std::runtime_error("K + lambda I is not safely invertible (min eigenvalue " + std::to_string(min_eig) + ")"),
        min_eig_(min_eig) {}
  double min_eig() const { return min_eig_; }

 private:
  double min_eig_;
};

// Cholesky factorization of K + lambda I. A jitter of 1e-10 is added only when
// the smallest eigenvalue lies in (0, 1e-8); for lambda = 0 the smallest
// eigenvalue must exceed 1e-8.
class RidgeSystem {
 public:
  RidgeSystem(const SymMatrix& k, double lambda);

  std::vector<double> solve(std::span<const double> rhs) const;
  double min_eig() const { return min_eig_; }
  bool jitter_used() const { return jitter_; }
  std::size_t size() const { return n_; }

 private:
  std::size_t n_;
  Eigen::LLT<Eigen::MatrixXd> llt_;
  double min_eig_;
  bool jitter_ = false;
};

inline constexpr std::size_t kMinMvDraws = 1000;

struct MVEstimate {
  SymMatrix M, M_std_error;
  std::vector<double> V, V_std_error;
  std::size_t m = 0;
  // Per-draw values kept for downstream standard errors: kz[i * m + s] = k(x_i, z_s), gz[s] = g*(z_s).
  std::vector<double> kz, gz;
};

// M_ij = E_x[k(x, x_i) k(x, x_j)] and V_i = E_x[g*(x) k(x, x_i)] from one shared
// set of m Gaussian draws.
MVEstimate estimate_M_V(const DataMatrix& x, const RowKernel& k, const TargetFunction& g,
                        const CovarianceSpec& spec, std::size_t m, std::uint64_t seed, std::uint64_t stream,
                        bool keep_samples = true);

struct BiasResult {
  double bias = 0.0;
  double norm2 = 0.0;  // ||g*||^2
  double cross = 0.0;  // -2 g^T A^{-1} V
  double quad = 0.0;   // g^T A^{-1} M A^{-1} g
  double std_error = 0.0;  // Monte Carlo error from the M / V draws, when samples were kept
  double min_eig = 0.0;
  bool jitter_used = false;
  std::vector<double> alpha;  // A^{-1} g
  nlohmann::json to_json() const;
};

// ||g*||^2 - 2 g^T (K + lambda I)^{-1} V + g^T (K + lambda I)^{-1} M (K + lambda I)^{-1} g.
BiasResult krr_bias(const SymMatrix& k, std::span<const double> g, const SymMatrix& m,
                    std::span<const double> v, double norm2, double lambda);
// Same, with the standard error taken from the kept draws of `mv`.
BiasResult krr_bias(const SymMatrix& k, std::span<const double> g, const MVEstimate& mv, double norm2,
                    double lambda);

struct RegressionProblem {
  DataMatrix x;
  std::vector<double> y;
  double noise = 0.0;
  double lambda = 0.0;
  RowKernel kernel;
  CovarianceSpec spec;
};

// y_i = g*(x_i) + noise * eps_i with eps from the problem's noise stream.
RegressionProblem make_problem(DataMatrix x, const TargetFunction& g, const CovarianceSpec& spec, RowKernel k,
                               double lambda, double noise, std::uint64_t seed, std::uint64_t stream);

// g^(x) = y^T (K + lambda I)^{-1} k_X(x), factorized once.
class KrrModel {
 public:
  explicit KrrModel(const RegressionProblem& p);
  double predict(std::span<const double> x_new) const;
  std::vector<double> predict(const DataMatrix& x_new) const;
  const std::vector<double>& coefficients() const { return coef_; }

 private:
  DataMatrix x_;
  RowKernel kernel_;
  std::vector<double> coef_;
};

double krr_predict(const RegressionProblem& p, std::span<const double> x_new);

// Direct estimate of ||E_eps g^ - g*||^2 on fresh draws: noise-free labels y = g
// so the predictor is exactly E_eps g^.
Estimate krr_bias_mc(const DataMatrix& x, const RowKernel& k, const TargetFunction& g, const CovarianceSpec& spec,
                     double lambda, std::size_t test_points, std::uint64_t seed, std::uint64_t stream);

}  // namespace knlb
