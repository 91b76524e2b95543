#include "knlb/krr/krr.hpp"

#include <cmath>

#include "knlb/kernelmat/builders.hpp"
#include "knlb/sampling/rng.hpp"
#include "knlb/simd/kernels.hpp"
#include "knlb/spectral/spectral.hpp"
#include "knlb/util/stats.hpp"

namespace knlb {

namespace {

constexpr double kMinEigFloor = 1e-8;
constexpr double kJitter = 1e-10;

}  // namespace

RidgeSystem::RidgeSystem(const SymMatrix& k, double lambda) : n_(k.size()) {
  if (lambda < 0) throw std::invalid_argument("ridge parameter must be non-negative");
  SymMatrix a = k;
  for (std::size_t i = 0; i < n_; ++i) a.at_raw(i, i) += lambda;
  min_eig_ = spectral::min_eig(a, 1e-8);
  if (min_eig_ <= 0 || (lambda == 0 && min_eig_ <= kMinEigFloor)) throw SingularSystemError(min_eig_);
  if (min_eig_ < kMinEigFloor) {
    for (std::size_t i = 0; i < n_; ++i) a.at_raw(i, i) += kJitter;
    jitter_ = true;
  }
  const Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>> map(
      a.data(), Eigen::Index(n_), Eigen::Index(n_));
  llt_.compute(map);
  if (llt_.info() != Eigen::Success) throw SingularSystemError(min_eig_);
}

std::vector<double> RidgeSystem::solve(std::span<const double> rhs) const {
  if (rhs.size() != n_) throw std::invalid_argument("RidgeSystem::solve: size mismatch");
  const Eigen::Map<const Eigen::VectorXd> b(rhs.data(), Eigen::Index(n_));
  const Eigen::VectorXd x = llt_.solve(b);
  return {x.data(), x.data() + n_};
}

MVEstimate estimate_M_V(const DataMatrix& x, const RowKernel& k, const TargetFunction& g,
                        const CovarianceSpec& spec, std::size_t m, std::uint64_t seed, std::uint64_t stream,
                        bool keep_samples) {
  if (m < kMinMvDraws) throw std::invalid_argument("estimate_M_V needs at least " + std::to_string(kMinMvDraws) + " draws");
  const std::size_t n = x.rows();
  const DataMatrix z = sample_gaussian(m, spec, seed, stream);
  std::vector<double> kz = cross_gram(x, z);  // n x m
  k.map(kz, kz);
  std::vector<double> gz = target_eval(g, z, spec);

  const auto& simd = simd::active();
  const double md = double(m);
  MVEstimate out;
  out.m = m;
  out.M = SymMatrix(n, MatrixTag::M);
  out.M_std_error = SymMatrix(n);
  simd.gram(kz.data(), n, m, out.M.data());
  {
    std::vector<double> sq(kz.size());
    for (std::size_t t = 0; t < kz.size(); ++t) sq[t] = kz[t] * kz[t];
    simd.gram(sq.data(), n, m, out.M_std_error.data());
  }
  for (std::size_t t = 0; t < n * n; ++t) {
    const double mean = out.M.data()[t] / md;
    const double var = std::max(0.0, out.M_std_error.data()[t] / md - mean * mean) * md / (md - 1.0);
    out.M.data()[t] = mean;
    out.M_std_error.data()[t] = std::sqrt(var / md);
  }
  out.V.resize(n);
  out.V_std_error.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    RunningStats rs;
    for (std::size_t s = 0; s < m; ++s) rs.add(gz[s] * kz[i * m + s]);
    out.V[i] = rs.mean();
    out.V_std_error[i] = rs.std_error();
  }
  if (keep_samples) {
    out.kz = std::move(kz);
    out.gz = std::move(gz);
  }
  return out;
}

namespace {

BiasResult bias_core(const SymMatrix& k, std::span<const double> g, const SymMatrix& m, std::span<const double> v,
                     double norm2, double lambda) {
  const std::size_t n = k.size();
  if (g.size() != n || v.size() != n || m.size() != n) throw std::invalid_argument("krr_bias: size mismatch");
  const RidgeSystem sys(k, lambda);
  BiasResult r;
  r.alpha = sys.solve(g);
  r.min_eig = sys.min_eig();
  r.jitter_used = sys.jitter_used();
  r.norm2 = norm2;
  double av = 0.0;
  for (std::size_t i = 0; i < n; ++i) av += r.alpha[i] * v[i];
  std::vector<double> ma(n);
  m.multiply(r.alpha, ma);
  double q = 0.0;
  for (std::size_t i = 0; i < n; ++i) q += r.alpha[i] * ma[i];
  r.cross = -2.0 * av;
  r.quad = q;
  r.bias = norm2 + r.cross + r.quad;
  return r;
}

}  // namespace

BiasResult krr_bias(const SymMatrix& k, std::span<const double> g, const SymMatrix& m, std::span<const double> v,
                    double norm2, double lambda) {
  return bias_core(k, g, m, v, norm2, lambda);
}

BiasResult krr_bias(const SymMatrix& k, std::span<const double> g, const MVEstimate& mv, double norm2,
                    double lambda) {
  BiasResult r = bias_core(k, g, mv.M, mv.V, norm2, lambda);
  if (!mv.kz.empty()) {
    // Per draw: g^(z)^2 - 2 g*(z) g^(z); its mean is quad + cross.
    const std::size_t n = k.size(), m = mv.m;
    std::vector<double> ghat(m, 0.0);
    for (std::size_t i = 0; i < n; ++i) simd::active().axpy(r.alpha[i], mv.kz.data() + i * m, ghat.data(), m);
    RunningStats rs;
    for (std::size_t s = 0; s < m; ++s) rs.add(ghat[s] * ghat[s] - 2.0 * mv.gz[s] * ghat[s]);
    r.std_error = rs.std_error();
  }
  return r;
}

nlohmann::json BiasResult::to_json() const {
  return {{"bias", bias},   {"norm2", norm2},     {"cross", cross},          {"quad", quad},
          {"stderr", std_error}, {"min_eig", min_eig}, {"jitter_used", jitter_used}};
}

RegressionProblem make_problem(DataMatrix x, const TargetFunction& g, const CovarianceSpec& spec, RowKernel k,
                               double lambda, double noise, std::uint64_t seed, std::uint64_t stream) {
  std::vector<double> y = target_eval(g, x, spec);
  if (noise > 0) {
    RandomStream rng(seed, stream);
    for (double& v : y) v += noise * rng.gaussian();
  }
  return RegressionProblem{std::move(x), std::move(y), noise, lambda, std::move(k), spec};
}

KrrModel::KrrModel(const RegressionProblem& p) : x_(p.x), kernel_(p.kernel) {
  if (p.y.size() != p.x.rows()) throw std::invalid_argument("labels do not match the sample count");
  const RidgeSystem sys(build_kernel_matrix(p.x, p.kernel), p.lambda);
  coef_ = sys.solve(p.y);
}

double KrrModel::predict(std::span<const double> x_new) const {
  double acc = 0.0;
  for (std::size_t i = 0; i < x_.rows(); ++i) acc += coef_[i] * kernel_(x_.row(i), x_new);
  return acc;
}

std::vector<double> KrrModel::predict(const DataMatrix& x_new) const {
  std::vector<double> kz = cross_gram(x_new, x_);  // rows: new points
  kernel_.map(kz, kz);
  std::vector<double> out(x_new.rows());
  for (std::size_t s = 0; s < x_new.rows(); ++s)
    out[s] = simd::active().dot(kz.data() + s * x_.rows(), coef_.data(), x_.rows());
  return out;
}

double krr_predict(const RegressionProblem& p, std::span<const double> x_new) { return KrrModel(p).predict(x_new); }

Estimate krr_bias_mc(const DataMatrix& x, const RowKernel& k, const TargetFunction& g, const CovarianceSpec& spec,
                     double lambda, std::size_t test_points, std::uint64_t seed, std::uint64_t stream) {
  const RegressionProblem p{x, target_eval(g, x, spec), 0.0, lambda, k, spec};
  const KrrModel model(p);
  const DataMatrix t = sample_gaussian(test_points, spec, seed, stream);
  const std::vector<double> pred = model.predict(t);
  const std::vector<double> truth = target_eval(g, t, spec);
  RunningStats rs;
  for (std::size_t s = 0; s < t.rows(); ++s) rs.add((pred[s] - truth[s]) * (pred[s] - truth[s]));
  return {rs.mean(), rs.std_error()};
}

}  // namespace knlb
