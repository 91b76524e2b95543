#include "knlb/kernelmat/row_kernel.hpp"

#include <cmath>
#include <stdexcept>
#include <vector>

#include "knlb/orthopoly/gegenbauer.hpp"
#include "knlb/orthopoly/hermite.hpp"
#include "knlb/simd/kernels.hpp"

namespace knlb {

RowKernel RowKernel::hermite(int degree, double tau2) {
  if (degree < 0) throw std::invalid_argument("hermite kernel: negative degree");
  if (!(tau2 > 0)) throw std::invalid_argument("hermite kernel: tau2 must be positive");
  return RowKernel(Kind::hermite, degree, tau2, 0, std::nullopt);
}

RowKernel RowKernel::gegenbauer(int degree, int d) {
  if (degree < 0) throw std::invalid_argument("gegenbauer kernel: negative degree");
  if (d < 3) throw std::invalid_argument("gegenbauer kernel: d must be at least 3");
  return RowKernel(Kind::gegenbauer, degree, 0.0, d, std::nullopt);
}

RowKernel RowKernel::inner_product(KernelFunction f, double tau1) {
  if (!(tau1 > 0)) throw std::invalid_argument("inner-product kernel: tau1 must be positive");
  return RowKernel(Kind::inner_product, 0, tau1, 0, std::move(f));
}

RowKernel RowKernel::constant(double c) { return RowKernel(Kind::constant, 0, c, 0, std::nullopt); }

RowKernel RowKernel::from_json(const nlohmann::json& j, const Sampler& sampler) {
  const std::string type = j.at("type").get<std::string>();
  if (type == "hermite") return hermite(j.at("degree").get<int>(), sampler.spec().tau(2));
  if (type == "gegenbauer") return gegenbauer(j.at("degree").get<int>(), int(sampler.dim()));
  if (type == "constant") return constant(j.value("value", 1.0));
  return inner_product(KernelFunction::from_json(j), sampler.spec().tau(1));
}

nlohmann::json RowKernel::to_json() const {
  switch (kind_) {
    case Kind::hermite:
      return {{"type", "hermite"}, {"degree", degree_}};
    case Kind::gegenbauer:
      return {{"type", "gegenbauer"}, {"degree", degree_}};
    case Kind::constant:
      return {{"type", "constant"}, {"value", scale_}};
    case Kind::inner_product:
      return f_->to_json();
  }
  return {};
}

const KernelFunction& RowKernel::function() const {
  if (!f_) throw std::logic_error("kernel carries no scalar profile");
  return *f_;
}

namespace {

double clamp_gegenbauer(double t, int d) {
  const double lim = double(d);
  if (std::abs(t) <= lim) return t;
  if (std::abs(t) <= lim * (1.0 + kGegenbauerSlack)) return std::copysign(lim, t);
  throw std::domain_error("gegenbauer argument " + std::to_string(t) + " outside [-d, d] for d = " +
                          std::to_string(d));
}

}  // namespace

double RowKernel::from_inner(double t) const {
  switch (kind_) {
    case Kind::hermite:
      return orthopoly::hermite_eval(degree_, t / std::sqrt(scale_));
    case Kind::gegenbauer: {
      double out = 0.0;
      const double c = clamp_gegenbauer(t, d_);
      simd::scalar_kernels().gegenbauer_map(&c, &out, 1, degree_, d_);
      return out;
    }
    case Kind::inner_product:
      return (*f_)(t / scale_);
    case Kind::constant:
      return scale_;
  }
  return 0.0;
}

void RowKernel::map(std::span<const double> t, std::span<double> out) const {
  if (t.size() != out.size()) throw std::invalid_argument("RowKernel::map: size mismatch");
  const auto& k = simd::active();
  switch (kind_) {
    case Kind::hermite:
      k.hermite_map(t.data(), out.data(), t.size(), degree_, 1.0 / std::sqrt(scale_));
      return;
    case Kind::gegenbauer: {
      std::vector<double> clamped(t.size());
      for (std::size_t i = 0; i < t.size(); ++i) clamped[i] = clamp_gegenbauer(t[i], d_);
      k.gegenbauer_map(clamped.data(), out.data(), t.size(), degree_, d_);
      return;
    }
    case Kind::inner_product:
      for (std::size_t i = 0; i < t.size(); ++i) out[i] = (*f_)(t[i] / scale_);
      return;
    case Kind::constant:
      std::fill(out.begin(), out.end(), scale_);
      return;
  }
}

double RowKernel::operator()(std::span<const double> x, std::span<const double> y) const {
  if (x.size() != y.size()) throw std::invalid_argument("RowKernel: dimension mismatch");
  return from_inner(simd::active().dot(x.data(), y.data(), x.size()));
}

bool RowKernel::conditionally_centered(const Sampler& sampler) const {
  switch (kind_) {
    case Kind::hermite:
      // Even degrees have a nonzero conditional mean whenever x^T Sigma x != tau2.
      return sampler.kind() == DistributionKind::gaussian && degree_ % 2 == 1;
    case Kind::gegenbauer:
      return sampler.kind() == DistributionKind::sphere && degree_ >= 1;
    case Kind::constant:
      return scale_ == 0.0;
    case Kind::inner_product:
      return false;
  }
  return false;
}

std::string RowKernel::describe() const {
  switch (kind_) {
    case Kind::hermite:
      return "hermite(" + std::to_string(degree_) + ")";
    case Kind::gegenbauer:
      return "gegenbauer(" + std::to_string(degree_) + ", d=" + std::to_string(d_) + ")";
    case Kind::inner_product:
      return "f=" + f_->name();
    case Kind::constant:
      return "constant";
  }
  return "?";
}

}  // namespace knlb
