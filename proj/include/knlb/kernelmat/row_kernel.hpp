#pragma once

#include <optional>
#include <span>
#include <string>

#include "json.hpp"
#include "knlb/kernelmat/kernel_function.hpp"
#include "knlb/sampling/sampling.hpp"

namespace knlb {

// Inner-product kernel k(x, y) = phi(<x, y>). Every kernel used by the matrix
// builders, bound terms and KRR has this shape, so assembly is always a Gram
// (or cross-Gram) followed by an elementwise map.
class RowKernel {
 public:
  enum class Kind { hermite, gegenbauer, inner_product, constant };

  // He_degree(<x, y> / sqrt(tau2))
  static RowKernel hermite(int degree, double tau2);
  // Q_degree^{(d)}(<x, y>) for sphere data of radius sqrt(d).
  static RowKernel gegenbauer(int degree, int d);
  // f(<x, y> / tau1)
  static RowKernel inner_product(KernelFunction f, double tau1);
  static RowKernel constant(double c);

  // {"type": "hermite", "degree": l} | {"type": "gegenbauer", "degree": l}
  // | {"type": "exp" | "power" | "polynomial" | "softplus" | "linear", ...}
  // | {"type": "constant", "value": c}. Scales come from the sampler.
  static RowKernel from_json(const nlohmann::json& j, const Sampler& sampler);
  nlohmann::json to_json() const;

  Kind kind() const { return kind_; }
  int degree() const { return degree_; }
  double scale() const { return scale_; }
  int sphere_dim() const { return d_; }
  const KernelFunction& function() const;

  double from_inner(double t) const;
  // out[i] = phi(t[i]); in and out may alias.
  void map(std::span<const double> t, std::span<double> out) const;
  double operator()(std::span<const double> x, std::span<const double> y) const;

  // True when E_x[k(x, z)] = 0 for every z under the given sampler; the
  // hypothesis of the lower bound.
  bool conditionally_centered(const Sampler& sampler) const;

  std::string describe() const;

 private:
  RowKernel(Kind kind, int degree, double scale, int d, std::optional<KernelFunction> f)
      : kind_(kind), degree_(degree), scale_(scale), d_(d), f_(std::move(f)) {}

  Kind kind_;
  int degree_;
  double scale_;  // tau2 for hermite, tau1 for inner_product, c for constant
  int d_;
  std::optional<KernelFunction> f_;
};

// Relative slack within which Gegenbauer arguments beyond +-d are clamped.
inline constexpr double kGegenbauerSlack = 1e-8;

}  // namespace knlb
