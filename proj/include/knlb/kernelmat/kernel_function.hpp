#pragma once

#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"

namespace knlb {

class InsufficientDerivatives : public std::invalid_argument {
 public:
  InsufficientDerivatives(int needed, int available)
      : std::invalid_argument("kernel function supplies derivatives up to order " + std::to_string(available) +
                              ", order " + std::to_string(needed) + " required") {}
};

// Scalar profile f of an inner-product kernel k(x, x') = f(<x, x'> / tr Sigma),
// together with its exact derivative table at 0 and the value f(1).
class KernelFunction {
 public:
  KernelFunction(std::string name, nlohmann::json params, std::function<double(double)> eval,
                 std::vector<double> deriv0, double f_at_1);

  // exp(t); every derivative at 0 equals 1.
  static KernelFunction exponential(int max_order = 24);
  // (1 + t)^p
  static KernelFunction power(double p, int max_order = 24);
  // sum_i coeffs[i] t^i
  static KernelFunction polynomial(std::vector<double> coeffs);
  // log(1 + e^t) / log 2, so f(0) = 1.
  static KernelFunction softplus(int max_order = 24);

  static KernelFunction from_json(const nlohmann::json& j);
  nlohmann::json to_json() const;

  double operator()(double t) const { return eval_(t); }
  // f^{(order)}(0); throws InsufficientDerivatives beyond the table.
  double deriv0(int order) const;
  int max_order() const { return int(deriv0_.size()) - 1; }
  double at_one() const { return f_at_1_; }
  const std::string& name() const { return name_; }

 private:
  std::string name_;
  nlohmann::json params_;
  std::function<double(double)> eval_;
  std::vector<double> deriv0_;
  double f_at_1_;
};

}  // namespace knlb
