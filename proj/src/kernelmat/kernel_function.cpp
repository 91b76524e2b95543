#include "knlb/kernelmat/kernel_function.hpp"

#include <cmath>

namespace knlb {

KernelFunction::KernelFunction(std::string name, nlohmann::json params, std::function<double(double)> eval,
                               std::vector<double> deriv0, double f_at_1)
    : name_(std::move(name)),
      params_(std::move(params)),
      eval_(std::move(eval)),
      deriv0_(std::move(deriv0)),
      f_at_1_(f_at_1) {
  if (deriv0_.empty()) throw std::invalid_argument("kernel function needs at least f(0)");
}

double KernelFunction::deriv0(int order) const {
  if (order < 0) throw std::invalid_argument("negative derivative order");
  if (order > max_order()) throw InsufficientDerivatives(order, max_order());
  return deriv0_[order];
}

KernelFunction KernelFunction::exponential(int max_order) {
  return KernelFunction("exp", {{"max_order", max_order}}, [](double t) { return std::exp(t); },
                        std::vector<double>(std::size_t(max_order) + 1, 1.0), std::exp(1.0));
}

KernelFunction KernelFunction::power(double p, int max_order) {
  std::vector<double> d(std::size_t(max_order) + 1);
  double falling = 1.0;
  for (int l = 0; l <= max_order; ++l) {
    d[l] = falling;
    falling *= (p - l);
  }
  return KernelFunction("power", {{"p", p}, {"max_order", max_order}},
                        [p](double t) { return std::pow(1.0 + t, p); }, std::move(d), std::pow(2.0, p));
}

KernelFunction KernelFunction::polynomial(std::vector<double> coeffs) {
  if (coeffs.empty()) coeffs = {0.0};
  std::vector<double> d(coeffs.size() + 1, 0.0);
  double factorial = 1.0;
  for (std::size_t l = 0; l < coeffs.size(); ++l) {
    if (l > 0) factorial *= double(l);
    d[l] = coeffs[l] * factorial;
  }
  // Derivatives past the degree are zero; keep a generous table so the
  // approximation builders never run out.
  d.resize(std::max<std::size_t>(d.size(), 25), 0.0);
  double at1 = 0.0;
  for (double c : coeffs) at1 += c;
  auto eval = [coeffs](double t) {
    double acc = 0.0;
    for (std::size_t i = coeffs.size(); i-- > 0;) acc = acc * t + coeffs[i];
    return acc;
  };
  return KernelFunction("polynomial", {{"coeffs", coeffs}}, std::move(eval), std::move(d), at1);
}

KernelFunction KernelFunction::softplus(int max_order) {
  // sigma^{(n)} = P_n(sigma) with P_0(s) = s, P_{n+1}(s) = P_n'(s) s (1 - s);
  // f = softplus / log 2, f' = sigma / log 2.
  const double ln2 = std::log(2.0);
  std::vector<double> d(std::size_t(max_order) + 1);
  d[0] = 1.0;
  std::vector<double> p = {0.0, 1.0};  // coefficients in s
  for (int l = 1; l <= max_order; ++l) {
    double v = 0.0, pw = 1.0;
    for (double c : p) {
      v += c * pw;
      pw *= 0.5;
    }
    d[l] = v / ln2;
    std::vector<double> dp(p.size() > 1 ? p.size() - 1 : 1, 0.0);
    for (std::size_t i = 1; i < p.size(); ++i) dp[i - 1] = double(i) * p[i];
    // multiply by s - s^2
    std::vector<double> next(dp.size() + 2, 0.0);
    for (std::size_t i = 0; i < dp.size(); ++i) {
      next[i + 1] += dp[i];
      next[i + 2] -= dp[i];
    }
    p = std::move(next);
  }
  auto eval = [ln2](double t) {
    const double sp = t > 0 ? t + std::log1p(std::exp(-t)) : std::log1p(std::exp(t));
    return sp / ln2;
  };
  return KernelFunction("softplus", {{"max_order", max_order}}, eval, std::move(d), eval(1.0));
}

KernelFunction KernelFunction::from_json(const nlohmann::json& j) {
  const std::string type = j.at("type").get<std::string>();
  const int max_order = j.value("max_order", 24);
  if (type == "exp") return exponential(max_order);
  if (type == "power") return power(j.at("p").get<double>(), max_order);
  if (type == "polynomial") return polynomial(j.at("coeffs").get<std::vector<double>>());
  if (type == "softplus") return softplus(max_order);
  if (type == "linear") return polynomial({0.0, 1.0});
  throw std::invalid_argument("unknown kernel function type '" + type + "'");
}

nlohmann::json KernelFunction::to_json() const {
  nlohmann::json j = params_;
  j["type"] = name_;
  return j;
}

}  // namespace knlb
