#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "json.hpp"
#include "knlb/sampling/covariance.hpp"
#include "knlb/sampling/sampling.hpp"

namespace knlb {

// Additive single-index target g*(x) = sum_k c_k g_k(<Sigma^{-1/2} x, v_k>) with
// g_k = sum_j alpha_{jk} He_j and unit directions v_k.
class TargetFunction {
 public:
  struct Term {
    double weight;
    std::vector<double> direction;
    std::vector<double> hermite;  // alpha_{0k}, alpha_{1k}, ...
  };

  TargetFunction() = default;
  explicit TargetFunction(std::vector<Term> terms);

  // Single term He_degree(<z, v>).
  static TargetFunction single_hermite(std::size_t d, int degree, std::vector<double> direction = {});

  // {"terms": [{"weight": 1, "direction": "e1" | "uniform" | [..], "hermite": [..]}]}
  static TargetFunction from_json(const nlohmann::json& j, std::size_t d);
  nlohmann::json to_json() const;

  const std::vector<Term>& terms() const { return terms_; }
  std::size_t dim() const { return terms_.empty() ? 0 : terms_.front().direction.size(); }
  int max_degree() const;

  // g*(x) for one row.
  double operator()(std::span<const double> x, const CovarianceSpec& spec) const;

 private:
  std::vector<Term> terms_;
};

// g*(x_i) for every row; throws std::domain_error for singular Sigma.
std::vector<double> target_eval(const TargetFunction& g, const DataMatrix& x, const CovarianceSpec& spec);

struct NormAndTail {
  double norm2;
  double tail;  // squared L2 distance to the best polynomial of degree <= D
};

NormAndTail target_norm_and_tail(const TargetFunction& g, int degree);

}  // namespace knlb
