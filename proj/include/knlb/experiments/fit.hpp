#pragma once

#include <span>
#include <utility>
#include <vector>

#include "json.hpp"

namespace knlb::experiments {

struct SlopeFit {
  double slope = 0.0;
  double intercept = 0.0;
  double stderr_slope = 0.0;
  double r2 = 0.0;
  std::size_t points = 0;
  nlohmann::json to_json() const;
};

// OLS of log(value) on log(d). Needs at least three points with positive values;
// throws std::invalid_argument otherwise.
SlopeFit fit_loglog(std::span<const std::pair<double, double>> points);

// Sample lag-1 autocorrelation of a sequence (0 for fewer than 3 values or zero variance).
double lag1_autocorrelation(std::span<const double> v);

}  // namespace knlb::experiments
