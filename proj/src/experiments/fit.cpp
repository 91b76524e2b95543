#include "knlb/experiments/fit.hpp"

#include <cmath>
#include <stdexcept>

namespace knlb::experiments {

nlohmann::json SlopeFit::to_json() const {
  return {{"slope", slope}, {"intercept", intercept}, {"stderr_slope", stderr_slope}, {"r2", r2}, {"points", points}};
}

SlopeFit fit_loglog(std::span<const std::pair<double, double>> points) {
  if (points.size() < 3) throw std::invalid_argument("fit_loglog needs at least three points");
  std::vector<double> lx, ly;
  for (const auto& [d, v] : points) {
    if (!(d > 0) || !(v > 0)) throw std::invalid_argument("fit_loglog needs positive d and values");
    lx.push_back(std::log(d));
    ly.push_back(std::log(v));
  }
  const double m = double(lx.size());
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < lx.size(); ++i) {
    mx += lx[i];
    my += ly[i];
  }
  mx /= m;
  my /= m;
  double sxx = 0, sxy = 0, syy = 0;
  for (std::size_t i = 0; i < lx.size(); ++i) {
    sxx += (lx[i] - mx) * (lx[i] - mx);
    sxy += (lx[i] - mx) * (ly[i] - my);
    syy += (ly[i] - my) * (ly[i] - my);
  }
  if (sxx == 0) throw std::invalid_argument("fit_loglog needs at least two distinct d");
  SlopeFit f;
  f.points = lx.size();
  f.slope = sxy / sxx;
  f.intercept = my - f.slope * mx;
  double rss = 0;
  for (std::size_t i = 0; i < lx.size(); ++i) {
    const double r = ly[i] - (f.intercept + f.slope * lx[i]);
    rss += r * r;
  }
  f.r2 = syy > 0 ? 1.0 - rss / syy : 1.0;
  f.stderr_slope = std::sqrt(rss / (m - 2.0) / sxx);
  return f;
}

double lag1_autocorrelation(std::span<const double> v) {
  if (v.size() < 3) return 0.0;
  double mean = 0;
  for (double x : v) mean += x;
  mean /= double(v.size());
  double num = 0, den = 0;
  for (std::size_t i = 0; i < v.size(); ++i) {
    den += (v[i] - mean) * (v[i] - mean);
    if (i + 1 < v.size()) num += (v[i] - mean) * (v[i + 1] - mean);
  }
  return den > 0 ? num / den : 0.0;
}

}  // namespace knlb::experiments
