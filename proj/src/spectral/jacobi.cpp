#include <algorithm>
#include <cmath>

#include "knlb/spectral/spectral.hpp"

namespace knlb::spectral {

std::vector<double> jacobi_eigenvalues(const SymMatrix& a, double tol, int max_sweeps) {
  const std::size_t n = a.size();
  std::vector<double> m(a.values());
  auto at = [&](std::size_t i, std::size_t j) -> double& { return m[i * n + j]; };

  double total = 0.0;
  for (double v : m) total += v * v;
  const double scale = std::sqrt(total);

  for (int sweep = 0; sweep < max_sweeps; ++sweep) {
    double off = 0.0;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i + 1; j < n; ++j) off += at(i, j) * at(i, j);
    if (std::sqrt(2.0 * off) <= tol * scale) break;
    if (sweep + 1 == max_sweeps) throw ConvergenceError("jacobi did not converge", std::sqrt(2.0 * off) / scale);

    for (std::size_t p = 0; p + 1 < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        const double apq = at(p, q);
        if (apq == 0.0) continue;
        const double app = at(p, p), aqq = at(q, q);
        const double theta = (aqq - app) / (2.0 * apq);
        const double t = std::copysign(1.0, theta) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0), s = t * c;
        for (std::size_t k = 0; k < n; ++k) {
          const double akp = at(k, p), akq = at(k, q);
          at(k, p) = c * akp - s * akq;
          at(k, q) = s * akp + c * akq;
        }
        for (std::size_t k = 0; k < n; ++k) {
          const double apk = at(p, k), aqk = at(q, k);
          at(p, k) = c * apk - s * aqk;
          at(q, k) = s * apk + c * aqk;
        }
        at(p, q) = at(q, p) = 0.0;
      }
    }
  }
  std::vector<double> ev(n);
  for (std::size_t i = 0; i < n; ++i) ev[i] = at(i, i);
  std::sort(ev.begin(), ev.end());
  return ev;
}

}  // namespace knlb::spectral
