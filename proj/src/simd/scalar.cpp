#include "knlb/simd/kernels.hpp"

namespace knlb::simd {
namespace {

double dot_scalar(const double* a, const double* b, std::size_t n) {
  double s = 0.0;
  for (std::size_t k = 0; k < n; ++k) s += a[k] * b[k];
  return s;
}

void axpy_scalar(double alpha, const double* x, double* y, std::size_t n) {
  for (std::size_t k = 0; k < n; ++k) y[k] += alpha * x[k];
}

void cross_gram_scalar(const double* a, std::size_t na, const double* b, std::size_t nb,
                       std::size_t d, double* out, std::size_t ldo) {
  for (std::size_t i = 0; i < na; ++i)
    for (std::size_t j = 0; j < nb; ++j) out[i * ldo + j] = dot_scalar(a + i * d, b + j * d, d);
}

void gram_scalar(const double* x, std::size_t n, std::size_t d, double* out) {
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i; j < n; ++j) {
      const double v = dot_scalar(x + i * d, x + j * d, d);
      out[i * n + j] = v;
      out[j * n + i] = v;
    }
  }
}

void symv_scalar(const double* a, std::size_t n, const double* x, double* y) {
  for (std::size_t i = 0; i < n; ++i) y[i] = dot_scalar(a + i * n, x, n);
}

void hermite_map_scalar(const double* in, double* out, std::size_t n, int degree, double scale) {
  for (std::size_t i = 0; i < n; ++i) {
    const double x = scale * in[i];
    if (degree == 0) {
      out[i] = 1.0;
      continue;
    }
    double prev = 1.0, cur = x;
    for (int k = 1; k < degree; ++k) {
      const double next = x * cur - k * prev;
      prev = cur;
      cur = next;
    }
    out[i] = cur;
  }
}

void gegenbauer_map_scalar(const double* in, double* out, std::size_t n, int degree, int d) {
  const double inv_d = 1.0 / d;
  for (std::size_t i = 0; i < n; ++i) {
    const double s = in[i] * inv_d;
    if (degree == 0) {
      out[i] = 1.0;
      continue;
    }
    double prev = 1.0, cur = s;
    for (int k = 1; k < degree; ++k) {
      const double a = double(2 * k + d - 2) / double(k + d - 2);
      const double b = double(k) / double(k + d - 2);
      const double next = a * s * cur - b * prev;
      prev = cur;
      cur = next;
    }
    out[i] = cur;
  }
}

constexpr KernelTable kScalar{
    Isa::scalar,     dot_scalar,   axpy_scalar,        cross_gram_scalar,
    gram_scalar,     symv_scalar,  hermite_map_scalar, gegenbauer_map_scalar,
};

}  // namespace

const KernelTable& scalar_kernels() { return kScalar; }

}  // namespace knlb::simd
