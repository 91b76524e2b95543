// Compiled with -mavx2 -mfma; only reached after a runtime CPU check.
#include <immintrin.h>

#include "knlb/simd/kernels.hpp"

namespace knlb::simd {
namespace {

inline double hsum(__m256d v) {
  const __m128d lo = _mm256_castpd256_pd128(v);
  const __m128d hi = _mm256_extractf128_pd(v, 1);
  const __m128d s = _mm_add_pd(lo, hi);
  return _mm_cvtsd_f64(_mm_add_sd(s, _mm_unpackhi_pd(s, s)));
}

double dot_avx2(const double* a, const double* b, std::size_t n) {
  __m256d acc0 = _mm256_setzero_pd(), acc1 = _mm256_setzero_pd();
  __m256d acc2 = _mm256_setzero_pd(), acc3 = _mm256_setzero_pd();
  std::size_t k = 0;
  for (; k + 16 <= n; k += 16) {
    acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(a + k), _mm256_loadu_pd(b + k), acc0);
    acc1 = _mm256_fmadd_pd(_mm256_loadu_pd(a + k + 4), _mm256_loadu_pd(b + k + 4), acc1);
    acc2 = _mm256_fmadd_pd(_mm256_loadu_pd(a + k + 8), _mm256_loadu_pd(b + k + 8), acc2);
    acc3 = _mm256_fmadd_pd(_mm256_loadu_pd(a + k + 12), _mm256_loadu_pd(b + k + 12), acc3);
  }
  for (; k + 4 <= n; k += 4)
    acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(a + k), _mm256_loadu_pd(b + k), acc0);
  double s = hsum(_mm256_add_pd(_mm256_add_pd(acc0, acc1), _mm256_add_pd(acc2, acc3)));
  for (; k < n; ++k) s += a[k] * b[k];
  return s;
}

void axpy_avx2(double alpha, const double* x, double* y, std::size_t n) {
  const __m256d va = _mm256_set1_pd(alpha);
  std::size_t k = 0;
  for (; k + 4 <= n; k += 4)
    _mm256_storeu_pd(y + k, _mm256_fmadd_pd(va, _mm256_loadu_pd(x + k), _mm256_loadu_pd(y + k)));
  for (; k < n; ++k) y[k] += alpha * x[k];
}

// Four rows of `a` against one row of `b`.
inline void dot4(const double* a0, const double* a1, const double* a2, const double* a3,
                 const double* b, std::size_t d, double* res) {
  __m256d s0 = _mm256_setzero_pd(), s1 = _mm256_setzero_pd();
  __m256d s2 = _mm256_setzero_pd(), s3 = _mm256_setzero_pd();
  std::size_t k = 0;
  for (; k + 4 <= d; k += 4) {
    const __m256d vb = _mm256_loadu_pd(b + k);
    s0 = _mm256_fmadd_pd(_mm256_loadu_pd(a0 + k), vb, s0);
    s1 = _mm256_fmadd_pd(_mm256_loadu_pd(a1 + k), vb, s1);
    s2 = _mm256_fmadd_pd(_mm256_loadu_pd(a2 + k), vb, s2);
    s3 = _mm256_fmadd_pd(_mm256_loadu_pd(a3 + k), vb, s3);
  }
  double r0 = hsum(s0), r1 = hsum(s1), r2 = hsum(s2), r3 = hsum(s3);
  for (; k < d; ++k) {
    r0 += a0[k] * b[k];
    r1 += a1[k] * b[k];
    r2 += a2[k] * b[k];
    r3 += a3[k] * b[k];
  }
  res[0] = r0;
  res[1] = r1;
  res[2] = r2;
  res[3] = r3;
}

void cross_gram_avx2(const double* a, std::size_t na, const double* b, std::size_t nb,
                     std::size_t d, double* out, std::size_t ldo) {
  std::size_t i = 0;
  double r[4];
  for (; i + 4 <= na; i += 4) {
    const double* a0 = a + i * d;
    for (std::size_t j = 0; j < nb; ++j) {
      dot4(a0, a0 + d, a0 + 2 * d, a0 + 3 * d, b + j * d, d, r);
      for (int t = 0; t < 4; ++t) out[(i + t) * ldo + j] = r[t];
    }
  }
  for (; i < na; ++i)
    for (std::size_t j = 0; j < nb; ++j) out[i * ldo + j] = dot_avx2(a + i * d, b + j * d, d);
}

void gram_avx2(const double* x, std::size_t n, std::size_t d, double* out) {
  std::size_t i = 0;
  double r[4];
  for (; i + 4 <= n; i += 4) {
    const double* a0 = x + i * d;
    for (std::size_t j = i; j < n; ++j) {
      dot4(a0, a0 + d, a0 + 2 * d, a0 + 3 * d, x + j * d, d, r);
      for (std::size_t t = 0; t < 4; ++t) {
        if (j < i + t) continue;
        out[(i + t) * n + j] = r[t];
        out[j * n + i + t] = r[t];
      }
    }
  }
  for (; i < n; ++i) {
    for (std::size_t j = i; j < n; ++j) {
      const double v = dot_avx2(x + i * d, x + j * d, d);
      out[i * n + j] = v;
      out[j * n + i] = v;
    }
  }
}

void symv_avx2(const double* a, std::size_t n, const double* x, double* y) {
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const double* a0 = a + i * n;
    dot4(a0, a0 + n, a0 + 2 * n, a0 + 3 * n, x, n, y + i);
  }
  for (; i < n; ++i) y[i] = dot_avx2(a + i * n, x, n);
}

void hermite_map_avx2(const double* in, double* out, std::size_t n, int degree, double scale) {
  const __m256d vs = _mm256_set1_pd(scale);
  const __m256d one = _mm256_set1_pd(1.0);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d x = _mm256_mul_pd(vs, _mm256_loadu_pd(in + i));
    if (degree == 0) {
      _mm256_storeu_pd(out + i, one);
      continue;
    }
    __m256d prev = one, cur = x;
    for (int k = 1; k < degree; ++k) {
      const __m256d next = _mm256_fmsub_pd(x, cur, _mm256_mul_pd(_mm256_set1_pd(double(k)), prev));
      prev = cur;
      cur = next;
    }
    _mm256_storeu_pd(out + i, cur);
  }
  if (i < n) scalar_kernels().hermite_map(in + i, out + i, n - i, degree, scale);
}

void gegenbauer_map_avx2(const double* in, double* out, std::size_t n, int degree, int d) {
  const __m256d inv_d = _mm256_set1_pd(1.0 / d);
  const __m256d one = _mm256_set1_pd(1.0);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d s = _mm256_mul_pd(_mm256_loadu_pd(in + i), inv_d);
    if (degree == 0) {
      _mm256_storeu_pd(out + i, one);
      continue;
    }
    __m256d prev = one, cur = s;
    for (int k = 1; k < degree; ++k) {
      const __m256d a = _mm256_set1_pd(double(2 * k + d - 2) / double(k + d - 2));
      const __m256d b = _mm256_set1_pd(double(k) / double(k + d - 2));
      const __m256d next = _mm256_fmsub_pd(_mm256_mul_pd(a, s), cur, _mm256_mul_pd(b, prev));
      prev = cur;
      cur = next;
    }
    _mm256_storeu_pd(out + i, cur);
  }
  if (i < n) scalar_kernels().gegenbauer_map(in + i, out + i, n - i, degree, d);
}

constexpr KernelTable kAvx2{
    Isa::avx2,    dot_avx2,  axpy_avx2,        cross_gram_avx2,
    gram_avx2,    symv_avx2, hermite_map_avx2, gegenbauer_map_avx2,
};

}  // namespace

const KernelTable* avx2_table_impl() { return &kAvx2; }

}  // namespace knlb::simd
