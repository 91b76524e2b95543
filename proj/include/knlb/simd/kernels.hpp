#pragma once

#include <cstddef>
#include <string_view>

namespace knlb::simd {

enum class Isa { scalar, avx2 };

std::string_view isa_name(Isa isa);

// Inner loops of matrix assembly and iterative eigensolvers. Every variant
// computes the same quantities; results may differ in the last few ulps
// because of FMA contraction and summation order.
//
// All arrays are dense, row-major and need no particular alignment.
struct KernelTable {
  Isa isa;

  double (*dot)(const double* a, const double* b, std::size_t n);

  // y += alpha * x
  void (*axpy)(double alpha, const double* x, double* y, std::size_t n);

  // out[i * ldo + j] = <a_i, b_j> for rows of length d.
  void (*cross_gram)(const double* a, std::size_t na, const double* b, std::size_t nb,
                     std::size_t d, double* out, std::size_t ldo);

  // out (n x n) = X X^T, computed on the upper triangle and mirrored.
  void (*gram)(const double* x, std::size_t n, std::size_t d, double* out);

  // y = A x with A stored as a full n x n matrix.
  void (*symv)(const double* a, std::size_t n, const double* x, double* y);

  // out[i] = He_degree(scale * in[i]) (probabilist's Hermite).
  void (*hermite_map)(const double* in, double* out, std::size_t n, int degree, double scale);

  // out[i] = Q_degree^{(d)}(in[i]) with Q(d) = 1; arguments must lie in [-d, d].
  void (*gegenbauer_map)(const double* in, double* out, std::size_t n, int degree, int d);
};

const KernelTable& scalar_kernels();

// nullptr if the variant was not compiled in.
const KernelTable* avx2_kernels();

bool cpu_supports(Isa isa);

// Best variant the running CPU supports. KNLB_SIMD=scalar forces the
// reference kernels.
const KernelTable& active();

}  // namespace knlb::simd
