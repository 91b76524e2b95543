#pragma once

#include "knlb/kernelmat/kernel_function.hpp"
#include "knlb/kernelmat/sym_matrix.hpp"
#include "knlb/sampling/covariance.hpp"
#include "knlb/sampling/sampling.hpp"
#include "knlb/util/rational.hpp"

namespace knlb {

// Low-degree Hermite approximation of K = f(X X^T / tau1) for anisotropic Gaussian
// data at scaling exponent q: Taylor terms up to floor(4q/3), the band
// floor(4q/3) < l <= floor(2q) projected onto He_0..He_{floor(4q/3)}, and an
// identity shift. Diagonals of the Hadamard powers and of H^{(k)} are kept.
SymMatrix build_K_bar_aniso(const DataMatrix& x, const KernelFunction& f, const Rational& q,
                            const CovarianceSpec& spec);
SymMatrix build_K_bar_aniso_from_gram(const SymMatrix& g, const KernelFunction& f, const Rational& q,
                                      const CovarianceSpec& spec);

// Polar (norm times direction) approximation for isotropic Gaussian data:
// sum_{l <= floor(2q)} f^{(l)}(0) / (l! d^{l/2}) (r r^T / d)^{.l} . sum_{j <= floor(q)} c_{jl} Q^{(j)}
// plus an identity shift. Throws ZeroRowError on a zero row.
SymMatrix build_K_bar_iso(const DataMatrix& x, const KernelFunction& f, const Rational& q);
SymMatrix build_K_bar_iso_from_gram(const SymMatrix& g, std::size_t d, const KernelFunction& f,
                                    const Rational& q);

}  // namespace knlb
