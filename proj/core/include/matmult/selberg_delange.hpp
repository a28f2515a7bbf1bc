// Copyright 2026 The matmult Authors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "matmult/lift.hpp"
#include "matmult/types.hpp"

namespace matmult {

inline constexpr double kEulerGamma = 0.57721566490153286060651209;
inline constexpr std::uint64_t kDefaultPrimeBound = 10'000'000;
inline constexpr std::uint64_t kMinPrimeBound = 100;

/// All primes p <= bound (sieve of Eratosthenes).
class PrimeTable {
 public:
  explicit PrimeTable(std::uint64_t bound);
  std::uint64_t bound() const { return bound_; }
  std::span<const std::uint32_t> primes() const { return primes_; }

 private:
  std::uint64_t bound_;
  std::vector<std::uint32_t> primes_;
};

struct EulerProductValue {
  Complex value;
  double tail_bound = 0.0;  // |true value - value| <= tail_bound
  std::uint64_t prime_bound = 0;
};

/// P(z) = prod_p (1 + z/p)(1 - 1/p)^z over p <= bound, summed in log space.
EulerProductValue euler_P(Complex z, const PrimeTable& primes);
EulerProductValue euler_P(Complex z, std::uint64_t prime_bound = kDefaultPrimeBound);

/// d/ds P(s, z) at s = 1, as P(z) times the truncated logarithmic derivative.
EulerProductValue euler_P_s(Complex z, const PrimeTable& primes);
EulerProductValue euler_P_s(Complex z, std::uint64_t prime_bound = kDefaultPrimeBound);

/// F(z) = P(z) / Gamma(z); zero at the poles of Gamma.
Complex euler_F(Complex z, const PrimeTable& primes);

struct ExpansionTerm {
  Complex lambda;
  int m = 1;
  Complex C;
};

struct DefectiveTerm {
  Complex lambda;
  int d_max = 0;
  Complex C;
};

/// x * sum C (log x)^{lambda - m} + x * sum C' (log x)^{lambda - 1} (log log x)^{d_max}.
struct AsymptoticExpansion {
  std::vector<ExpansionTerm> terms;
  std::vector<DefectiveTerm> defective_terms;
  int order = 1;
  double error_exponent = 0.0;  // Re lambda_1 - order - 1
};

/// Constants C_{i,m} for m <= order (order 1 or 2) from the fitted weights,
/// plus C'_j = b_j lambda_j^{d_max} F(lambda_j) for j in L2'. Throws
/// InvariantError for order outside {1, 2}.
AsymptoticExpansion expansion_constants(const SpectralData& spec, int order,
                                        const PrimeTable& primes);

/// Real part of the expansion at x >= 2. Throws NumericalError if the
/// imaginary residue exceeds 1e-10 relative.
double predict_second_moment(const AsymptoticExpansion& expansion, double x);

/// Same expansion keeping only the terms with m <= order.
AsymptoticExpansion truncate(const AsymptoticExpansion& expansion, int order);

}  // namespace matmult
