// Copyright 2026 The matmult Authors.
// SPDX-License-Identifier: Apache-2.0

#include <cmath>
#include <string>

#include "matmult/gamma.hpp"
#include "matmult/selberg_delange.hpp"

namespace matmult {

AsymptoticExpansion expansion_constants(const SpectralData& spec, int order,
                                        const PrimeTable& primes) {
  if (order < 1 || order > 2) {
    throw InvariantError("expansion order " + std::to_string(order) +
                         " is unsupported; closed forms exist for orders 1 and 2 only");
  }
  AsymptoticExpansion out;
  out.order = order;
  out.error_exponent =
      (spec.lambdas.empty() ? 0.0 : spec.lambdas.front().real()) - order - 1.0;

  for (std::size_t i : spec.L1) {
    const Complex lambda = spec.lambdas[i];
    const Complex weight = spec.betas[i];
    const Complex p = euler_P(lambda, primes).value;
    out.terms.push_back({lambda, 1, weight * p * rgamma(lambda)});
    if (order >= 2) {
      const Complex ps = euler_P_s(lambda, primes).value;
      const Complex c2 = weight * ((kEulerGamma * lambda - 1.0) * p + ps) * rgamma(lambda - 1.0);
      out.terms.push_back({lambda, 2, c2});
    }
  }
  for (std::size_t j : spec.L2prime) {
    const Complex lambda = spec.lambdas[j];
    const Complex c = spec.leading[j] * std::pow(lambda, spec.d_max) * euler_F(lambda, primes);
    out.defective_terms.push_back({lambda, spec.d_max, c});
  }
  return out;
}

AsymptoticExpansion truncate(const AsymptoticExpansion& expansion, int order) {
  AsymptoticExpansion out = expansion;
  out.order = std::min(order, expansion.order);
  std::erase_if(out.terms, [&](const ExpansionTerm& t) { return t.m > order; });
  out.error_exponent = expansion.error_exponent + expansion.order - out.order;
  return out;
}

double predict_second_moment(const AsymptoticExpansion& expansion, double x) {
  if (!(x >= 2.0)) throw InvariantError("prediction requires x >= 2");
  // (log x)^w is exp(w * ln(log x)) with the positive real base log x.
  const double log_x = std::log(x);
  const double log_log_x = std::log(log_x);
  Complex total = 0.0;
  double magnitude = 0.0;
  for (const auto& t : expansion.terms) {
    const Complex term = x * t.C * std::exp((t.lambda - double(t.m)) * log_log_x);
    total += term;
    magnitude += std::abs(term);
  }
  for (const auto& t : expansion.defective_terms) {
    const Complex term =
        x * t.C * std::exp((t.lambda - 1.0) * log_log_x) * std::pow(log_log_x, t.d_max);
    total += term;
    magnitude += std::abs(term);
  }
  if (std::abs(total.imag()) > 1e-10 * std::max(magnitude, 1e-300)) {
    throw NumericalError("second-moment prediction has imaginary residue " +
                         std::to_string(total.imag()));
  }
  return total.real();
}

}  // namespace matmult
