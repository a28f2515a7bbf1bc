// Copyright 2026 The matmult Authors.
// SPDX-License-Identifier: Apache-2.0

#include <cmath>
#include <limits>
#include <string>

#include "matmult/gamma.hpp"
#include "matmult/selberg_delange.hpp"

namespace matmult {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// log(1 + w) without cancellation for small |w|.
Complex log1p_complex(Complex w) {
  const double re = 0.5 * std::log1p(2.0 * w.real() + std::norm(w));
  return {re, std::atan2(w.imag(), 1.0 + w.real())};
}

// Neumaier-compensated complex accumulator.
struct CompensatedSum {
  double re = 0.0, im = 0.0, cre = 0.0, cim = 0.0;

  static void add(double& s, double& c, double v) {
    const double t = s + v;
    if (std::abs(s) >= std::abs(v)) c += (s - t) + v;
    else c += (v - t) + s;
    s = t;
  }
  void operator+=(Complex v) {
    add(re, cre, v.real());
    add(im, cim, v.imag());
  }
  Complex value() const { return {re + cre, im + cim}; }
};

void check_bound(const PrimeTable& primes) {
  if (primes.bound() < kMinPrimeBound) {
    throw InvariantError("prime bound " + std::to_string(primes.bound()) + " is below " +
                         std::to_string(kMinPrimeBound));
  }
}

// Bound on |sum_{p > B} log((1 + z/p)(1 - 1/p)^z)|. Each term equals
// -(z^2 + z)/(2p^2) plus a cubic remainder; sum_{n > B} n^-2 < 1/B.
double log_tail(Complex z, double B) {
  const double a = std::abs(z);
  const double grow = std::max(a, 1.0);
  if (2.0 * grow >= B) return kInf;
  const double quad = std::abs(z * z + z) / 2.0;
  const double cubic = (a * a * a + a) / (3.0 * (B - grow));
  return (quad + cubic) / B;
}

// Bound on the tail of sum_p z(z+1) log p / ((p - 1)(p + z)).
double logderiv_tail(Complex z, double B) {
  const double a = std::abs(z);
  if (2.0 * std::max(a, 1.0) >= B) return kInf;
  const double lead = std::abs(z) * std::abs(z + 1.0);
  return lead / ((1.0 - 1.0 / B) * (1.0 - a / B)) * (std::log(B) + 1.0) / B;
}

}  // namespace

PrimeTable::PrimeTable(std::uint64_t bound) : bound_(bound) {
  if (bound > std::numeric_limits<std::uint32_t>::max()) {
    throw CapExceeded("prime table bound " + std::to_string(bound) + " exceeds 2^32");
  }
  std::vector<bool> composite(bound + 1, false);
  for (std::uint64_t p = 2; p <= bound; ++p) {
    if (composite[p]) continue;
    primes_.push_back(static_cast<std::uint32_t>(p));
    for (std::uint64_t q = p * p; q <= bound; q += p) composite[q] = true;
  }
}

EulerProductValue euler_P(Complex z, const PrimeTable& primes) {
  check_bound(primes);
  EulerProductValue out;
  out.prime_bound = primes.bound();
  if (z == 0.0) {
    out.value = 1.0;
    return out;
  }
  CompensatedSum log_sum;
  for (std::uint32_t p : primes.primes()) {
    const double inv = 1.0 / double(p);
    if (z == Complex(-double(p), 0.0)) {
      out.value = 0.0;
      return out;
    }
    log_sum += log1p_complex(z * inv) + z * std::log1p(-inv);
  }
  out.value = std::exp(log_sum.value());
  out.tail_bound = std::abs(out.value) * std::expm1(log_tail(z, double(primes.bound())));
  return out;
}

EulerProductValue euler_P(Complex z, std::uint64_t prime_bound) {
  return euler_P(z, PrimeTable(prime_bound));
}

EulerProductValue euler_P_s(Complex z, const PrimeTable& primes) {
  check_bound(primes);
  EulerProductValue out;
  out.prime_bound = primes.bound();
  if (z == 0.0) {
    out.value = 0.0;
    return out;
  }
  // P_s = P * sum_p z log p [1/(1 - 1/p) - 1/(1 + z/p)]
  //     = P * sum_p z (z + 1) log p / ((p - 1)(p + z)).
  CompensatedSum log_p, deriv;
  bool vanishing = false;
  double vanishing_prime = 0.0;
  for (std::uint32_t p : primes.primes()) {
    const double dp = double(p);
    const double inv = 1.0 / dp;
    if (z == Complex(-dp, 0.0)) {
      // The factor (1 + z p^-s) vanishes at s = 1: P_s is the product of
      // the remaining factors times its derivative, -z log p / p.
      vanishing = true;
      vanishing_prime = dp;
      log_p += z * std::log1p(-inv);
      continue;
    }
    log_p += log1p_complex(z * inv) + z * std::log1p(-inv);
    deriv += z * (z + 1.0) * std::log(dp) / ((dp - 1.0) * (dp + z));
  }
  if (vanishing) {
    out.value = std::exp(log_p.value()) * (-z * std::log(vanishing_prime) / vanishing_prime);
    out.tail_bound = std::abs(out.value) * std::expm1(log_tail(z, double(primes.bound())));
    return out;
  }
  const Complex product = std::exp(log_p.value());
  const Complex logderiv = deriv.value();
  out.value = product * logderiv;
  const double B = double(primes.bound());
  const double p_tail = std::abs(product) * std::expm1(log_tail(z, B));
  const double l_tail = logderiv_tail(z, B);
  out.tail_bound = p_tail * (std::abs(logderiv) + l_tail) + std::abs(product) * l_tail;
  return out;
}

EulerProductValue euler_P_s(Complex z, std::uint64_t prime_bound) {
  return euler_P_s(z, PrimeTable(prime_bound));
}

Complex euler_F(Complex z, const PrimeTable& primes) {
  return euler_P(z, primes).value * rgamma(z);
}

}  // namespace matmult
