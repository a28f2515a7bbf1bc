// Copyright 2026 The matmult Authors.
// SPDX-License-Identifier: Apache-2.0

#include "matmult/sieve.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace matmult {

SieveTable build_sieve(std::uint64_t x, const SieveOptions& options) {
  if (x < 1) throw InvariantError("sieve bound must be at least 1");
  if (x > options.cap) {
    throw CapExceeded("sieve bound " + std::to_string(x) + " exceeds cap " +
                      std::to_string(options.cap));
  }
  if (x > std::numeric_limits<std::uint32_t>::max()) {
    throw CapExceeded("sieve bound " + std::to_string(x) + " exceeds 2^32");
  }
  SieveTable t;
  t.x_max_ = x;
  t.flags_.assign(x + 1, 0);
  if (options.with_largest_prime_factor) t.lpf_.assign(x + 1, 0);
  auto& flags = t.flags_;
  auto& primes = t.primes_;
  constexpr auto kSf = SieveTable::kSquarefreeBit;

  flags[1] = kSf;  // omega(1) = 0
  if (!t.lpf_.empty()) t.lpf_[1] = 1;
  for (std::uint64_t i = 2; i <= x; ++i) {
    if (flags[i] == 0) {
      // Never marked: i is prime. Composites get omega >= 1 when marked.
      flags[i] = kSf | 1;
      primes.push_back(static_cast<std::uint32_t>(i));
      if (!t.lpf_.empty()) t.lpf_[i] = static_cast<std::uint32_t>(i);
    }
    const int omega_i = flags[i] & SieveTable::kOmegaMask;
    const bool sf_i = (flags[i] & kSf) != 0;
    for (std::uint32_t p : primes) {
      const std::uint64_t n = i * p;
      if (n > x) break;
      const bool divides = i % p == 0;
      // p is the smallest prime factor of n, so P(n) = P(i).
      const int omega_n = omega_i + (divides ? 0 : 1);
      const bool sf_n = sf_i && !divides;
      flags[n] = static_cast<std::uint8_t>(omega_n | (sf_n ? kSf : 0));
      if (!t.lpf_.empty()) t.lpf_[n] = t.lpf_[i];
      if (divides) break;
    }
  }
  t.hist_ = t.hist_upto(x);
  for (auto c : t.hist_) t.squarefree_count_ += c;
  return t;
}

std::vector<std::uint64_t> SieveTable::hist_upto(std::uint64_t y) const {
  if (y > x_max_) {
    throw InvariantError("histogram bound " + std::to_string(y) + " exceeds sieve bound " +
                         std::to_string(x_max_));
  }
  std::vector<std::uint64_t> h(16, 0);
  for (std::uint64_t n = 1; n <= y; ++n) {
    if (flags_[n] & kSquarefreeBit) ++h[flags_[n] & kOmegaMask];
  }
  while (h.size() > 1 && h.back() == 0) h.pop_back();
  return h;
}

Complex sum_z_omega(const SieveTable& table, Complex z) {
  // Horner over the histogram.
  const auto& h = table.hist();
  Complex acc = 0.0;
  for (std::size_t r = h.size(); r-- > 0;) acc = acc * z + double(h[r]);
  return acc;
}

Complex sum_omega_power(const SieveTable& table, Complex z, int r) {
  if (r < 0 || r > 6) throw InvariantError("omega power must lie in 0..6");
  if (r == 0) return sum_z_omega(table, z);
  const auto& h = table.hist();
  Complex acc = 0.0;
  Complex zs = 1.0;
  for (std::size_t s = 0; s < h.size(); ++s, zs *= z) {
    acc += double(h[s]) * std::pow(double(s), r) * zs;
  }
  return acc;
}

}  // namespace matmult
