// Copyright 2026 The matmult Authors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <vector>

#include "matmult/types.hpp"

namespace matmult {

inline constexpr std::uint64_t kDefaultSieveCap = 100'000'000;

struct SieveOptions {
  /// Keep the largest-prime-factor array (4 bytes per n) for Monte Carlo.
  bool with_largest_prime_factor = true;
  std::uint64_t cap = kDefaultSieveCap;
};

/// mu^2(n), omega(n) and optionally P(n) = largest prime factor for n <= x.
///
/// Memory: 1 byte per n for omega and the squarefree flag, plus 4 bytes per n
/// with largest prime factors, plus the list of primes. At x = 1e8 that is
/// about 100 MB (or 500 MB with largest prime factors).
class SieveTable {
 public:
  std::uint64_t x_max() const { return x_max_; }
  int omega(std::uint64_t n) const { return flags_[n] & kOmegaMask; }
  bool squarefree(std::uint64_t n) const { return (flags_[n] & kSquarefreeBit) != 0; }
  bool has_largest_prime_factor() const { return !lpf_.empty(); }
  std::uint32_t largest_prime_factor(std::uint64_t n) const { return lpf_[n]; }
  const std::vector<std::uint32_t>& primes() const { return primes_; }

  /// N_{x,r} = #{n <= x squarefree : omega(n) = r}, r = 0..max omega.
  const std::vector<std::uint64_t>& hist() const { return hist_; }
  std::uint64_t squarefree_count() const { return squarefree_count_; }

  /// Histogram restricted to n <= y (y <= x_max), computed by a scan.
  std::vector<std::uint64_t> hist_upto(std::uint64_t y) const;

 private:
  friend SieveTable build_sieve(std::uint64_t x, const SieveOptions& options);

  static constexpr std::uint8_t kOmegaMask = 0x7f;
  static constexpr std::uint8_t kSquarefreeBit = 0x80;

  std::uint64_t x_max_ = 0;
  std::vector<std::uint8_t> flags_;
  std::vector<std::uint32_t> lpf_;
  std::vector<std::uint32_t> primes_;
  std::vector<std::uint64_t> hist_;
  std::uint64_t squarefree_count_ = 0;
};

/// Linear (Euler) sieve. Throws CapExceeded if x > options.cap and
/// InvariantError if x < 1.
SieveTable build_sieve(std::uint64_t x, const SieveOptions& options = {});

/// sum_{n <= x} mu^2(n) z^omega(n) = sum_r N_{x,r} z^r.
Complex sum_z_omega(const SieveTable& table, Complex z);

/// sum_{n <= x} mu^2(n) omega(n)^r z^omega(n) = sum_s N_{x,s} s^r z^s, r <= 6.
Complex sum_omega_power(const SieveTable& table, Complex z, int r);

}  // namespace matmult
