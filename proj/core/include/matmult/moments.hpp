// Copyright 2026 The matmult Authors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>

#include "matmult/law.hpp"
#include "matmult/lift.hpp"
#include "matmult/sieve.hpp"
#include "matmult/types.hpp"

namespace matmult {

/// Moments of S_f(x) = sum_{n <= x} f(n), ||S_f(x)||_HS^{2k}.
struct MomentReport {
  std::uint64_t x = 0;
  int k = 1;
  std::optional<double> exact;
  double mc_estimate = 0.0;
  double mc_stderr = 0.0;
  std::uint64_t trials = 0;
  std::optional<double> predicted;
  std::uint64_t seed = 0;
};

struct McOptions {
  /// Memo table of f(n) for all n <= x is used while it fits in this many
  /// bytes (d^2 scalars per n); above it f(n) is rebuilt from its prime
  /// factorisation for every n.
  std::size_t memo_bytes_cap = std::size_t{64} << 20;
  /// Worker threads; 0 means std::thread::hardware_concurrency().
  unsigned threads = 0;
};

/// E ||S_f(x)||_HS^2 = sum_r N_{x,r} a_r (compensated summation).
double exact_second_moment(const SieveTable& table, const MomentSequence& seq);

/// One realisation of S_f(x) for x = table.x_max(). f(p) is drawn from the
/// key (seed, trial_index, p); f(n) = f(n / P(n)) f(P(n)), f(1) = I.
CMatrix mc_partial_sum(const MatrixLaw& law, const SieveTable& table, std::uint64_t seed,
                       std::uint64_t trial_index, const McOptions& options = {});

/// Mean and standard error of ||S_f(x)||_HS^{2k} over trials 0..trials-1.
/// Bit-identical for identical inputs regardless of thread count.
MomentReport mc_moment(const MatrixLaw& law, const SieveTable& table, int k,
                       std::uint64_t trials, std::uint64_t seed, const McOptions& options = {});

inline constexpr double kBruteForceCap = 1e7;

/// Exact E ||S_f(x)||_HS^{2k} by enumerating every assignment of atoms to
/// the primes <= x. Throws CapExceeded when m^{pi(x)} > 1e7.
double brute_force_moment(const MatrixLaw& law, std::uint64_t x, int k);

inline constexpr double kSquareTupleBudget = 1e8;

/// sum over (n_1..n_2k) <= x with n_1...n_2k a square of
/// mu^2(n_1)...mu^2(n_2k) m^{(omega(n_1)+...+omega(n_2k))/2}.
/// Throws CapExceeded when x^{2k} > 1e8.
double square_tuple_sum(std::uint64_t x, int k, std::uint64_t m_weight);

}  // namespace matmult
