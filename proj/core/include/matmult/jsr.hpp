// Copyright 2026 The matmult Authors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "matmult/law.hpp"
#include "matmult/lift.hpp"
#include "matmult/types.hpp"

namespace matmult {

/// rho_{2k} = lambda_1^{1/(2k)}, lambda_1 the leading eigenvalue of the
/// k-th lift. Throws NumericalError if lambda_1 is not real and >= 0 within
/// 1e-10.
double rho_2k(const MatrixLaw& law, int k, std::size_t cap = kDefaultLiftCap);

struct JsrOptions {
  double delta = 1e-3;
  int max_depth = 16;
  std::uint64_t node_budget = 10'000'000;
  /// Drop atoms equal to another atom or to its negation; products then
  /// differ only by sign, which changes neither norms nor spectral radii.
  bool reduce_signs = true;
};

/// Certified bracket lower <= rho_inf(S) <= upper.
struct JsrBounds {
  double lower = 0.0;
  double upper = 0.0;
  int depth = 0;               // deepest fully processed product length
  double delta = 0.0;
  bool complete = true;        // false when the node budget ran out
  bool exhausted = false;      // true when every branch was pruned
  std::uint64_t nodes = 0;
  std::vector<std::size_t> best_product;  // atom indices attaining lower
};

/// Gripenberg branch and bound with Hilbert-Schmidt norms.
///
/// lower = max over visited products W of rho(W)^{1/|W|}. A product whose
/// normalised norm ||W||^{1/|W|} is at most lower + delta is pruned: every
/// extension then has a prefix at that level. Splitting an arbitrary long
/// product greedily into such prefixes shows
///   rho_inf <= max(lower + delta, max_{W in frontier_k} min_{j <= k} ||W_{1..j}||^{1/j})
/// for every depth k, and upper is the smallest of these bounds.
JsrBounds gripenberg(std::span<const CMatrix> atoms, const JsrOptions& options = {});

struct RadiusLadder {
  std::vector<double> rho;     // rho[k-1] = rho_{2k}
  std::vector<double> probes;  // a_n^{1/(2kn)} at n = n_probe, when requested
  int n_probe = 0;
};

/// rho_{2k} for k = 1..k_max; probes when n_probe > 0.
RadiusLadder rho_ladder(const MatrixLaw& law, int k_max, int n_probe = 0,
                        std::size_t cap = kDefaultLiftCap);

/// Spectral radius of a square complex matrix.
double spectral_radius(const CMatrix& a);

}  // namespace matmult
