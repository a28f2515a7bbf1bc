// Copyright 2026 The matmult Authors.
// SPDX-License-Identifier: Apache-2.0

// Slow, independent reference implementations used only by tests.

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <random>
#include <string>
#include <vector>

#include "matmult/matmult.hpp"

namespace oracle {

using matmult::CMatrix;
using matmult::Complex;

inline std::filesystem::path law_path(const std::string& name) {
  return std::filesystem::path(MATMULT_DATA_DIR) / "laws" / (name + ".law.json");
}

inline std::filesystem::path fixture_path(const std::string& name) {
  return std::filesystem::path(MATMULT_TEST_DATA_DIR) / name;
}

inline matmult::MatrixLaw law(const std::string& name) { return matmult::load_law(law_path(name)); }

inline CMatrix kron(const CMatrix& a, const CMatrix& b) {
  CMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

inline CMatrix kron_power(const CMatrix& a, int k) {
  CMatrix out = CMatrix::Identity(1, 1);
  for (int t = 0; t < k; ++t) out = kron(out, a);
  return out;
}

// (row, col) of the underlying component u for the given flavour.
inline std::pair<int, int> component(int d, int u, matmult::Flavor flavor) {
  if (flavor == matmult::Flavor::Complex) return {u / d, u % d};
  int idx = 0;
  for (int i = 0; i < d; ++i)
    for (int j = i; j < d; ++j, ++idx)
      if (idx == u) return {i, j};
  return {-1, -1};
}

inline CMatrix component_matrix(int d, int u, matmult::Flavor flavor) {
  const auto [i, j] = component(d, u, flavor);
  CMatrix e = CMatrix::Zero(d, d);
  e(i, j) = 1.0;
  if (flavor == matmult::Flavor::Real) e(j, i) = 1.0;
  return e;
}

// Orbit sum of e_{u_1} (x) ... (x) e_{u_k} as a d^k x d^k matrix.
inline CMatrix orbit_tensor(int d, std::vector<int> multiset, matmult::Flavor flavor) {
  const int k = static_cast<int>(multiset.size());
  int dk = 1;
  for (int t = 0; t < k; ++t) dk *= d;
  CMatrix v = CMatrix::Zero(dk, dk);
  std::sort(multiset.begin(), multiset.end());
  do {
    CMatrix term = CMatrix::Identity(1, 1);
    for (int u : multiset) term = kron(term, component_matrix(d, u, flavor));
    v += term;
  } while (std::next_permutation(multiset.begin(), multiset.end()));
  return v;
}

// Coordinate of a symmetric tensor on a sorted multiset: the coefficient of
// one ordering, read off the matrix entry at the matching multi-index.
inline Complex coordinate(int d, const CMatrix& v, const std::vector<int>& multiset,
                          matmult::Flavor flavor) {
  Eigen::Index row = 0, col = 0;
  for (int u : multiset) {
    const auto [i, j] = component(d, u, flavor);
    row = row * d + i;
    col = col * d + j;
  }
  return v(row, col);
}

// Matrix of v -> E[(X*)^{(x)k} v X^{(x)k}] on the lift basis, by explicit
// Kronecker products.
inline CMatrix kron_transfer(const matmult::MatrixLaw& law, int k, matmult::Flavor flavor) {
  const int d = law.dim();
  const int comps = flavor == matmult::Flavor::Complex ? d * d : d * (d + 1) / 2;
  const auto basis = matmult::multiset_basis(comps, k);
  const auto n = static_cast<Eigen::Index>(basis.size());
  CMatrix rep = CMatrix::Zero(n, n);
  for (Eigen::Index c = 0; c < n; ++c) {
    const CMatrix v = orbit_tensor(d, basis[c], flavor);
    CMatrix tv = CMatrix::Zero(v.rows(), v.cols());
    for (std::size_t a = 0; a < law.size(); ++a) {
      const CMatrix xk = kron_power(law.atom(a), k);
      tv += law.weight(a) * (xk.adjoint() * v * xk);
    }
    for (Eigen::Index r = 0; r < n; ++r) rep(r, c) = coordinate(d, tv, basis[r], flavor);
  }
  return rep;
}

// a_n = E ||X_1 ... X_n||^{2k} by summing over all m^n words.
inline double word_moment(const matmult::MatrixLaw& law, int n, int k) {
  const std::size_t m = law.size();
  std::vector<std::size_t> word(static_cast<std::size_t>(n), 0);
  double total = 0.0;
  while (true) {
    CMatrix w = CMatrix::Identity(law.dim(), law.dim());
    double p = 1.0;
    for (std::size_t idx : word) {
      w = w * law.atom(idx);
      p *= law.weight(idx);
    }
    total += p * std::pow(w.squaredNorm(), k);
    std::size_t pos = 0;
    while (pos < word.size() && ++word[pos] == m) word[pos++] = 0;
    if (pos == word.size()) break;
  }
  return total;
}

struct Factorization {
  bool squarefree = true;
  int omega = 0;
  std::uint64_t largest = 1;
};

inline Factorization trial_division(std::uint64_t n) {
  Factorization f;
  for (std::uint64_t p = 2; p * p <= n; ++p) {
    if (n % p) continue;
    ++f.omega;
    f.largest = p;
    n /= p;
    if (n % p == 0) f.squarefree = false;
    while (n % p == 0) n /= p;
  }
  if (n > 1) {
    ++f.omega;
    f.largest = n;
  }
  return f;
}

struct RandomLawSpec {
  int d = 2;
  int atoms = 2;
  bool complex = false;
};

inline matmult::MatrixLaw random_law(std::mt19937_64& rng, const RandomLawSpec& spec) {
  std::uniform_real_distribution<double> entry(-1.0, 1.0);
  std::uniform_real_distribution<double> mass(0.1, 1.0);
  std::vector<CMatrix> atoms;
  std::vector<double> weights;
  double total = 0.0;
  for (int a = 0; a < spec.atoms; ++a) {
    CMatrix b(spec.d, spec.d);
    for (int i = 0; i < spec.d; ++i)
      for (int j = 0; j < spec.d; ++j)
        b(i, j) = Complex(entry(rng), spec.complex ? entry(rng) : 0.0);
    atoms.push_back(b);
    weights.push_back(mass(rng));
    total += weights.back();
  }
  for (double& w : weights) w /= total;
  // Renormalise so the weights sum to one within the validation tolerance.
  double s = 0.0;
  for (std::size_t i = 0; i + 1 < weights.size(); ++i) s += weights[i];
  weights.back() = 1.0 - s;
  return matmult::MatrixLaw(std::move(atoms), std::move(weights));
}

}  // namespace oracle
