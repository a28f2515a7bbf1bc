// Copyright 2026 The matmult Authors.
// SPDX-License-Identifier: Apache-2.0

#include "matmult/lift.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <utility>

namespace matmult {
namespace {

struct Component {
  int row;
  int col;
};

std::vector<Component> components_for(int d, Flavor flavor) {
  std::vector<Component> out;
  if (flavor == Flavor::Complex) {
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < d; ++j) out.push_back({i, j});
  } else {
    for (int i = 0; i < d; ++i)
      for (int j = i; j < d; ++j) out.push_back({i, j});
  }
  return out;
}

// t(out, in): coefficient of component `out` in B* e_in B (complex) or
// B^T s_in B (real, s_in = E_ii or E_ij + E_ji).
CMatrix single_step(const CMatrix& b, const std::vector<Component>& comps, Flavor flavor) {
  const auto n = static_cast<Eigen::Index>(comps.size());
  CMatrix t(n, n);
  for (Eigen::Index in = 0; in < n; ++in) {
    const auto [i, j] = comps[in];
    for (Eigen::Index out = 0; out < n; ++out) {
      const auto [a, c] = comps[out];
      if (flavor == Flavor::Complex) {
        t(out, in) = std::conj(b(i, a)) * b(j, c);
      } else if (i == j) {
        t(out, in) = b(i, a) * b(i, c);
      } else {
        t(out, in) = b(i, a) * b(j, c) + b(j, a) * b(i, c);
      }
    }
  }
  return t;
}

std::vector<std::vector<int>> distinct_orderings(std::vector<int> multiset) {
  std::vector<std::vector<int>> out;
  std::sort(multiset.begin(), multiset.end());
  do {
    out.push_back(multiset);
  } while (std::next_permutation(multiset.begin(), multiset.end()));
  return out;
}

std::uint64_t binomial(std::uint64_t n, std::uint64_t r) {
  if (r > n) return 0;
  r = std::min(r, n - r);
  std::uint64_t out = 1;
  for (std::uint64_t i = 1; i <= r; ++i) {
    // out * (n - r + i) is divisible by i at every step.
    if (out > std::numeric_limits<std::uint64_t>::max() / (n - r + i)) {
      return std::numeric_limits<std::uint64_t>::max();
    }
    out = out * (n - r + i) / i;
  }
  return out;
}

}  // namespace

std::uint64_t lift_dimension(int d, int k, Flavor flavor) {
  const std::uint64_t comps = flavor == Flavor::Complex
                                  ? std::uint64_t(d) * std::uint64_t(d)
                                  : std::uint64_t(d) * std::uint64_t(d + 1) / 2;
  return binomial(std::uint64_t(k) + comps - 1, std::uint64_t(k));
}

std::vector<std::vector<int>> multiset_basis(int components, int k) {
  std::vector<std::vector<int>> out;
  std::vector<int> current(static_cast<std::size_t>(k), 0);
  if (components <= 0 || k <= 0) return out;
  while (true) {
    out.push_back(current);
    // Advance to the next non-decreasing tuple.
    int pos = k - 1;
    while (pos >= 0 && current[pos] == components - 1) --pos;
    if (pos < 0) break;
    const int next = current[pos] + 1;
    for (int q = pos; q < k; ++q) current[q] = next;
  }
  return out;
}

Flavor natural_flavor(const MatrixLaw& law) {
  return law.is_real() ? Flavor::Real : Flavor::Complex;
}

LiftedOperator build_transfer(const MatrixLaw& law, int k, Flavor flavor, std::size_t cap) {
  if (k < 1) throw InvariantError("lift order k must be positive");
  if (flavor == Flavor::Real && !law.is_real()) {
    throw InvariantError("real flavor requested for a law with complex atoms");
  }
  const int d = law.dim();
  const std::uint64_t l = lift_dimension(d, k, flavor);
  if (l > cap) {
    throw CapExceeded("lift dimension " + std::to_string(l) + " for d=" + std::to_string(d) +
                      ", k=" + std::to_string(k) + " exceeds cap " + std::to_string(cap));
  }

  const auto comps = components_for(d, flavor);
  LiftedOperator op;
  op.k = k;
  op.dim = d;
  op.flavor = flavor;
  op.basis = multiset_basis(static_cast<int>(comps.size()), k);
  const auto n = static_cast<Eigen::Index>(op.basis.size());

  op.identity_vec = CVector::Zero(n);
  op.trace_functional = CVector::Zero(n);
  std::vector<std::vector<std::vector<int>>> orderings;
  orderings.reserve(op.basis.size());
  for (Eigen::Index m = 0; m < n; ++m) {
    const auto& ms = op.basis[m];
    orderings.push_back(distinct_orderings(ms));
    const bool diagonal = std::all_of(ms.begin(), ms.end(), [&](int u) {
      return comps[u].row == comps[u].col;
    });
    if (diagonal) {
      op.identity_vec(m) = 1.0;
      op.trace_functional(m) = static_cast<double>(orderings.back().size());
    }
  }

  op.rep = CMatrix::Zero(n, n);
  for (std::size_t a = 0; a < law.size(); ++a) {
    const CMatrix t = single_step(law.atom(a), comps, flavor);
    const double p = law.weight(a);
    for (Eigen::Index col = 0; col < n; ++col) {
      for (Eigen::Index row = 0; row < n; ++row) {
        const auto& target = op.basis[row];
        Complex acc = 0.0;
        for (const auto& w : orderings[col]) {
          Complex term = 1.0;
          for (int j = 0; j < k; ++j) term *= t(target[j], w[j]);
          acc += term;
        }
        op.rep(row, col) += p * acc;
      }
    }
  }
  if (!op.rep.allFinite()) throw NumericalError("lifted operator has non-finite entries");
  return op;
}

Complex CharPoly::operator()(Complex x) const {
  Complex acc = 1.0;
  for (const Complex& c : coeffs) acc = acc * x + c;
  return acc;
}

CharPoly char_poly(const CMatrix& a) {
  const Eigen::Index l = a.rows();
  CharPoly cp;
  cp.coeffs.reserve(static_cast<std::size_t>(l));
  CMatrix m = CMatrix::Identity(l, l);
  for (Eigen::Index k = 1; k <= l; ++k) {
    CMatrix am = a * m;
    const Complex c = -am.trace() / static_cast<double>(k);
    if (!std::isfinite(c.real()) || !std::isfinite(c.imag())) {
      throw NumericalError("characteristic polynomial coefficient c_" + std::to_string(k) +
                           " is not finite");
    }
    cp.coeffs.push_back(c);
    am.diagonal().array() += c;
    m = std::move(am);
  }
  return cp;
}

CharPoly char_poly(const LiftedOperator& op) { return char_poly(op.rep); }

MomentSequence exact_moment_sequence(const LiftedOperator& op, int n_max) {
  if (n_max < 0) throw InvariantError("n_max must be non-negative");
  MomentSequence seq;
  seq.k = op.k;
  seq.values.reserve(static_cast<std::size_t>(n_max) + 1);
  CVector v = op.identity_vec;
  for (int n = 0; n <= n_max; ++n) {
    if (n > 0) v = op.rep * v;
    const Complex a = op.trace_functional.dot(v);  // dot() conjugates the left side
    if (!v.allFinite() || !std::isfinite(a.real())) {
      throw NumericalError("moment a_" + std::to_string(n) + " is not finite");
    }
    seq.values.push_back(a.real());
  }
  return seq;
}

std::vector<double> verify_recurrence(const MomentSequence& seq, const CharPoly& cp) {
  const std::size_t l = cp.degree();
  if (seq.values.size() < l + 1) {
    throw InvariantError("sequence of length " + std::to_string(seq.values.size()) +
                         " too short for a recurrence of length " + std::to_string(l));
  }
  std::vector<double> residuals;
  residuals.reserve(seq.values.size() - l);
  for (std::size_t n = 0; n + l < seq.values.size(); ++n) {
    Complex acc = seq.values[n + l];
    for (std::size_t i = 1; i <= l; ++i) acc += cp.coeffs[i - 1] * seq.values[n + l - i];
    residuals.push_back(std::abs(acc) / std::max(1.0, std::abs(seq.values[n + l])));
  }
  return residuals;
}

}  // namespace matmult
