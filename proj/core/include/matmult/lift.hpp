// Copyright 2026 The matmult Authors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

#include "matmult/law.hpp"
#include "matmult/types.hpp"

namespace matmult {

/// Which symmetric space the lift acts on: Sym^k of the complex-symmetric
/// matrices S_d (real laws only) or Sym^k of all d x d matrices.
enum class Flavor { Real, Complex };

inline constexpr std::size_t kDefaultLiftCap = 2000;

/// Matrix of v -> E[(X*)^{(x)k} v X^{(x)k}] restricted to a symmetric power.
///
/// Components of the underlying matrix space are indexed u = 0..D-1:
///   Complex: u = i*d + j is the matrix unit e_ij (D = d^2);
///   Real:    pairs i <= j in lexicographic order, u -> E_ii or E_ij + E_ji
///            (D = d(d+1)/2).
/// A basis vector of Sym^k is a sorted multiset (u_1 <= ... <= u_k); it
/// stands for the orbit sum of e_{u_1} (x) ... (x) e_{u_k} over all distinct
/// orderings. With this normalisation the coordinate of a symmetric tensor
/// on a multiset is the coefficient of any one of its orderings.
struct LiftedOperator {
  int k = 1;
  int dim = 1;
  Flavor flavor = Flavor::Complex;
  std::vector<std::vector<int>> basis;
  CMatrix rep;
  CVector identity_vec;       // coordinates of I_d^{(x)k}
  CVector trace_functional;   // Tr(v) = trace_functional . v

  std::size_t size() const { return basis.size(); }
};

/// binom(k + D - 1, k) with D = d^2 or d(d+1)/2.
std::uint64_t lift_dimension(int d, int k, Flavor flavor);

/// Enumerates sorted multisets of size k over {0..components-1} in
/// lexicographic order.
std::vector<std::vector<int>> multiset_basis(int components, int k);

LiftedOperator build_transfer(const MatrixLaw& law, int k, Flavor flavor,
                              std::size_t cap = kDefaultLiftCap);

/// Real flavour when the law is real, complex otherwise.
Flavor natural_flavor(const MatrixLaw& law);

/// p_T(x) = x^l + c_1 x^{l-1} + ... + c_l.
struct CharPoly {
  std::vector<Complex> coeffs;  // c_1 .. c_l

  std::size_t degree() const { return coeffs.size(); }
  Complex operator()(Complex x) const;
};

/// Faddeev-LeVerrier trace recursion on op.rep.
CharPoly char_poly(const LiftedOperator& op);
CharPoly char_poly(const CMatrix& a);

/// a_n = E ||X_1 ... X_n||_HS^{2k} for n = 0..n_max.
struct MomentSequence {
  int k = 1;
  std::vector<double> values;
};

MomentSequence exact_moment_sequence(const LiftedOperator& op, int n_max);

/// residual[n] = |a_{n+l} + sum_i c_i a_{n+l-i}| / max(1, a_{n+l}).
std::vector<double> verify_recurrence(const MomentSequence& seq, const CharPoly& cp);

inline constexpr double kClusterRadius = 1e-8;
inline constexpr double kFitConditionLimit = 1e12;

/// a_n = sum_i g_i(n) lambda_i^n, plus a finite transient for a zero
/// eigenvalue (whose contribution is supported on n < multiplicity).
struct SpectralData {
  std::vector<Complex> lambdas;              // distinct, descending real part
  std::vector<int> mults;                    // algebraic multiplicities
  std::vector<std::vector<Complex>> g_polys; // g_i(n) = sum_j g_polys[i][j] n^j
  std::vector<int> degrees;                  // d_i = deg g_i
  std::vector<Complex> betas;                // g_i(0); alpha_i Tr(v_i) when diagonalizable
  std::vector<Complex> leading;              // b_i, leading coefficient of g_i
  std::vector<Complex> transient;            // coefficients of delta_{n,j} for the zero cluster
  std::optional<double> R;                   // max Re lambda_i over d_i > 0
  std::vector<std::size_t> L1, L2, L2prime, L3;
  int d_max = 0;
  double condition = 0.0;                    // column-scaled condition of the fit

  bool diagonalizable() const { return !R.has_value(); }
  Complex evaluate(int n) const;
};

/// Eigenvalues of op.rep (sorted, conjugate pairs made exact) grouped into
/// clusters; see spectral.cpp for the clustering radius.
SpectralData spectral_decompose(const LiftedOperator& op, const MomentSequence& seq);

/// Fit only, from given distinct eigenvalues and multiplicities.
SpectralData fit_spectral_data(std::vector<Complex> lambdas, std::vector<int> mults,
                               const MomentSequence& seq);

/// Length of the shortest linear recurrence the first values of seq obey,
/// found by a rank test on Hankel matrices. Diagnostic only.
std::size_t minimal_recurrence_length(const MomentSequence& seq, double rel_tol = 1e-9);

}  // namespace matmult
