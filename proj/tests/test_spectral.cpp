// Copyright 2026 The matmult Authors.
// SPDX-License-Identifier: Apache-2.0

#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "oracles.hpp"

namespace {

using matmult::CMatrix;
using matmult::Complex;
using matmult::Flavor;

matmult::SpectralData decompose(const matmult::MatrixLaw& law, int k, Flavor flavor, int extra = 8) {
  const auto op = matmult::build_transfer(law, k, flavor);
  const auto seq = matmult::exact_moment_sequence(op, static_cast<int>(op.size()) + extra);
  return matmult::spectral_decompose(op, seq);
}

std::size_t index_of(const matmult::SpectralData& s, Complex lambda) {
  for (std::size_t i = 0; i < s.lambdas.size(); ++i)
    if (std::abs(s.lambdas[i] - lambda) < 1e-9) return i;
  return s.lambdas.size();
}

TEST(Spectral, Sl2EigenvaluesAndWeights) {
  const auto s = decompose(oracle::law("sl2"), 1, Flavor::Real);
  ASSERT_EQ(s.lambdas.size(), 3u);
  const double r3 = std::sqrt(3.0);
  const Complex l1 = (3 + r3) / 4, l2 = (3 - r3) / 4, l3 = 0.5;
  const Complex b1 = 1 + 2 / r3, b2 = 1 - 2 / r3, b3 = 0.0;
  // Sorted by descending real part.
  EXPECT_NEAR(std::abs(s.lambdas[0] - l1), 0.0, 1e-12);
  EXPECT_NEAR(std::abs(s.lambdas[1] - l3), 0.0, 1e-12);
  EXPECT_NEAR(std::abs(s.lambdas[2] - l2), 0.0, 1e-12);
  EXPECT_NEAR(std::abs(s.betas[0] - b1), 0.0, 1e-10);
  EXPECT_NEAR(std::abs(s.betas[1] - b3), 0.0, 1e-10);
  EXPECT_NEAR(std::abs(s.betas[2] - b2), 0.0, 1e-10);
  EXPECT_TRUE(s.diagonalizable());
  for (int d : s.degrees) EXPECT_EQ(d, 0);
  EXPECT_EQ(s.L1.size(), 3u);
  EXPECT_TRUE(s.L2.empty());
}

TEST(Spectral, IdentityLawIsOneCluster) {
  const auto s = decompose(oracle::law("identity2"), 1, Flavor::Complex);
  ASSERT_EQ(s.lambdas.size(), 1u);
  EXPECT_EQ(s.mults[0], 4);
  EXPECT_EQ(s.degrees[0], 0);
  EXPECT_NEAR(std::abs(s.betas[0] - 2.0), 0.0, 1e-12);
  for (int n = 0; n < 20; ++n) EXPECT_NEAR(s.evaluate(n).real(), 2.0, 1e-12);
}

TEST(Spectral, ShearIsDefective) {
  const auto law = oracle::law("shear");
  const auto op = matmult::build_transfer(law, 1, Flavor::Real);
  const auto seq = matmult::exact_moment_sequence(op, 30);
  for (int n = 0; n <= 30; ++n) EXPECT_EQ(seq.values[n], double(n) * n + 2.0);

  const auto cp = matmult::char_poly(op);
  ASSERT_EQ(cp.degree(), 3u);
  EXPECT_EQ(cp.coeffs[0], Complex(-3));
  EXPECT_EQ(cp.coeffs[1], Complex(3));
  EXPECT_EQ(cp.coeffs[2], Complex(-1));
  for (double r : matmult::verify_recurrence(seq, cp)) EXPECT_LE(r, 1e-10);

  const auto s = matmult::spectral_decompose(op, seq);
  ASSERT_EQ(s.lambdas.size(), 1u);
  EXPECT_EQ(s.mults[0], 3);
  EXPECT_EQ(s.degrees[0], 2);
  EXPECT_EQ(s.d_max, 2);
  ASSERT_EQ(s.g_polys[0].size(), 3u);
  EXPECT_NEAR(std::abs(s.g_polys[0][0] - 2.0), 0.0, 1e-8);
  EXPECT_NEAR(std::abs(s.g_polys[0][1]), 0.0, 1e-8);
  EXPECT_NEAR(std::abs(s.g_polys[0][2] - 1.0), 0.0, 1e-8);
  ASSERT_TRUE(s.R.has_value());
  EXPECT_DOUBLE_EQ(*s.R, 1.0);
  EXPECT_TRUE(s.L1.empty());
  EXPECT_EQ(s.L2prime, std::vector<std::size_t>{0});
}

TEST(Spectral, ZeroLawIsPureTransient) {
  const auto op = matmult::build_transfer(oracle::law("zero2"), 1, Flavor::Complex);
  const auto seq = matmult::exact_moment_sequence(op, 10);
  EXPECT_EQ(seq.values[0], 2.0);
  for (int n = 1; n <= 10; ++n) EXPECT_EQ(seq.values[n], 0.0);
  for (double r : matmult::verify_recurrence(seq, matmult::char_poly(op))) EXPECT_EQ(r, 0.0);
  const auto s = matmult::spectral_decompose(op, seq);
  ASSERT_EQ(s.lambdas.size(), 1u);
  EXPECT_EQ(s.lambdas[0], Complex(0.0));
  ASSERT_FALSE(s.transient.empty());
  EXPECT_NEAR(std::abs(s.transient[0] - 2.0), 0.0, 1e-14);
  for (int n = 0; n <= 10; ++n) EXPECT_NEAR(std::abs(s.evaluate(n) - seq.values[n]), 0.0, 1e-14);
}

TEST(Spectral, JordanBlockWithSimpleEigenvalue) {
  // diag(1, 1/2) with a shear on top: T has a defective eigenvalue 1 and
  // further simple eigenvalues.
  CMatrix a(2, 2);
  a << 1, 1, 0, 0.5;
  const auto s = decompose(matmult::MatrixLaw({a}, {1.0}), 1, Flavor::Real, 10);
  const auto seq = matmult::exact_moment_sequence(matmult::build_transfer(matmult::MatrixLaw({a}, {1.0}), 1, Flavor::Real), 20);
  for (int n = 0; n <= 20; ++n) {
    EXPECT_NEAR(s.evaluate(n).real(), seq.values[n], 1e-8 * std::max(1.0, seq.values[n]));
  }
}

TEST(Spectral, ComplexPairsAreConjugate) {
  CMatrix rot(2, 2);
  const double c = std::cos(0.7), s = std::sin(0.7);
  rot << c, -s, s, c;
  CMatrix scaled = 0.9 * rot;
  scaled(0, 0) += 0.2;
  const matmult::MatrixLaw law({scaled, CMatrix(-scaled)}, {0.5, 0.5});
  const auto sd = decompose(law, 1, Flavor::Complex);
  for (std::size_t i = 0; i < sd.lambdas.size(); ++i) {
    if (sd.lambdas[i].imag() == 0.0) continue;
    const std::size_t j = index_of(sd, std::conj(sd.lambdas[i]));
    ASSERT_LT(j, sd.lambdas.size());
    EXPECT_EQ(sd.lambdas[j], std::conj(sd.lambdas[i]));
    EXPECT_NEAR(std::abs(sd.betas[j] - std::conj(sd.betas[i])), 0.0, 1e-9);
  }
}

TEST(Spectral, SortIsDescendingRealThenImag) {
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 10; ++trial) {
    const auto law = oracle::random_law(rng, {2, 3, true});
    const auto s = decompose(law, 1, Flavor::Complex);
    for (std::size_t i = 1; i < s.lambdas.size(); ++i) {
      const double dr = s.lambdas[i - 1].real() - s.lambdas[i].real();
      EXPECT_GE(dr, -1e-8);
      if (std::abs(dr) <= 1e-8) {
        EXPECT_GE(s.lambdas[i - 1].imag(), s.lambdas[i].imag());
      }
    }
  }
}

// Property: the fit reproduces a_n well beyond the fitted window.
TEST(SpectralProperty, ReconstructionOnRandomLaws) {
  std::mt19937_64 rng(19);
  int fitted = 0;
  for (int trial = 0; trial < 30; ++trial) {
    const int d = 1 + trial % 3;
    const auto law = oracle::random_law(rng, {d, 1 + trial % 4, trial % 2 == 0});
    const auto op = matmult::build_transfer(law, 1, matmult::natural_flavor(law));
    const int l = static_cast<int>(op.size());
    const auto seq = matmult::exact_moment_sequence(op, 2 * l);
    matmult::SpectralData s;
    try {
      s = matmult::spectral_decompose(op, seq);
    } catch (const matmult::NumericalError&) {
      continue;
    }
    ++fitted;
    for (int n = 0; n <= 2 * l; ++n) {
      EXPECT_NEAR(std::abs(s.evaluate(n) - seq.values[n]), 0.0, 1e-7 * std::max(1.0, seq.values[n]))
          << "trial " << trial << " n " << n;
    }
    // The leading eigenvalue of a completely positive map is real, >= 0.
    EXPECT_NEAR(s.lambdas[0].imag(), 0.0, 1e-9);
    EXPECT_GE(s.lambdas[0].real(), -1e-12);
  }
  EXPECT_GE(fitted, 25);
}

TEST(Spectral, FitRejectsShortSequence) {
  const auto op = matmult::build_transfer(oracle::law("sl2"), 1, Flavor::Real);
  const auto seq = matmult::exact_moment_sequence(op, 1);
  EXPECT_THROW(matmult::spectral_decompose(op, seq), matmult::InvariantError);
}

TEST(Spectral, FitRejectsAmbiguousClusters) {
  matmult::MomentSequence seq{1, {}};
  for (int n = 0; n < 4; ++n) seq.values.push_back(std::pow(1.0, n) + std::pow(1.0 + 1e-13, n));
  EXPECT_THROW(matmult::fit_spectral_data({1.0, 1.0 + 1e-13}, {1, 1}, seq), matmult::NumericalError);
}

}  // namespace
