// Copyright 2026 The matmult Authors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <complex>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace matmult {

using Complex = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed input: unreadable file, bad JSON, wrong shapes.
class ParseError : public Error {
 public:
  using Error::Error;
};

/// Input parsed but violates a domain invariant (weights, dimensions, flavor).
class InvariantError : public Error {
 public:
  using Error::Error;
};

/// A configured size or enumeration cap would be exceeded.
class CapExceeded : public Error {
 public:
  using Error::Error;
};

/// Floating point breakdown: non-finite values, ill-conditioned fits,
/// eigenvalues failing an integrity check.
class NumericalError : public Error {
 public:
  using Error::Error;
};

/// Squared Hilbert-Schmidt norm, Tr(A* A).
inline double hs_norm2(const CMatrix& a) { return a.squaredNorm(); }

}  // namespace matmult
