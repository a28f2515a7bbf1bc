// Copyright 2026 The matmult Authors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <optional>

#include "matmult/types.hpp"

namespace matmult {

/// Gamma(z) by the Lanczos approximation (g = 7, 9 terms) with reflection
/// for Re z < 1/2. Returns nullopt at the poles z = 0, -1, -2, ...
std::optional<Complex> gamma_complex(Complex z);

/// 1 / Gamma(z); exactly zero at the poles of Gamma.
Complex rgamma(Complex z);

}  // namespace matmult
