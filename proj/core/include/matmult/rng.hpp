// Copyright 2026 The matmult Authors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <array>
#include <cstdint>

namespace matmult {

/// Philox4x32-10 block function (Salmon et al., SC'11). Stateless: the
/// output depends only on (counter, key).
std::array<std::uint32_t, 4> philox4x32(std::array<std::uint32_t, 4> ctr,
                                        std::array<std::uint32_t, 2> key);

/// Coordinates of a single random draw. Identical keys give identical draws
/// on every platform; there is no hidden generator state.
struct DrawKey {
  std::uint64_t seed = 0;
  std::uint64_t stream = 0;  // e.g. Monte Carlo trial index
  std::uint64_t index = 0;   // e.g. the prime p whose value is drawn
};

std::uint64_t random_bits(const DrawKey& key);

/// Uniform double in [0, 1) with 53 random bits.
double uniform01(const DrawKey& key);

}  // namespace matmult
