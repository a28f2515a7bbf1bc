// Copyright 2026 The matmult Authors.
// SPDX-License-Identifier: Apache-2.0

#include "matmult/gamma.hpp"

#include <array>
#include <cmath>
#include <numbers>

namespace matmult {
namespace {

constexpr double kLanczosG = 7.0;
constexpr std::array<double, 9> kLanczos = {
    0.99999999999980993,     676.5203681218851,     -1259.1392167224028,
    771.32342877765313,      -176.61502916214059,   12.507343278686905,
    -0.13857109526572012,    9.9843695780195716e-6, 1.5056327351493116e-7};

bool is_pole(Complex z) {
  return z.imag() == 0.0 && z.real() <= 0.0 && z.real() == std::floor(z.real());
}

// log Gamma(z) for Re z >= 1/2 (principal branch is irrelevant: only exp()
// of the result is used).
Complex log_gamma_right(Complex z) {
  z -= 1.0;
  Complex series = kLanczos[0];
  for (std::size_t i = 1; i < kLanczos.size(); ++i) series += kLanczos[i] / (z + double(i));
  const Complex t = z + kLanczosG + 0.5;
  return 0.5 * std::log(2.0 * std::numbers::pi) + (z + 0.5) * std::log(t) - t + std::log(series);
}

}  // namespace

std::optional<Complex> gamma_complex(Complex z) {
  if (is_pole(z)) return std::nullopt;
  if (z.real() < 0.5) {
    // Reflection: Gamma(z) Gamma(1 - z) = pi / sin(pi z).
    const Complex s = std::sin(std::numbers::pi * z);
    return std::numbers::pi / (s * std::exp(log_gamma_right(1.0 - z)));
  }
  return std::exp(log_gamma_right(z));
}

Complex rgamma(Complex z) {
  if (is_pole(z)) return 0.0;
  if (z.real() < 0.5) {
    const Complex s = std::sin(std::numbers::pi * z);
    return s * std::exp(log_gamma_right(1.0 - z)) / std::numbers::pi;
  }
  return std::exp(-log_gamma_right(z));
}

}  // namespace matmult
