// Copyright 2026 The matmult Authors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <nlohmann/json.hpp>

#include "matmult/jsr.hpp"
#include "matmult/law.hpp"
#include "matmult/lift.hpp"
#include "matmult/moments.hpp"
#include "matmult/selberg_delange.hpp"
#include "matmult/sieve.hpp"

namespace matmult::json {

inline constexpr int kSchemaVersion = 1;
inline constexpr int kSignificantDigits = 12;

/// Rounds to 12 significant digits so dumps are stable across platforms.
double round_sig(double v);

/// Complex numbers are written as [re, im].
nlohmann::json complex_value(Complex z);
nlohmann::json matrix(const CMatrix& m);

nlohmann::json to_json(const ValidationReport& report);
nlohmann::json to_json(const LiftedOperator& op);
nlohmann::json to_json(const CharPoly& cp);
nlohmann::json to_json(const SpectralData& spec);
nlohmann::json to_json(const EulerProductValue& value);
nlohmann::json to_json(const AsymptoticExpansion& expansion);
nlohmann::json to_json(const MomentReport& report);
nlohmann::json to_json(const JsrBounds& bounds);
nlohmann::json to_json(const RadiusLadder& ladder);
nlohmann::json sieve_stats(const SieveTable& table);

}  // namespace matmult::json
