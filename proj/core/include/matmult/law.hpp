// Copyright 2026 The matmult Authors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <filesystem>
#include <span>
#include <vector>

#include <nlohmann/json.hpp>

#include "matmult/rng.hpp"
#include "matmult/types.hpp"

namespace matmult {

enum class Field { Real, Complex };

/// A finitely supported probability law on d x d complex matrices,
/// mu = sum_i p_i delta_{B_i}. Immutable once constructed.
class MatrixLaw {
 public:
  static constexpr double kWeightTolerance = 1e-12;
  static constexpr double kRealTolerance = 1e-14;

  /// Throws InvariantError on empty support, ragged or non-square atoms,
  /// non-positive weights or weights not summing to one.
  MatrixLaw(std::vector<CMatrix> atoms, std::vector<double> weights);

  int dim() const { return dim_; }
  std::size_t size() const { return atoms_.size(); }
  Field field() const { return field_; }
  bool is_real() const { return field_ == Field::Real; }

  std::span<const CMatrix> atoms() const { return atoms_; }
  std::span<const double> weights() const { return weights_; }
  const CMatrix& atom(std::size_t i) const { return atoms_[i]; }
  double weight(std::size_t i) const { return weights_[i]; }

  /// Index of the atom selected by a uniform draw u in [0, 1).
  std::size_t pick(double u) const;

 private:
  int dim_ = 0;
  Field field_ = Field::Real;
  std::vector<CMatrix> atoms_;
  std::vector<double> weights_;
  std::vector<double> cumulative_;
};

struct ValidationReport {
  CMatrix mean;
  bool is_mean_zero = false;
  bool is_symmetric_law = false;
  double second_hs_moment = 0.0;
};

MatrixLaw parse_law(const nlohmann::json& doc);
MatrixLaw load_law(const std::filesystem::path& path);
nlohmann::json law_to_json(const MatrixLaw& law);

/// Parses a weight given either as a JSON number or as an exact fraction
/// string such as "1/8".
double parse_weight(const nlohmann::json& value);

ValidationReport validate_law(const MatrixLaw& law, double tol = 1e-12);

/// Draws one atom. A pure function of (law, key).
const CMatrix& sample(const MatrixLaw& law, const DrawKey& key);
std::size_t sample_index(const MatrixLaw& law, const DrawKey& key);

}  // namespace matmult
