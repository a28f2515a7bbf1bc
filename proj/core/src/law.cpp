// Copyright 2026 The matmult Authors.
// SPDX-License-Identifier: Apache-2.0

#include "matmult/law.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <string>

namespace matmult {

MatrixLaw::MatrixLaw(std::vector<CMatrix> atoms, std::vector<double> weights)
    : atoms_(std::move(atoms)), weights_(std::move(weights)) {
  if (atoms_.empty()) throw InvariantError("law has no atoms");
  if (atoms_.size() != weights_.size()) {
    throw InvariantError("law has " + std::to_string(atoms_.size()) +
                         " atoms but " + std::to_string(weights_.size()) +
                         " weights");
  }
  dim_ = static_cast<int>(atoms_.front().rows());
  if (dim_ < 1) throw InvariantError("atoms must be at least 1x1");

  double max_imag = 0.0;
  for (std::size_t i = 0; i < atoms_.size(); ++i) {
    const CMatrix& b = atoms_[i];
    if (b.rows() != dim_ || b.cols() != dim_) {
      throw InvariantError("atom " + std::to_string(i) +
                           " is not " + std::to_string(dim_) + "x" +
                           std::to_string(dim_));
    }
    if (!b.allFinite()) {
      throw InvariantError("atom " + std::to_string(i) + " has non-finite entries");
    }
    max_imag = std::max(max_imag, b.imag().cwiseAbs().maxCoeff());
  }
  field_ = max_imag <= kRealTolerance ? Field::Real : Field::Complex;

  double total = 0.0;
  cumulative_.reserve(weights_.size());
  for (std::size_t i = 0; i < weights_.size(); ++i) {
    if (!(weights_[i] > 0.0) || !std::isfinite(weights_[i])) {
      throw InvariantError("weight " + std::to_string(i) + " is not positive");
    }
    total += weights_[i];
    cumulative_.push_back(total);
  }
  if (std::abs(total - 1.0) > kWeightTolerance) {
    throw InvariantError("weights sum to " + std::to_string(total) +
                         ", expected 1");
  }
}

std::size_t MatrixLaw::pick(double u) const {
  // Compare against the unnormalised running sum scaled by the total so
  // that rounding in the last partial sum never leaves a gap.
  const double target = u * cumulative_.back();
  const auto it = std::upper_bound(cumulative_.begin(), cumulative_.end(), target);
  if (it == cumulative_.end()) return cumulative_.size() - 1;
  return static_cast<std::size_t>(it - cumulative_.begin());
}

double parse_weight(const nlohmann::json& value) {
  if (value.is_number()) return value.get<double>();
  if (!value.is_string()) throw ParseError("weight must be a number or a fraction string");
  const std::string text = value.get<std::string>();
  const auto slash = text.find('/');
  auto parse_int = [&](std::string_view part) {
    long long out = 0;
    const auto* first = part.data();
    const auto* last = part.data() + part.size();
    auto [ptr, ec] = std::from_chars(first, last, out);
    if (ec != std::errc{} || ptr != last) {
      throw ParseError("malformed weight \"" + text + "\"");
    }
    return out;
  };
  if (slash == std::string::npos) {
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(text, &used);
    } catch (const std::exception&) {
      throw ParseError("malformed weight \"" + text + "\"");
    }
    if (used != text.size()) throw ParseError("malformed weight \"" + text + "\"");
    return v;
  }
  const std::string_view view(text);
  const long long num = parse_int(view.substr(0, slash));
  const long long den = parse_int(view.substr(slash + 1));
  if (den <= 0) throw ParseError("weight \"" + text + "\" has a non-positive denominator");
  // A single correctly rounded division of two exact integers.
  return static_cast<double>(num) / static_cast<double>(den);
}

MatrixLaw parse_law(const nlohmann::json& doc) {
  if (!doc.is_object()) throw ParseError("law document must be a JSON object");
  for (const char* key : {"dim", "atoms", "weights"}) {
    if (!doc.contains(key)) throw ParseError(std::string("law is missing \"") + key + "\"");
  }
  if (!doc["dim"].is_number_integer()) throw ParseError("\"dim\" must be an integer");
  const auto dim = doc["dim"].get<long long>();
  if (dim < 1) throw InvariantError("\"dim\" must be positive");
  const auto& atoms_json = doc["atoms"];
  const auto& weights_json = doc["weights"];
  if (!atoms_json.is_array() || !weights_json.is_array()) {
    throw ParseError("\"atoms\" and \"weights\" must be arrays");
  }

  std::vector<CMatrix> atoms;
  atoms.reserve(atoms_json.size());
  for (std::size_t a = 0; a < atoms_json.size(); ++a) {
    const auto& rows = atoms_json[a];
    if (!rows.is_array() || static_cast<long long>(rows.size()) != dim) {
      throw InvariantError("atom " + std::to_string(a) + " does not have " +
                           std::to_string(dim) + " rows");
    }
    CMatrix m(dim, dim);
    for (long long i = 0; i < dim; ++i) {
      const auto& row = rows[i];
      if (!row.is_array() || static_cast<long long>(row.size()) != dim) {
        throw InvariantError("atom " + std::to_string(a) + " row " +
                             std::to_string(i) + " does not have " +
                             std::to_string(dim) + " entries");
      }
      for (long long j = 0; j < dim; ++j) {
        const auto& entry = row[j];
        if (entry.is_number()) {
          m(i, j) = Complex(entry.get<double>(), 0.0);
        } else if (entry.is_array() && entry.size() == 2 && entry[0].is_number() &&
                   entry[1].is_number()) {
          m(i, j) = Complex(entry[0].get<double>(), entry[1].get<double>());
        } else {
          throw ParseError("atom " + std::to_string(a) + " entry (" +
                           std::to_string(i) + "," + std::to_string(j) +
                           ") must be [re, im]");
        }
      }
    }
    atoms.push_back(std::move(m));
  }

  std::vector<double> weights;
  weights.reserve(weights_json.size());
  for (const auto& w : weights_json) weights.push_back(parse_weight(w));
  return MatrixLaw(std::move(atoms), std::move(weights));
}

MatrixLaw load_law(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open law file " + path.string());
  nlohmann::json doc;
  try {
    in >> doc;
  } catch (const nlohmann::json::exception& e) {
    throw ParseError("malformed law file " + path.string() + ": " + e.what());
  }
  return parse_law(doc);
}

nlohmann::json law_to_json(const MatrixLaw& law) {
  nlohmann::json atoms = nlohmann::json::array();
  for (const CMatrix& b : law.atoms()) {
    nlohmann::json rows = nlohmann::json::array();
    for (Eigen::Index i = 0; i < b.rows(); ++i) {
      nlohmann::json row = nlohmann::json::array();
      for (Eigen::Index j = 0; j < b.cols(); ++j) {
        row.push_back({b(i, j).real(), b(i, j).imag()});
      }
      rows.push_back(std::move(row));
    }
    atoms.push_back(std::move(rows));
  }
  nlohmann::json weights = std::vector<double>(law.weights().begin(), law.weights().end());
  return {{"dim", law.dim()}, {"atoms", std::move(atoms)}, {"weights", std::move(weights)}};
}

ValidationReport validate_law(const MatrixLaw& law, double tol) {
  ValidationReport report;
  report.mean = CMatrix::Zero(law.dim(), law.dim());
  for (std::size_t i = 0; i < law.size(); ++i) {
    report.mean += law.weight(i) * law.atom(i);
    report.second_hs_moment += law.weight(i) * hs_norm2(law.atom(i));
  }
  report.is_mean_zero = std::sqrt(hs_norm2(report.mean)) <= tol;

  // Symmetric: B -> -B permutes the weighted atom multiset. Match each atom
  // to an unused atom equal to its negation with an equal weight.
  std::vector<bool> used(law.size(), false);
  bool symmetric = true;
  for (std::size_t i = 0; i < law.size() && symmetric; ++i) {
    if (used[i]) continue;
    bool matched = false;
    for (std::size_t j = 0; j < law.size(); ++j) {
      if (used[j] || (j == i && !law.atom(i).isZero(0.0))) continue;
      const double diff = (law.atom(i) + law.atom(j)).cwiseAbs().maxCoeff();
      if (diff <= MatrixLaw::kRealTolerance &&
          std::abs(law.weight(i) - law.weight(j)) <= MatrixLaw::kRealTolerance) {
        used[i] = used[j] = true;
        matched = true;
        break;
      }
    }
    symmetric = matched;
  }
  report.is_symmetric_law = symmetric;
  return report;
}

std::size_t sample_index(const MatrixLaw& law, const DrawKey& key) {
  return law.pick(uniform01(key));
}

const CMatrix& sample(const MatrixLaw& law, const DrawKey& key) {
  return law.atom(sample_index(law, key));
}

}  // namespace matmult
