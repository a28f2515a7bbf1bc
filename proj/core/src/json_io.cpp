// Copyright 2026 The matmult Authors.
// SPDX-License-Identifier: Apache-2.0

#include "matmult/json_io.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>

namespace matmult::json {

double round_sig(double v) {
  if (!std::isfinite(v) || v == 0.0) return v;
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.*g", kSignificantDigits, v);
  return std::strtod(buf, nullptr);
}

nlohmann::json complex_value(Complex z) { return {round_sig(z.real()), round_sig(z.imag())}; }

nlohmann::json matrix(const CMatrix& m) {
  nlohmann::json rows = nlohmann::json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    nlohmann::json row = nlohmann::json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(complex_value(m(i, j)));
    rows.push_back(std::move(row));
  }
  return rows;
}

namespace {

template <class Range>
nlohmann::json complex_list(const Range& values) {
  nlohmann::json out = nlohmann::json::array();
  for (const Complex& z : values) out.push_back(complex_value(z));
  return out;
}

nlohmann::json optional_number(const std::optional<double>& v) {
  return v ? nlohmann::json(round_sig(*v)) : nlohmann::json(nullptr);
}

}  // namespace

nlohmann::json to_json(const ValidationReport& report) {
  return {{"mean", matrix(report.mean)},
          {"is_mean_zero", report.is_mean_zero},
          {"is_symmetric_law", report.is_symmetric_law},
          {"second_hs_moment", round_sig(report.second_hs_moment)}};
}

nlohmann::json to_json(const LiftedOperator& op) {
  return {{"k", op.k},
          {"dim", op.dim},
          {"flavor", op.flavor == Flavor::Real ? "real" : "complex"},
          {"l", op.size()},
          {"basis", op.basis},
          {"rep", matrix(op.rep)},
          {"identity_vec", complex_list(op.identity_vec)}};
}

nlohmann::json to_json(const CharPoly& cp) {
  return {{"degree", cp.degree()}, {"coeffs", complex_list(cp.coeffs)}};
}

nlohmann::json to_json(const SpectralData& spec) {
  nlohmann::json g = nlohmann::json::array();
  for (const auto& poly : spec.g_polys) g.push_back(complex_list(poly));
  return {{"lambdas", complex_list(spec.lambdas)},
          {"mults", spec.mults},
          {"betas", complex_list(spec.betas)},
          {"g_polys", std::move(g)},
          {"degrees", spec.degrees},
          {"leading", complex_list(spec.leading)},
          {"transient", complex_list(spec.transient)},
          {"R", optional_number(spec.R)},
          {"L1", spec.L1},
          {"L2", spec.L2},
          {"L2_prime", spec.L2prime},
          {"L3", spec.L3},
          {"d_max", spec.d_max},
          {"diagonalizable", spec.diagonalizable()},
          {"condition", round_sig(spec.condition)}};
}

nlohmann::json to_json(const EulerProductValue& value) {
  return {{"value", complex_value(value.value)},
          {"tail_bound", round_sig(value.tail_bound)},
          {"prime_bound", value.prime_bound}};
}

nlohmann::json to_json(const AsymptoticExpansion& expansion) {
  nlohmann::json terms = nlohmann::json::array();
  for (const auto& t : expansion.terms) {
    terms.push_back({{"lambda", complex_value(t.lambda)}, {"m", t.m}, {"C", complex_value(t.C)}});
  }
  nlohmann::json defective = nlohmann::json::array();
  for (const auto& t : expansion.defective_terms) {
    defective.push_back(
        {{"lambda", complex_value(t.lambda)}, {"d_max", t.d_max}, {"C", complex_value(t.C)}});
  }
  return {{"terms", std::move(terms)},
          {"defective_terms", std::move(defective)},
          {"N", expansion.order},
          {"error_exponent", round_sig(expansion.error_exponent)}};
}

nlohmann::json to_json(const MomentReport& report) {
  return {{"x", report.x},
          {"k", report.k},
          {"exact", optional_number(report.exact)},
          {"mc_estimate", round_sig(report.mc_estimate)},
          {"mc_stderr", round_sig(report.mc_stderr)},
          {"trials", report.trials},
          {"predicted", optional_number(report.predicted)},
          {"seed", report.seed}};
}

nlohmann::json to_json(const JsrBounds& bounds) {
  return {{"lower", round_sig(bounds.lower)},
          {"upper", round_sig(bounds.upper)},
          {"depth", bounds.depth},
          {"delta", bounds.delta},
          {"complete", bounds.complete},
          {"exhausted", bounds.exhausted},
          {"nodes", bounds.nodes},
          {"best_product", bounds.best_product}};
}

nlohmann::json to_json(const RadiusLadder& ladder) {
  nlohmann::json rho = nlohmann::json::array();
  for (double r : ladder.rho) rho.push_back(round_sig(r));
  nlohmann::json probes = nlohmann::json::array();
  for (double p : ladder.probes) probes.push_back(round_sig(p));
  return {{"rho", std::move(rho)}, {"probes", std::move(probes)}, {"n_probe", ladder.n_probe}};
}

nlohmann::json sieve_stats(const SieveTable& table) {
  return {{"x", table.x_max()},
          {"squarefree_count", table.squarefree_count()},
          {"hist", table.hist()}};
}

}  // namespace matmult::json
