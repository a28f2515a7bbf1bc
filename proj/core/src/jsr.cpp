// Copyright 2026 The matmult Authors.
// SPDX-License-Identifier: Apache-2.0

#include "matmult/jsr.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include <Eigen/Eigenvalues>

namespace matmult {
namespace {

struct Node {
  CMatrix product;
  std::vector<std::size_t> word;
  double prefix_min;  // min_j ||W_{1..j}||^{1/j}
};

Complex leading_eigenvalue(const CMatrix& rep) {
  Eigen::ComplexEigenSolver<CMatrix> solver(rep, false);
  if (solver.info() != Eigen::Success) throw NumericalError("eigenvalue iteration did not converge");
  const CVector& eig = solver.eigenvalues();
  Complex best = eig(0);
  for (Eigen::Index i = 1; i < eig.size(); ++i) {
    if (eig(i).real() > best.real()) best = eig(i);
  }
  return best;
}

}  // namespace

double spectral_radius(const CMatrix& a) {
  if (a.rows() == 1) return std::abs(a(0, 0));
  if (a.rows() == 2) {
    // Roots of x^2 - tr x + det.
    const Complex tr = a.trace();
    const Complex det = a(0, 0) * a(1, 1) - a(0, 1) * a(1, 0);
    const Complex disc = std::sqrt(tr * tr - 4.0 * det);
    return std::max(std::abs(0.5 * (tr + disc)), std::abs(0.5 * (tr - disc)));
  }
  Eigen::ComplexEigenSolver<CMatrix> solver(a, false);
  return solver.eigenvalues().cwiseAbs().maxCoeff();
}

double rho_2k(const MatrixLaw& law, int k, std::size_t cap) {
  const LiftedOperator op = build_transfer(law, k, natural_flavor(law), cap);
  const Complex lead = leading_eigenvalue(op.rep);
  const double tol = 1e-10 * std::max(1.0, std::abs(lead));
  if (std::abs(lead.imag()) > tol || lead.real() < -tol) {
    throw NumericalError("leading eigenvalue (" + std::to_string(lead.real()) + ", " +
                         std::to_string(lead.imag()) + ") is not real and non-negative");
  }
  return std::pow(std::max(lead.real(), 0.0), 1.0 / (2.0 * k));
}

JsrBounds gripenberg(std::span<const CMatrix> atoms_in, const JsrOptions& options) {
  if (atoms_in.empty()) throw InvariantError("joint spectral radius of an empty set");
  if (!(options.delta > 0.0)) throw InvariantError("delta must be positive");
  if (options.max_depth < 1) throw InvariantError("max_depth must be at least 1");

  std::vector<std::size_t> index;  // positions in atoms_in that are kept
  for (std::size_t i = 0; i < atoms_in.size(); ++i) {
    bool duplicate = false;
    if (options.reduce_signs) {
      for (std::size_t j : index) {
        const double scale = std::max(1.0, atoms_in[j].cwiseAbs().maxCoeff());
        if ((atoms_in[i] - atoms_in[j]).cwiseAbs().maxCoeff() <= 1e-14 * scale ||
            (atoms_in[i] + atoms_in[j]).cwiseAbs().maxCoeff() <= 1e-14 * scale) {
          duplicate = true;
          break;
        }
      }
    }
    if (!duplicate) index.push_back(i);
  }

  JsrBounds out;
  out.delta = options.delta;
  std::vector<Node> frontier;
  double upper_at_depth = 0.0;
  for (std::size_t i : index) {
    const CMatrix& a = atoms_in[i];
    const double rho = spectral_radius(a);
    if (rho > out.lower || out.best_product.empty()) {
      out.lower = std::max(out.lower, rho);
      out.best_product = {i};
    }
    const double norm = std::sqrt(hs_norm2(a));
    upper_at_depth = std::max(upper_at_depth, norm);
    frontier.push_back({a, {i}, norm});
    ++out.nodes;
  }
  out.upper = upper_at_depth;
  out.depth = 1;

  for (int depth = 1;; ++depth) {
    // Prune against the current lower bound, then bound what survives.
    std::vector<Node> kept;
    for (auto& node : frontier) {
      const double normalised = std::pow(std::sqrt(hs_norm2(node.product)), 1.0 / depth);
      if (normalised > out.lower + options.delta) kept.push_back(std::move(node));
    }
    double bound = out.lower + options.delta;
    for (const auto& node : kept) bound = std::max(bound, node.prefix_min);
    out.upper = std::min(out.upper, bound);
    out.depth = depth;
    if (kept.empty()) {
      out.exhausted = true;
      break;
    }
    if (depth == options.max_depth) break;

    std::vector<Node> next;
    bool out_of_budget = false;
    for (const auto& node : kept) {
      for (std::size_t i : index) {
        if (out.nodes >= options.node_budget) {
          out_of_budget = true;
          break;
        }
        CMatrix product = node.product * atoms_in[i];
        const int len = depth + 1;
        const double rho = std::pow(spectral_radius(product), 1.0 / len);
        if (rho > out.lower) {
          out.lower = rho;
          out.best_product = node.word;
          out.best_product.push_back(i);
        }
        const double normalised = std::pow(std::sqrt(hs_norm2(product)), 1.0 / len);
        std::vector<std::size_t> word = node.word;
        word.push_back(i);
        next.push_back({std::move(product), std::move(word), std::min(node.prefix_min, normalised)});
        ++out.nodes;
      }
      if (out_of_budget) break;
    }
    if (out_of_budget) {
      // Depth + 1 is only partially explored; the bound from depth stands.
      out.complete = false;
      break;
    }
    frontier = std::move(next);
  }
  // A spectral radius raised lower after the last bound was formed.
  out.upper = std::max(out.upper, out.lower);
  return out;
}

RadiusLadder rho_ladder(const MatrixLaw& law, int k_max, int n_probe, std::size_t cap) {
  if (k_max < 1) throw InvariantError("k_max must be at least 1");
  RadiusLadder ladder;
  ladder.n_probe = n_probe;
  for (int k = 1; k <= k_max; ++k) {
    ladder.rho.push_back(rho_2k(law, k, cap));
    if (n_probe > 0) {
      const LiftedOperator op = build_transfer(law, k, natural_flavor(law), cap);
      const auto seq = exact_moment_sequence(op, n_probe);
      ladder.probes.push_back(std::pow(std::max(seq.values.back(), 0.0), 1.0 / (2.0 * k * n_probe)));
    }
  }
  return ladder;
}

}  // namespace matmult
