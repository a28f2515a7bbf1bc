// Copyright 2026 The matmult Authors.
// SPDX-License-Identifier: Apache-2.0

#include "matmult/lift.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>
#include <utility>

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

namespace matmult {
namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();

struct Cluster {
  std::vector<Complex> members;
  Complex center() const {
    Complex s = 0.0;
    for (const Complex& z : members) s += z;
    return s / static_cast<double>(members.size());
  }
  double radius(Complex c) const {
    double r = 0.0;
    for (const Complex& z : members) r = std::max(r, std::abs(z - c));
    return r;
  }
};

// A defective eigenvalue of multiplicity m is split by roughly
// (eps * ||A||)^{1/m}, so the admissible spread grows with the cluster size,
// up to a hard ceiling of 1e-3 * (1 + scale).
double merge_tolerance(std::size_t m, double scale, double op_norm) {
  const double base = kClusterRadius * (1.0 + scale);
  if (m <= 1) return base;
  const double split = 10.0 * std::pow(kEps * std::max(1.0, op_norm), 1.0 / double(m));
  return std::min(1e-3 * (1.0 + scale), std::max(base, split));
}

std::vector<Cluster> cluster_eigenvalues(const CVector& eig, double scale, double op_norm) {
  const double ceiling = 1e-3 * (1.0 + scale);
  std::vector<bool> assigned(static_cast<std::size_t>(eig.size()), false);
  std::vector<Cluster> clusters;
  for (Eigen::Index i = 0; i < eig.size(); ++i) {
    if (assigned[i]) continue;
    std::vector<std::pair<double, Eigen::Index>> near;
    for (Eigen::Index j = 0; j < eig.size(); ++j) {
      const double dist = std::abs(eig(j) - eig(i));
      if (!assigned[j] && dist <= 2.0 * ceiling) near.emplace_back(j == i ? -1.0 : dist, j);
    }
    std::sort(near.begin(), near.end());
    // Largest group of nearest neighbours whose spread is admissible.
    std::size_t take = 1;
    for (std::size_t m = near.size(); m >= 2; --m) {
      Cluster trial;
      for (std::size_t q = 0; q < m; ++q) trial.members.push_back(eig(near[q].second));
      if (trial.radius(trial.center()) <= merge_tolerance(m, scale, op_norm)) {
        take = m;
        break;
      }
    }
    Cluster cluster;
    for (std::size_t q = 0; q < take; ++q) {
      cluster.members.push_back(eig(near[q].second));
      assigned[near[q].second] = true;
    }
    clusters.push_back(std::move(cluster));
  }
  return clusters;
}

}  // namespace

Complex SpectralData::evaluate(int n) const {
  Complex acc = 0.0;
  for (std::size_t i = 0; i < lambdas.size(); ++i) {
    if (lambdas[i] == 0.0) continue;
    Complex g = 0.0;
    for (std::size_t j = g_polys[i].size(); j-- > 0;) g = g * double(n) + g_polys[i][j];
    acc += g * std::pow(lambdas[i], n);
  }
  if (n >= 0 && static_cast<std::size_t>(n) < transient.size()) acc += transient[n];
  return acc;
}

SpectralData fit_spectral_data(std::vector<Complex> lambdas, std::vector<int> mults,
                               const MomentSequence& seq) {
  const std::size_t t = lambdas.size();
  const int l = std::accumulate(mults.begin(), mults.end(), 0);
  if (static_cast<int>(seq.values.size()) < l) {
    throw InvariantError("spectral fit needs " + std::to_string(l) + " moments, got " +
                         std::to_string(seq.values.size()));
  }

  CMatrix v(l, l);
  CVector rhs(l);
  for (int n = 0; n < l; ++n) {
    rhs(n) = seq.values[n];
    int col = 0;
    for (std::size_t i = 0; i < t; ++i) {
      const bool zero = lambdas[i] == 0.0;
      const Complex pw = zero ? 0.0 : std::pow(lambdas[i], n);
      for (int j = 0; j < mults[i]; ++j, ++col) {
        v(n, col) = zero ? Complex(n == j ? 1.0 : 0.0) : pw * std::pow(double(n), j);
      }
    }
  }
  // Column equilibration before the condition estimate: powers of small
  // eigenvalues are tiny but not ill-posed.
  Eigen::VectorXd colnorm = v.colwise().norm().transpose();
  for (Eigen::Index c = 0; c < l; ++c) {
    if (colnorm(c) == 0.0) throw NumericalError("confluent Vandermonde column vanishes");
    v.col(c) /= colnorm(c);
  }
  Eigen::JacobiSVD<CMatrix> svd(v);
  const auto& sv = svd.singularValues();
  const double cond = sv(l - 1) > 0.0 ? sv(0) / sv(l - 1) : std::numeric_limits<double>::infinity();
  if (!(cond <= kFitConditionLimit)) {
    throw NumericalError("spectral fit is ill-conditioned (condition " + std::to_string(cond) +
                         "); eigenvalue clusters are ambiguous at double precision");
  }
  CVector sol = v.colPivHouseholderQr().solve(rhs);
  for (Eigen::Index c = 0; c < l; ++c) sol(c) /= colnorm(c);

  SpectralData out;
  out.lambdas = std::move(lambdas);
  out.mults = std::move(mults);
  out.condition = cond;
  double coef_scale = 0.0;
  for (Eigen::Index c = 0; c < l; ++c) coef_scale = std::max(coef_scale, std::abs(sol(c)));
  const double threshold = 1e-9 * std::max(1.0, coef_scale);

  int col = 0;
  for (std::size_t i = 0; i < t; ++i) {
    std::vector<Complex> g(static_cast<std::size_t>(out.mults[i]));
    for (int j = 0; j < out.mults[i]; ++j, ++col) g[j] = sol(col);
    if (out.lambdas[i] == 0.0) {
      out.transient = g;
      g.assign(1, 0.0);
    }
    int deg = 0;
    for (int j = static_cast<int>(g.size()) - 1; j > 0; --j) {
      if (std::abs(g[j]) > threshold) {
        deg = j;
        break;
      }
    }
    out.degrees.push_back(deg);
    out.betas.push_back(g[0]);
    out.leading.push_back(g[static_cast<std::size_t>(deg)]);
    out.g_polys.push_back(std::move(g));
  }

  double scale = 0.0;
  for (const Complex& z : out.lambdas) scale = std::max(scale, std::abs(z));
  const double re_tol = 1e-9 * (1.0 + scale);
  for (std::size_t i = 0; i < t; ++i) {
    if (out.degrees[i] > 0 && (!out.R || out.lambdas[i].real() > *out.R)) {
      out.R = out.lambdas[i].real();
    }
  }
  for (std::size_t i = 0; i < t; ++i) {
    const double re = out.lambdas[i].real();
    if (!out.R || re > *out.R + re_tol) {
      out.L1.push_back(i);
    } else if (re >= *out.R - re_tol) {
      out.L2.push_back(i);
      out.d_max = std::max(out.d_max, out.degrees[i]);
    } else {
      out.L3.push_back(i);
    }
  }
  for (std::size_t i : out.L2) {
    if (out.degrees[i] == out.d_max) out.L2prime.push_back(i);
  }
  return out;
}

SpectralData spectral_decompose(const LiftedOperator& op, const MomentSequence& seq) {
  const Eigen::Index l = op.rep.rows();
  if (static_cast<Eigen::Index>(seq.values.size()) < l) {
    throw InvariantError("spectral decomposition needs at least " + std::to_string(l) +
                         " moments");
  }
  Eigen::ComplexEigenSolver<CMatrix> solver(op.rep, /*computeEigenvectors=*/false);
  if (solver.info() != Eigen::Success) throw NumericalError("eigenvalue iteration did not converge");
  const CVector eig = solver.eigenvalues();
  double scale = 0.0;
  for (Eigen::Index i = 0; i < eig.size(); ++i) scale = std::max(scale, std::abs(eig(i)));
  const double op_norm = op.rep.norm();

  auto clusters = cluster_eigenvalues(eig, scale, op_norm);
  std::vector<Complex> centers;
  std::vector<int> mults;
  std::vector<double> tols;
  for (const auto& c : clusters) {
    centers.push_back(c.center());
    mults.push_back(static_cast<int>(c.members.size()));
    tols.push_back(merge_tolerance(c.members.size(), scale, op_norm));
  }

  // Snap near-real and near-zero centres, then make conjugate partners exact.
  for (std::size_t i = 0; i < centers.size(); ++i) {
    if (std::abs(centers[i]) <= tols[i]) centers[i] = 0.0;
    else if (std::abs(centers[i].imag()) <= tols[i]) centers[i].imag(0.0);
  }
  std::vector<bool> paired(centers.size(), false);
  for (std::size_t i = 0; i < centers.size(); ++i) {
    if (paired[i] || centers[i].imag() <= 0.0) continue;
    std::size_t best = centers.size();
    double best_dist = std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < centers.size(); ++j) {
      if (paired[j] || j == i || mults[j] != mults[i] || centers[j].imag() >= 0.0) continue;
      const double dist = std::abs(centers[j] - std::conj(centers[i]));
      if (dist < best_dist) {
        best_dist = dist;
        best = j;
      }
    }
    if (best < centers.size() && best_dist <= 2.0 * tols[i]) {
      const Complex avg = 0.5 * (centers[i] + std::conj(centers[best]));
      centers[i] = avg;
      centers[best] = std::conj(avg);
      paired[i] = paired[best] = true;
    }
  }

  std::vector<std::size_t> order(centers.size());
  std::iota(order.begin(), order.end(), 0);
  const double tie = kClusterRadius * (1.0 + scale);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    const double ra = centers[a].real(), rb = centers[b].real();
    if (std::abs(ra - rb) > tie) return ra > rb;
    return centers[a].imag() > centers[b].imag();
  });
  std::vector<Complex> sorted_centers;
  std::vector<int> sorted_mults;
  for (std::size_t i : order) {
    sorted_centers.push_back(centers[i]);
    sorted_mults.push_back(mults[i]);
  }
  return fit_spectral_data(std::move(sorted_centers), std::move(sorted_mults), seq);
}

std::size_t minimal_recurrence_length(const MomentSequence& seq, double rel_tol) {
  const auto h = static_cast<Eigen::Index>(seq.values.size() / 2);
  if (h == 0) return 0;
  Eigen::MatrixXd hankel(h, h);
  for (Eigen::Index i = 0; i < h; ++i)
    for (Eigen::Index j = 0; j < h; ++j) hankel(i, j) = seq.values[i + j];
  // Row scaling keeps exponentially growing sequences from hiding the rank.
  for (Eigen::Index i = 0; i < h; ++i) {
    const double norm = hankel.row(i).norm();
    if (norm > 0.0) hankel.row(i) /= norm;
  }
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(hankel);
  const auto& sv = svd.singularValues();
  if (sv.size() == 0 || sv(0) == 0.0) return 0;
  std::size_t rank = 0;
  for (Eigen::Index i = 0; i < sv.size(); ++i) {
    if (sv(i) > rel_tol * sv(0)) ++rank;
  }
  return rank;
}

}  // namespace matmult
