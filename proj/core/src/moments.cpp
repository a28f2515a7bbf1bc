// Copyright 2026 The matmult Authors.
// SPDX-License-Identifier: Apache-2.0

#include "matmult/moments.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>
#include <thread>
#include <vector>

namespace matmult {
namespace {

struct Neumaier {
  double sum = 0.0, comp = 0.0;
  void add(double v) {
    const double t = sum + v;
    if (std::abs(sum) >= std::abs(v)) comp += (sum - t) + v;
    else comp += (v - t) + sum;
    sum = t;
  }
  double value() const { return sum + comp; }
};

// Row-major d x d blocks. Real laws run the kernel in double.
template <class Scalar>
struct FlatAtoms {
  int d = 0;
  std::vector<Scalar> data;

  explicit FlatAtoms(const MatrixLaw& law) : d(law.dim()) {
    data.reserve(law.size() * std::size_t(d) * std::size_t(d));
    for (const CMatrix& b : law.atoms()) {
      for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) {
          if constexpr (std::is_same_v<Scalar, double>) data.push_back(b(i, j).real());
          else data.push_back(b(i, j));
        }
    }
  }
  const Scalar* atom(std::size_t i) const { return data.data() + i * std::size_t(d) * std::size_t(d); }
};

template <class Scalar>
inline void matmul(const Scalar* a, const Scalar* b, Scalar* out, int d) {
  for (int i = 0; i < d; ++i) {
    for (int j = 0; j < d; ++j) {
      Scalar acc{};
      for (int q = 0; q < d; ++q) acc += a[i * d + q] * b[q * d + j];
      out[i * d + j] = acc;
    }
  }
}

template <class Scalar>
class TrialKernel {
 public:
  TrialKernel(const MatrixLaw& law, const SieveTable& table, const McOptions& options)
      : law_(law), table_(table), atoms_(law), d_(law.dim()), d2_(std::size_t(d_) * std::size_t(d_)) {
    if (!table.has_largest_prime_factor()) {
      throw InvariantError("Monte Carlo needs a sieve built with largest prime factors");
    }
    const std::size_t bytes = (table.x_max() + 1) * d2_ * sizeof(Scalar);
    memo_ = bytes <= options.memo_bytes_cap;
    if (memo_) values_.assign((table.x_max() + 1) * d2_, Scalar{});
    else scratch_.assign(2 * d2_, Scalar{});
    sum_.assign(d2_, Scalar{});
  }

  // Accumulates S_f(x) for one trial into sum_.
  const std::vector<Scalar>& run(std::uint64_t seed, std::uint64_t trial) {
    std::fill(sum_.begin(), sum_.end(), Scalar{});
    for (int i = 0; i < d_; ++i) sum_[std::size_t(i) * d_ + i] = Scalar(1);  // f(1) = I
    const std::uint64_t x = table_.x_max();
    auto draw = [&](std::uint64_t p) {
      return atoms_.atom(sample_index(law_, DrawKey{seed, trial, p}));
    };
    if (memo_) {
      Scalar* f = values_.data();
      for (std::uint64_t n = 2; n <= x; ++n) {
        if (!table_.squarefree(n)) continue;
        const std::uint64_t big = table_.largest_prime_factor(n);
        Scalar* out = f + n * d2_;
        if (big == n) {
          const Scalar* a = draw(n);
          std::copy(a, a + d2_, out);
        } else {
          matmul(f + (n / big) * d2_, f + big * d2_, out, d_);
        }
        for (std::size_t e = 0; e < d2_; ++e) sum_[e] += out[e];
      }
    } else {
      std::vector<std::uint64_t> factors;
      for (std::uint64_t n = 2; n <= x; ++n) {
        if (!table_.squarefree(n)) continue;
        factors.clear();
        for (std::uint64_t q = n; q > 1; q /= table_.largest_prime_factor(q)) {
          factors.push_back(table_.largest_prime_factor(q));
        }
        // factors are descending; multiply in ascending prime order.
        Scalar* cur = scratch_.data();
        Scalar* nxt = scratch_.data() + d2_;
        const Scalar* first = draw(factors.back());
        std::copy(first, first + d2_, cur);
        for (std::size_t i = factors.size() - 1; i-- > 0;) {
          matmul(cur, draw(factors[i]), nxt, d_);
          std::swap(cur, nxt);
        }
        for (std::size_t e = 0; e < d2_; ++e) sum_[e] += cur[e];
      }
    }
    return sum_;
  }

  CMatrix to_matrix(const std::vector<Scalar>& flat) const {
    CMatrix m(d_, d_);
    for (int i = 0; i < d_; ++i)
      for (int j = 0; j < d_; ++j) m(i, j) = Complex(flat[std::size_t(i) * d_ + j]);
    return m;
  }

  static double norm2(const std::vector<Scalar>& flat) {
    double acc = 0.0;
    for (const Scalar& v : flat) acc += std::norm(v);
    return acc;
  }

 private:
  const MatrixLaw& law_;
  const SieveTable& table_;
  FlatAtoms<Scalar> atoms_;
  int d_;
  std::size_t d2_;
  bool memo_ = true;
  std::vector<Scalar> values_;
  std::vector<Scalar> scratch_;
  std::vector<Scalar> sum_;
};

template <class Scalar>
void run_trials(const MatrixLaw& law, const SieveTable& table, int k, std::uint64_t seed,
                const McOptions& options, std::vector<double>& out) {
  const std::uint64_t trials = out.size();
  unsigned threads = options.threads != 0 ? options.threads : std::thread::hardware_concurrency();
  threads = static_cast<unsigned>(std::clamp<std::uint64_t>(threads, 1, trials));
  auto work = [&](std::uint64_t begin, std::uint64_t end) {
    TrialKernel<Scalar> kernel(law, table, options);
    for (std::uint64_t t = begin; t < end; ++t) {
      out[t] = std::pow(TrialKernel<Scalar>::norm2(kernel.run(seed, t)), k);
    }
  };
  if (threads == 1) {
    work(0, trials);
    return;
  }
  std::vector<std::thread> pool;
  const std::uint64_t chunk = (trials + threads - 1) / threads;
  for (unsigned w = 0; w < threads; ++w) {
    const std::uint64_t begin = w * chunk;
    const std::uint64_t end = std::min(trials, begin + chunk);
    if (begin >= end) break;
    pool.emplace_back(work, begin, end);
  }
  for (auto& th : pool) th.join();
}

std::vector<std::uint64_t> primes_upto(std::uint64_t x) {
  std::vector<std::uint64_t> out;
  for (std::uint64_t n = 2; n <= x; ++n) {
    bool prime = true;
    for (std::uint64_t p : out) {
      if (p * p > n) break;
      if (n % p == 0) {
        prime = false;
        break;
      }
    }
    if (prime) out.push_back(n);
  }
  return out;
}

}  // namespace

double exact_second_moment(const SieveTable& table, const MomentSequence& seq) {
  if (seq.k != 1) throw InvariantError("exact second moment needs the k = 1 moment sequence");
  const auto& h = table.hist();
  if (seq.values.size() < h.size()) {
    throw InvariantError("moment sequence covers omega <= " + std::to_string(seq.values.size() - 1) +
                         " but the sieve reaches omega = " + std::to_string(h.size() - 1));
  }
  Neumaier acc;
  for (std::size_t r = 0; r < h.size(); ++r) acc.add(double(h[r]) * seq.values[r]);
  return acc.value();
}

CMatrix mc_partial_sum(const MatrixLaw& law, const SieveTable& table, std::uint64_t seed,
                       std::uint64_t trial_index, const McOptions& options) {
  if (law.is_real()) {
    TrialKernel<double> kernel(law, table, options);
    return kernel.to_matrix(kernel.run(seed, trial_index));
  }
  TrialKernel<Complex> kernel(law, table, options);
  return kernel.to_matrix(kernel.run(seed, trial_index));
}

MomentReport mc_moment(const MatrixLaw& law, const SieveTable& table, int k,
                       std::uint64_t trials, std::uint64_t seed, const McOptions& options) {
  if (trials < 2) throw InvariantError("Monte Carlo needs at least 2 trials");
  if (k < 1) throw InvariantError("moment order k must be positive");
  std::vector<double> values(trials);
  if (law.is_real()) run_trials<double>(law, table, k, seed, options, values);
  else run_trials<Complex>(law, table, k, seed, options, values);

  // Reduction in trial order, independent of the thread split.
  Neumaier sum;
  for (double v : values) sum.add(v);
  const double mean = sum.value() / double(trials);
  Neumaier sq;
  for (double v : values) sq.add((v - mean) * (v - mean));
  const double variance = sq.value() / double(trials - 1);

  MomentReport report;
  report.x = table.x_max();
  report.k = k;
  report.mc_estimate = mean;
  report.mc_stderr = std::sqrt(variance / double(trials));
  report.trials = trials;
  report.seed = seed;
  return report;
}

double brute_force_moment(const MatrixLaw& law, std::uint64_t x, int k) {
  if (x < 1) throw InvariantError("brute force needs x >= 1");
  if (k < 1) throw InvariantError("moment order k must be positive");
  const auto primes = primes_upto(x);
  const double assignments = std::pow(double(law.size()), double(primes.size()));
  if (assignments > kBruteForceCap) {
    throw CapExceeded("brute force over " + std::to_string(law.size()) + "^" +
                      std::to_string(primes.size()) + " assignments exceeds 1e7");
  }
  // Squarefree n <= x as ascending lists of prime indices.
  std::vector<std::vector<std::size_t>> factorisations;
  for (std::uint64_t n = 2; n <= x; ++n) {
    std::vector<std::size_t> idx;
    std::uint64_t q = n;
    bool squarefree = true;
    for (std::size_t i = 0; i < primes.size() && q > 1; ++i) {
      if (q % primes[i] != 0) continue;
      q /= primes[i];
      if (q % primes[i] == 0) {
        squarefree = false;
        break;
      }
      idx.push_back(i);
    }
    if (squarefree) factorisations.push_back(std::move(idx));
  }

  const int d = law.dim();
  const CMatrix identity = CMatrix::Identity(d, d);
  std::vector<std::size_t> choice(primes.size(), 0);
  Neumaier total;
  const auto count = static_cast<std::uint64_t>(assignments);
  for (std::uint64_t c = 0; c < count; ++c) {
    double weight = 1.0;
    for (std::size_t i = 0; i < choice.size(); ++i) weight *= law.weight(choice[i]);
    CMatrix s = identity;
    for (const auto& idx : factorisations) {
      CMatrix f = law.atom(choice[idx.front()]);
      for (std::size_t j = 1; j < idx.size(); ++j) f = f * law.atom(choice[idx[j]]);
      s += f;
    }
    total.add(weight * std::pow(hs_norm2(s), k));
    for (std::size_t i = 0; i < choice.size(); ++i) {
      if (++choice[i] < law.size()) break;
      choice[i] = 0;
    }
  }
  return total.value();
}

double square_tuple_sum(std::uint64_t x, int k, std::uint64_t m_weight) {
  if (x < 1) throw InvariantError("square tuple sum needs x >= 1");
  if (k < 1) throw InvariantError("k must be positive");
  if (std::pow(double(x), 2.0 * k) > kSquareTupleBudget) {
    throw CapExceeded("square tuple enumeration x^" + std::to_string(2 * k) + " exceeds 1e8");
  }
  std::vector<int> omega(x + 1, 0);
  std::vector<bool> squarefree(x + 1, true);
  for (std::uint64_t p = 2; p <= x; ++p) {
    if (omega[p] != 0) continue;  // composite: already has a smaller prime factor
    for (std::uint64_t q = p; q <= x; q += p) ++omega[q];
    for (std::uint64_t q = p * p; q <= x; q += p * p) squarefree[q] = false;
  }
  std::vector<std::uint64_t> values;
  for (std::uint64_t n = 1; n <= x; ++n)
    if (squarefree[n]) values.push_back(n);

  const int slots = 2 * k;
  const double m = double(m_weight);
  Neumaier total;
  // kernel: squarefree part of the running product. The last entry must
  // equal the kernel of the first 2k - 1 entries.
  auto recurse = [&](auto&& self, int depth, std::uint64_t kernel, int omega_sum) -> void {
    if (depth == slots - 1) {
      if (kernel <= x) {
        const int total_omega = omega_sum + omega[kernel];
        total.add(std::pow(m, total_omega / 2));
      }
      return;
    }
    for (std::uint64_t n : values) {
      const std::uint64_t g = std::gcd(kernel, n);
      self(self, depth + 1, (kernel / g) * (n / g), omega_sum + omega[n]);
    }
  };
  recurse(recurse, 0, 1, 0);
  return total.value();
}

}  // namespace matmult
