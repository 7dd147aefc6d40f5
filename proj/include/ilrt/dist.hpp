// Copyright 2026 The ilrt Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
//
// Probability model of the band-hit counter: the ±1 random-walk pmf,
// band-event probabilities, the conditional probabilities for adjacent
// indices, both branches of the counter distribution, a brute-force
// path-enumeration oracle, and the Pearson projector matrix.
//
// Every θ-style gate below is decided with IEEE double comparisons
// against φ-derived thresholds (φ is irrational, so a fully exact gate is
// not definable); the exact-rational mode switches only the summation
// arithmetic. A NaN argument fails every gate.

#ifndef ILRT_DIST_HPP_
#define ILRT_DIST_HPP_

#include <gmpxx.h>

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdlib>
#include <map>
#include <numbers>
#include <string>
#include <vector>

#include "ilrt/errors.hpp"
#include "ilrt/logprob.hpp"
#include "ilrt/matrix.hpp"
#include "ilrt/walk.hpp"

namespace ilrt::dist {

using num::LogProb;
using num::Mode;

/// Heaviside step with the convention θ(x) = 1 iff x is a real number ≥ 0;
/// non-real arguments (NaN) yield 0.
inline int heaviside(double x) { return x >= 0.0 ? 1 : 0; }

namespace detail {

/// ln P(s_n = k); −inf on parity mismatch or |k| > n. Evaluated at |k|
/// (the same binomial coefficient) so the k ↔ −k symmetry is bit-exact.
inline double log_pmf(std::size_t n, long long k) {
  long long ln = static_cast<long long>(n);
  if (k < -ln || k > ln || ((ln + k) & 1) != 0) return num::kNegInf;
  std::size_t up = static_cast<std::size_t>((ln + std::llabs(k)) / 2);
  return num::log_binomial(n, up) - static_cast<double>(n) * std::numbers::ln2;
}

/// C(n, (n+k)/2) as a big integer; 0 on parity mismatch or |k| > n.
inline mpz_class pmf_numerator(std::size_t n, long long k) {
  long long ln = static_cast<long long>(n);
  if (k < -ln || k > ln || ((ln + k) & 1) != 0) return mpz_class(0);
  mpz_class c;
  mpz_bin_uiui(c.get_mpz_t(), static_cast<unsigned long>(n),
               static_cast<unsigned long>((ln + k) / 2));
  return c;
}

inline mpq_class over_power_of_two(mpz_class numerator, std::size_t exponent) {
  mpz_class den;
  mpz_ui_pow_ui(den.get_mpz_t(), 2, static_cast<unsigned long>(exponent));
  mpq_class q(numerator, den);
  q.canonicalize();
  return q;
}

}  // namespace detail

/// P(s_n = k) = δ[(−1)^{n+k} = 1] · C(n,(n+k)/2) / 2^n.
inline LogProb walk_pmf(std::size_t n, long long k, Mode mode = Mode::kLogDouble) {
  if (n < 1) throw DomainError("walk_pmf requires n >= 1");
  if (mode == Mode::kExactRational) {
    return LogProb::from_exact(detail::over_power_of_two(detail::pmf_numerator(n, k), n));
  }
  return LogProb::from_log(detail::log_pmf(n, k));
}

/// P(s_n/φ(n) ∈ [1−ε, 1+ε]); zero for n ∈ {1,2} where φ is non-real.
inline LogProb event_probability(std::size_t n, double epsilon, Mode mode = Mode::kLogDouble) {
  if (n < 1) throw DomainError("event_probability requires n >= 1");
  if (!(epsilon > 0.0)) throw DomainError("event_probability requires epsilon > 0");
  if (n <= 2) return LogProb::zero(mode);
  double p = walk::phi(n);
  long long ln = static_cast<long long>(n);
  if (mode == Mode::kExactRational) {
    mpz_class numerator = 0;
    for (long long k = -ln; k <= ln; k += 2) {
      if (heaviside(static_cast<double>(k) - p * (1.0 - epsilon)) &&
          heaviside(p * (1.0 + epsilon) - static_cast<double>(k))) {
        numerator += detail::pmf_numerator(n, k);
      }
    }
    return LogProb::from_exact(detail::over_power_of_two(numerator, n));
  }
  num::KahanSum sum;
  for (long long k = -ln; k <= ln; k += 2) {
    if (heaviside(static_cast<double>(k) - p * (1.0 - epsilon)) &&
        heaviside(p * (1.0 + epsilon) - static_cast<double>(k))) {
      sum.add(std::exp(detail::log_pmf(n, k)));
    }
  }
  return LogProb::from_linear(sum.value());
}

/// The band-increment maps f(n,ε) = (φ(n)−φ(n−1))(1−ε) and
/// g(n,ε) = (φ(n)−φ(n−1))(1+ε); defined from n = 4 on.
struct BandMaps {
  double f = 0.0;
  double g = 0.0;
};

inline BandMaps band_maps(std::size_t n, double epsilon) {
  if (n < 4) throw DomainError("band_maps requires n >= 4 (phi(n-1) must be real)");
  if (!(epsilon > 0.0)) throw DomainError("band_maps requires epsilon > 0");
  double diff = walk::phi(n) - walk::phi(n - 1);
  return BandMaps{diff * (1.0 - epsilon), diff * (1.0 + epsilon)};
}

namespace detail {

/// Shared kernel for the two conditional probabilities: both are
/// ½·Σ_k gate1(k)·pmf(n−1,k) + ½·Σ_k gate2(k)·pmf(n−1,k) over the
/// support of s_{n−1}, differing only in the gate arguments and in
/// whether the inequality is weak (θ ≥ 0) or strict (the (1−δ) factor).
template <typename Gate1, typename Gate2>
LogProb half_sum_pair(std::size_t n, Mode mode, Gate1 gate1, Gate2 gate2) {
  std::size_t prev = n - 1;
  long long lp = static_cast<long long>(prev);
  if (mode == Mode::kExactRational) {
    mpz_class num1 = 0;
    mpz_class num2 = 0;
    for (long long k = -lp; k <= lp; k += 2) {
      if (gate1(static_cast<double>(k))) num1 += pmf_numerator(prev, k);
      if (gate2(static_cast<double>(k))) num2 += pmf_numerator(prev, k);
    }
    // ½·s1 + ½·s2 = (num1 + num2) / 2^{n}.
    return LogProb::from_exact(over_power_of_two(num1 + num2, prev + 1));
  }
  num::KahanSum s1;
  num::KahanSum s2;
  for (long long k = -lp; k <= lp; k += 2) {
    double mass = std::exp(log_pmf(prev, k));
    if (gate1(static_cast<double>(k))) s1.add(mass);
    if (gate2(static_cast<double>(k))) s2.add(mass);
  }
  return LogProb::from_linear(0.5 * (s1.value() + s2.value()));
}

}  // namespace detail

/// P(E_n | E_{n−1}) for adjacent indices:
/// ½Σ_k θ[k − φ(n−1)(1−ε) − f(n,ε) − 1]·pmf(n−1,k)
/// + ½Σ_k θ[φ(n−1)(1+ε) − k + g(n,ε) − 1]·pmf(n−1,k).
inline LogProb consecutive_conditional(std::size_t n, double epsilon,
                                       Mode mode = Mode::kLogDouble) {
  if (n < 4) throw DomainError("consecutive_conditional requires n >= 4");
  if (!(epsilon > 0.0)) throw DomainError("consecutive_conditional requires epsilon > 0");
  BandMaps bm = band_maps(n, epsilon);
  double pm = walk::phi(n - 1);
  return detail::half_sum_pair(
      n, mode,
      [&](double k) { return heaviside(k - pm * (1.0 - epsilon) - bm.f - 1.0) != 0; },
      [&](double k) { return heaviside(pm * (1.0 + epsilon) - k + bm.g - 1.0) != 0; });
}

/// P(¬E_n | ¬E_{n−1}) for the zero-counter branch; the θ·(1−δ[arg,0])
/// product makes both inequalities strict.
inline LogProb nonconsecutive_conditional_zero(std::size_t n, double epsilon,
                                               Mode mode = Mode::kLogDouble) {
  if (n < 4) throw DomainError("nonconsecutive_conditional_zero requires n >= 4");
  if (!(epsilon > 0.0)) {
    throw DomainError("nonconsecutive_conditional_zero requires epsilon > 0");
  }
  BandMaps bm = band_maps(n, epsilon);
  double pm = walk::phi(n - 1);
  return detail::half_sum_pair(
      n, mode, [&](double k) { return k - pm * (1.0 + epsilon) - bm.g - 1.0 > 0.0; },
      [&](double k) { return pm * (1.0 - epsilon) - k + bm.f - 1.0 > 0.0; });
}

/// P(c_{N,ε} = 0) = (1 − P(E_3)) · Π_{n=4}^{N} P(¬E_n | ¬E_{n−1}).
/// The empty product (N = 3) is 1.
inline LogProb counter_zero_probability(std::size_t N, double epsilon,
                                        Mode mode = Mode::kLogDouble) {
  if (N < 3) throw DomainError("counter_zero_probability requires N >= 3");
  if (!(epsilon > 0.0)) throw DomainError("counter_zero_probability requires epsilon > 0");
  if (mode == Mode::kExactRational && N > 2000) {
    throw CapacityError("exact-rational counter_zero_probability capped at N = 2000");
  }
  LogProb acc = event_probability(3, epsilon, mode).complement();
  if (mode == Mode::kExactRational) {
    for (std::size_t n = 4; n <= N; ++n) {
      acc = acc * nonconsecutive_conditional_zero(n, epsilon, mode);
    }
    return acc;
  }
  double log_acc = acc.log();
  for (std::size_t n = 4; n <= N; ++n) {
    log_acc += nonconsecutive_conditional_zero(n, epsilon, mode).log();
  }
  return LogProb::from_log(log_acc);
}

/// Evaluation strategy for the m ≥ 1 counter-distribution formula.
enum class PaperStrategy {
  kEnumerateSubsets,  // literal sum over ordered m-subsets of {3..N}
  kDp,                // chain recursion over (index, count, adjacency flag)
};

namespace detail {

struct FactorTables {
  std::vector<LogProb> event;        // event[n] = P(E_n), n in [3, N]
  std::vector<LogProb> consecutive;  // consecutive[n] = P(E_n | E_{n−1}), n in [4, N]
};

inline FactorTables factor_tables(std::size_t N, double epsilon, Mode mode) {
  FactorTables t;
  t.event.resize(N + 1);
  t.consecutive.resize(N + 1);
  for (std::size_t n = 3; n <= N; ++n) t.event[n] = event_probability(n, epsilon, mode);
  for (std::size_t n = 4; n <= N; ++n) {
    t.consecutive[n] = consecutive_conditional(n, epsilon, mode);
  }
  return t;
}

/// Literal enumeration of the ordered m-subsets π of {3,…,N} in
/// lexicographic order: Σ_π E(π(1)) · Π_{i≥2} [π(i−1) = π(i)−1 ?
/// CC(π(i)) : E(π(i))]. Equivalently the factor for a selected index n
/// is CC(n) when n−1 is also selected, E(n) otherwise.
inline LogProb paper_enumerate(std::size_t N, std::size_t m, const FactorTables& t, Mode mode) {
  std::vector<std::size_t> pick(m);
  for (std::size_t i = 0; i < m; ++i) pick[i] = 3 + i;
  LogProb total = LogProb::zero(mode);
  while (true) {
    LogProb v = t.event[pick[0]];
    for (std::size_t i = 1; i < m; ++i) {
      v = v * (pick[i - 1] == pick[i] - 1 ? t.consecutive[pick[i]] : t.event[pick[i]]);
    }
    total = total + v;
    // Advance to the next combination; stop after the last one.
    std::size_t i = m;
    while (i > 0 && pick[i - 1] == N - (m - i)) --i;
    if (i == 0) break;
    ++pick[i - 1];
    for (std::size_t j = i; j < m; ++j) pick[j] = pick[j - 1] + 1;
  }
  return total;
}

/// The same sum rewritten as a sweep over n = 3..N with state
/// (count so far, whether n itself was selected): selecting n multiplies
/// by CC(n) when n−1 was selected and by E(n) otherwise. States with
/// count > m_cap are never consulted by lower counts, so the sweep may
/// truncate at m_cap.
inline std::vector<LogProb> paper_dp_all(std::size_t N, const FactorTables& t, Mode mode,
                                         std::size_t m_cap) {
  std::size_t m_max = std::min(m_cap, N - 2);
  std::vector<LogProb> not_sel(m_max + 1, LogProb::zero(mode));  // last index unselected
  std::vector<LogProb> sel(m_max + 1, LogProb::zero(mode));      // last index selected
  not_sel[0] = LogProb::one(mode);
  for (std::size_t n = 3; n <= N; ++n) {
    std::vector<LogProb> next_not(m_max + 1, LogProb::zero(mode));
    std::vector<LogProb> next_sel(m_max + 1, LogProb::zero(mode));
    for (std::size_t j = 0; j <= m_max; ++j) {
      next_not[j] = not_sel[j] + sel[j];
      if (j < m_max) {
        LogProb gain = not_sel[j] * t.event[n];
        if (n >= 4) gain = gain + sel[j] * t.consecutive[n];
        next_sel[j + 1] = next_sel[j + 1] + gain;
      }
    }
    not_sel = std::move(next_not);
    sel = std::move(next_sel);
  }
  std::vector<LogProb> out(m_max + 1, LogProb::zero(mode));
  for (std::size_t j = 0; j <= m_max; ++j) out[j] = not_sel[j] + sel[j];
  return out;
}

}  // namespace detail

/// The reference formula for P(c_{N,ε} = m), m ≥ 1: a sum over ordered
/// m-subsets of {3,…,N} of event/conditional factor chains. The formula
/// is implemented verbatim and is not guaranteed to normalize; values
/// above 1 occur for large ε. Both strategies compute the identical sum.
inline LogProb counter_distribution_paper(std::size_t N, double epsilon, std::size_t m,
                                          PaperStrategy strategy,
                                          Mode mode = Mode::kLogDouble) {
  if (N < 3) throw DomainError("counter_distribution_paper requires N >= 3");
  if (!(epsilon > 0.0)) throw DomainError("counter_distribution_paper requires epsilon > 0");
  if (m < 1) throw DomainError("counter_distribution_paper requires m >= 1; the m = 0 branch is counter_zero_probability");
  if (m > N - 2) return LogProb::zero(mode);
  if (strategy == PaperStrategy::kEnumerateSubsets) {
    if (num::log_binomial(N - 2, m) > std::log(1e6)) {
      throw CapacityError("enumerate-subsets guard: C(N-2, m) exceeds 10^6 subsets; use the dp strategy");
    }
    return detail::paper_enumerate(N, m, detail::factor_tables(N, epsilon, mode), mode);
  }
  if (N > 20000) throw CapacityError("dp strategy capped at N = 20000");
  return detail::paper_dp_all(N, detail::factor_tables(N, epsilon, mode), mode, m)[m];
}

/// How a CounterDistribution's values were produced.
enum class Method {
  kPaperFormula,
  kExactEnumeration,
  kDpAccelerated,
};

/// A table of P(c_{N,ε} = m) values for a range of m.
struct CounterDistribution {
  std::size_t horizon = 0;
  double epsilon = 0.0;
  Method method = Method::kPaperFormula;
  std::map<std::size_t, LogProb> values;
};

/// All values of the reference formula for 1 ≤ m ≤ m_max in a single dp
/// sweep; used by callers that want a table without re-running the
/// recursion per m.
inline CounterDistribution counter_distribution_paper_table(std::size_t N, double epsilon,
                                                            std::size_t m_max,
                                                            Mode mode = Mode::kLogDouble) {
  if (N < 3) throw DomainError("counter_distribution_paper_table requires N >= 3");
  if (!(epsilon > 0.0)) {
    throw DomainError("counter_distribution_paper_table requires epsilon > 0");
  }
  if (N > 20000) throw CapacityError("dp strategy capped at N = 20000");
  auto all = detail::paper_dp_all(N, detail::factor_tables(N, epsilon, mode), mode, m_max);
  CounterDistribution d;
  d.horizon = N;
  d.epsilon = epsilon;
  d.method = Method::kDpAccelerated;
  for (std::size_t m = 1; m < all.size(); ++m) d.values[m] = all[m];
  return d;
}

/// Ground truth for the counter statistic: enumerate all 2^N equiprobable
/// sign paths, run the counter on each, and tabulate the exact
/// distribution of c_{N,ε}. Independent of every formula above.
inline CounterDistribution counter_distribution_exact(std::size_t N, double epsilon) {
  if (N < 3) throw DomainError("counter_distribution_exact requires N >= 3");
  if (N > 20) throw CapacityError("counter_distribution_exact enumerates 2^N paths; capped at N = 20");
  if (!(epsilon > 0.0)) throw DomainError("counter_distribution_exact requires epsilon > 0");
  std::vector<double> phi_table(N + 1, 0.0);
  for (std::size_t n = 3; n <= N; ++n) phi_table[n] = walk::phi(n);
  double lo = 1.0 - epsilon;
  double hi = 1.0 + epsilon;
  std::vector<unsigned long> counts(N + 1, 0);
  unsigned long paths = 1ul << N;
  for (unsigned long u = 0; u < paths; ++u) {
    long long s = 0;
    std::size_t c = 0;
    for (std::size_t i = 0; i < N; ++i) {
      s += ((u >> i) & 1ul) ? 1 : -1;
      std::size_t n = i + 1;
      if (n < 3) continue;
      double ratio = static_cast<double>(s) / phi_table[n];
      if (ratio >= lo && ratio <= hi) ++c;
    }
    ++counts[c];
  }
  CounterDistribution d;
  d.horizon = N;
  d.epsilon = epsilon;
  d.method = Method::kExactEnumeration;
  for (std::size_t m = 0; m <= N; ++m) {
    mpq_class q(counts[m], paths);
    q.canonicalize();
    d.values[m] = LogProb::from_exact(q);
  }
  return d;
}

/// A = I − √p·√pᵀ for a probability vector p; symmetric and idempotent
/// because √pᵀ√p = Σp = 1.
inline Matrix pearson_projector(const std::vector<double>& p) {
  if (p.empty()) throw DomainError("pearson_projector requires a non-empty vector");
  double total = 0.0;
  for (double v : p) {
    if (!(v >= 0.0)) throw DomainError("pearson_projector requires non-negative entries");
    total += v;
  }
  if (std::abs(total - 1.0) > 1e-12) {
    throw DomainError("pearson_projector requires the entries to sum to 1 within 1e-12");
  }
  std::size_t M = p.size();
  std::vector<double> root(M);
  for (std::size_t i = 0; i < M; ++i) root[i] = std::sqrt(p[i]);
  Matrix a(M, M, 0.0);
  for (std::size_t i = 0; i < M; ++i) {
    for (std::size_t j = 0; j < M; ++j) {
      a(i, j) = (i == j ? 1.0 : 0.0) - root[i] * root[j];
    }
  }
  return a;
}

}  // namespace ilrt::dist

#endif  // ILRT_DIST_HPP_
