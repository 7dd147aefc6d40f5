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
// Hypothesis-testing layer: frequency tables, the two-event binomial
// reduction, chi-squared statistics, the discrete cumulative law of the
// binomial-reduced statistic, its quantile, the accept/reject decision,
// the Pearson applicability rule of thumb, and the chi-squared density.
//
// The model probability p of the zero-counter event can be as small as
// 10^-33 (and far smaller at long horizons), so every statistic here is
// computed through natural logs; linear doubles appear only where the
// magnitudes are guaranteed representable, and a statistic that
// overflows the double range surfaces as +infinity with its log kept
// finite alongside.

#ifndef ILRT_STATTEST_HPP_
#define ILRT_STATTEST_HPP_

#include <cmath>
#include <cstddef>
#include <map>
#include <numbers>
#include <vector>

#include "ilrt/errors.hpp"
#include "ilrt/logprob.hpp"

namespace ilrt::stattest {

using num::LogProb;

/// Observed counts f_m with their total n.
struct FrequencyTable {
  std::map<std::size_t, std::size_t> counts;
  std::size_t total = 0;

  static FrequencyTable from_counts(std::map<std::size_t, std::size_t> counts) {
    FrequencyTable t;
    t.counts = std::move(counts);
    for (const auto& [m, f] : t.counts) t.total += f;
    return t;
  }
};

/// The two-event reduction: event S1 = {counter = 0} with probability p,
/// S2 its complement; n repetitions, f_tilde observed occurrences of S1.
struct BinomialModel {
  LogProb p;
  std::size_t n = 0;
  std::size_t f_tilde = 0;

  BinomialModel(LogProb p_in, std::size_t n_in, std::size_t f_tilde_in)
      : p(std::move(p_in)), n(n_in), f_tilde(f_tilde_in) {
    if (p.log() > 0.0) throw DomainError("BinomialModel requires p <= 1");
    if (f_tilde > n) throw DomainError("BinomialModel requires f_tilde <= n");
  }
};

enum class Verdict { kAccept, kReject };

/// The decision record: accept iff statistic <= quantile.
struct TestDecision {
  double statistic = 0.0;
  double quantile = 0.0;
  double alpha = 0.0;
  Verdict verdict = Verdict::kAccept;
};

namespace detail {

inline void require_nondegenerate(const BinomialModel& model) {
  if (model.p.is_zero() || model.p.log() >= 0.0) {
    throw DomainError("binomial chi-squared requires 0 < p < 1");
  }
}

/// ln of (f − np)² / (np(1−p)) evaluated without underflow in np;
/// −inf when f equals np exactly.
inline double log_stat_binomial(const BinomialModel& model, double f) {
  double log_np = std::log(static_cast<double>(model.n)) + model.p.log();
  double np = std::exp(log_np);  // <= n, so never overflows
  double log_abs_dev = (f == 0.0) ? log_np : std::log(std::abs(f - np));
  double log_var = log_np + model.p.complement().log();
  return 2.0 * log_abs_dev - log_var;
}

/// ln C(n,f) + f·ln p + (n−f)·ln(1−p).
inline double log_binomial_mass(const BinomialModel& model, std::size_t f) {
  double lp = model.p.log();
  double lq = model.p.complement().log();
  return num::log_binomial(model.n, f) + static_cast<double>(f) * lp +
         static_cast<double>(model.n - f) * lq;
}

}  // namespace detail

/// (f̃ − np)² / (np(1−p)). May return +infinity when the value exceeds
/// the double range; pair with chi2_stat_binomial_log for reporting.
inline double chi2_stat_binomial(const BinomialModel& model) {
  detail::require_nondegenerate(model);
  return std::exp(detail::log_stat_binomial(model, static_cast<double>(model.f_tilde)));
}

/// Natural log of the same statistic; finite whenever the statistic is
/// nonzero, even where the linear value overflows.
inline double chi2_stat_binomial_log(const BinomialModel& model) {
  detail::require_nondegenerate(model);
  return detail::log_stat_binomial(model, static_cast<double>(model.f_tilde));
}

/// Σ_m (f_m − n·p_m)² / (n·p_m) over the support of p. Every observed
/// cell must carry model probability.
inline double chi2_stat_multinomial(const FrequencyTable& f,
                                    const std::map<std::size_t, LogProb>& p) {
  for (const auto& [m, fm] : f.counts) {
    if (fm == 0) continue;
    auto it = p.find(m);
    if (it == p.end() || it->second.is_zero()) {
      throw DomainError("observed cell " + std::to_string(m) + " has zero model probability");
    }
  }
  double n = static_cast<double>(f.total);
  double stat = 0.0;
  for (const auto& [m, pm] : p) {
    if (pm.is_zero()) continue;
    double np = std::exp(std::log(n) + pm.log());
    auto it = f.counts.find(m);
    double fm = it == f.counts.end() ? 0.0 : static_cast<double>(it->second);
    double dev = fm - np;
    stat += dev * dev / np;
  }
  return stat;
}

/// P(statistic ≤ x) for the binomial-reduced statistic:
/// Σ_{f=0}^{n} θ[x − (f−np)²/(np(1−p))] · C(n,f) p^f (1−p)^{n−f}.
/// The θ gate is decided by log-magnitude comparison so that statistics
/// beyond the double range still order correctly.
inline LogProb chi2_binomial_cumulative(double x, const BinomialModel& model) {
  detail::require_nondegenerate(model);
  if (std::isnan(x)) return LogProb::zero();
  double log_x = x > 0.0 ? std::log(x) : (x == 0.0 ? num::kNegInf : 0.0);
  num::KahanSum sum;
  for (std::size_t f = 0; f <= model.n; ++f) {
    double ls = detail::log_stat_binomial(model, static_cast<double>(f));
    bool included = x >= 0.0 && ls <= log_x;
    if (included) sum.add(std::exp(detail::log_binomial_mass(model, f)));
  }
  return LogProb::from_linear(sum.value());
}

/// Smallest f̃ in {0,…,n} whose cumulative reaches alpha — the
/// first-passing-index reading of the quantile.
inline std::size_t chi2_quantile(double alpha, const BinomialModel& model) {
  if (!(alpha > 0.0) || !(alpha < 1.0)) throw DomainError("chi2_quantile requires 0 < alpha < 1");
  for (std::size_t f = 0; f <= model.n; ++f) {
    if (chi2_binomial_cumulative(static_cast<double>(f), model).linear() >= alpha) return f;
  }
  throw NoQuantileError("no f in {0..n} reaches the requested alpha");
}

/// Accept iff statistic ≤ quantile (closed comparison on the accept side).
inline TestDecision decide(double statistic, double quantile, double alpha) {
  TestDecision d;
  d.statistic = statistic;
  d.quantile = quantile;
  d.alpha = alpha;
  d.verdict = statistic <= quantile ? Verdict::kAccept : Verdict::kReject;
  return d;
}

/// Outcome of the n·p_m ≥ 10 rule of thumb.
struct Applicability {
  bool applicable = true;
  std::vector<std::size_t> violating_cells;
};

/// The Pearson rule of thumb: the asymptotic test is trusted only when
/// every cell in the support has expected count n·p_m ≥ 10.
inline Applicability pearson_applicability(std::size_t n, const std::map<std::size_t, LogProb>& p) {
  Applicability a;
  for (const auto& [m, pm] : p) {
    if (pm.is_zero()) continue;
    double expected = std::exp(std::log(static_cast<double>(n)) + pm.log());
    if (!(expected >= 10.0)) {
      a.applicable = false;
      a.violating_cells.push_back(m);
    }
  }
  return a;
}

/// ρ_k(x) = x^{k/2−1} e^{−x/2} / (2^{k/2} Γ(k/2)) for x > 0, else 0.
inline double chi2_density(std::size_t k, double x) {
  if (k < 1) throw DomainError("chi2_density requires k >= 1");
  if (!(x > 0.0)) return 0.0;
  double kh = static_cast<double>(k) / 2.0;
  return std::exp((kh - 1.0) * std::log(x) - x / 2.0 - kh * std::numbers::ln2 -
                  std::lgamma(kh));
}

/// log[ n!/(Π f_m!) · Π p_m^{f_m} ], the joint multinomial mass of the
/// observed table under the model; requires Σ f_m = n exactly.
inline LogProb multinomial_joint_logmass(const FrequencyTable& f,
                                         const std::map<std::size_t, LogProb>& p) {
  std::size_t sum = 0;
  for (const auto& [m, fm] : f.counts) sum += fm;
  if (sum != f.total) throw DomainError("frequency table total does not match its counts");
  double log_mass = num::log_factorial(f.total);
  for (const auto& [m, fm] : f.counts) {
    if (fm == 0) continue;  // p_m^0 = 1 even for zero-probability cells
    auto it = p.find(m);
    if (it == p.end() || it->second.is_zero()) {
      throw DomainError("observed cell " + std::to_string(m) + " has zero model probability");
    }
    log_mass -= num::log_factorial(fm);
    log_mass += static_cast<double>(fm) * it->second.log();
  }
  return LogProb::from_log(log_mass);
}

}  // namespace ilrt::stattest

#endif  // ILRT_STATTEST_HPP_
