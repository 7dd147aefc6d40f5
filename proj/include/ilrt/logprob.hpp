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
// Numeric backbone: probabilities carried in natural-log space with an
// optional exact-rational backend, plus the supporting accumulation
// helpers (compensated linear sums, log-sum-exp, cached log-factorials).

#ifndef ILRT_LOGPROB_HPP_
#define ILRT_LOGPROB_HPP_

#include <gmpxx.h>

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <numbers>
#include <optional>
#include <utility>
#include <vector>

#include "ilrt/errors.hpp"

namespace ilrt::num {

inline constexpr double kNegInf = -std::numeric_limits<double>::infinity();

/// Numeric backend selector. Log-double is the workhorse; exact-rational
/// is the correctness anchor for moderate sizes.
enum class Mode {
  kLogDouble,
  kExactRational,
};

/// log(exp(a) + exp(b)) without overflow; -inf acts as the additive zero.
inline double log_sum_exp(double a, double b) {
  if (a == kNegInf) return b;
  if (b == kNegInf) return a;
  double hi = std::max(a, b);
  double lo = std::min(a, b);
  return hi + std::log1p(std::exp(lo - hi));
}

/// Kahan-compensated accumulator for sums of many small positive terms.
/// Deterministic for a fixed insertion order.
class KahanSum {
 public:
  void add(double x) {
    double y = x - comp_;
    double t = sum_ + y;
    comp_ = (t - sum_) - y;
    sum_ = t;
  }
  double value() const { return sum_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

/// ln(n!) from a lazily grown per-thread table of lgamma values.
inline double log_factorial(std::size_t n) {
  thread_local std::vector<double> table;
  if (n >= table.size()) {
    std::size_t target = std::max<std::size_t>(n + 1, table.size() * 2);
    table.reserve(target);
    for (std::size_t i = table.size(); i < target; ++i) {
      table.push_back(std::lgamma(static_cast<double>(i) + 1.0));
    }
  }
  return table[n];
}

/// ln C(n, k); -inf when k is outside [0, n].
inline double log_binomial(std::size_t n, std::size_t k) {
  if (k > n) return kNegInf;
  return log_factorial(n) - log_factorial(k) - log_factorial(n - k);
}

/// Natural log of a positive big integer (−inf for zero).
inline double log_mpz(const mpz_class& z) {
  if (z == 0) return kNegInf;
  if (z < 0) throw DomainError("log of a negative integer");
  signed long exp2 = 0;
  double mant = mpz_get_d_2exp(&exp2, z.get_mpz_t());
  return std::log(mant) + static_cast<double>(exp2) * std::log(2.0);
}

/// Natural log of a non-negative rational (−inf for zero).
inline double log_mpq(const mpq_class& q) {
  if (q == 0) return kNegInf;
  if (q < 0) throw DomainError("log of a negative rational");
  return log_mpz(q.get_num()) - log_mpz(q.get_den());
}

/// A non-negative quantity carried as its natural log, optionally backed
/// by an exact rational. Intended for probabilities, but the reference
/// counter-distribution formula is not guaranteed to normalize, so values
/// above 1 (positive logs) are representable; layers that genuinely
/// require a probability enforce the [0,1] range themselves.
class LogProb {
 public:
  /// Default-constructed value is zero (log −∞).
  LogProb() = default;

  static LogProb from_log(double log_value) {
    if (std::isnan(log_value)) throw DomainError("LogProb from NaN log value");
    LogProb p;
    p.log_ = log_value;
    return p;
  }

  static LogProb from_linear(double value) {
    if (!(value >= 0.0)) throw DomainError("LogProb requires a non-negative value");
    return from_log(std::log(value));
  }

  static LogProb from_exact(mpq_class value) {
    if (value < 0) throw DomainError("LogProb requires a non-negative value");
    LogProb p;
    p.log_ = log_mpq(value);
    p.exact_ = std::move(value);
    return p;
  }

  static LogProb zero(Mode mode = Mode::kLogDouble) {
    return mode == Mode::kExactRational ? from_exact(mpq_class(0)) : from_log(kNegInf);
  }
  static LogProb one(Mode mode = Mode::kLogDouble) {
    return mode == Mode::kExactRational ? from_exact(mpq_class(1)) : from_log(0.0);
  }

  /// Natural log; −∞ encodes zero.
  double log() const { return log_; }
  /// Base-10 log; −∞ encodes zero.
  double log10() const { return log_ / std::numbers::ln10; }
  /// Linear value; may underflow to 0 in log-double mode.
  double linear() const { return exact_ ? mpq_get_d(exact_->get_mpq_t()) : std::exp(log_); }

  bool is_exact() const { return exact_.has_value(); }
  const mpq_class& exact() const {
    if (!exact_) throw Error("LogProb holds no exact value");
    return *exact_;
  }

  bool is_zero() const { return log_ == kNegInf; }

  /// 1 − p; requires p ≤ 1.
  LogProb complement() const {
    if (exact_) {
      if (*exact_ > 1) throw DomainError("complement of a value above 1");
      return from_exact(mpq_class(1) - *exact_);
    }
    if (log_ > 0.0) throw DomainError("complement of a value above 1");
    return from_log(std::log(-std::expm1(log_)));
  }

  friend LogProb operator*(const LogProb& a, const LogProb& b) {
    if (a.exact_ && b.exact_) return from_exact(mpq_class(*a.exact_ * *b.exact_));
    // -inf plus a finite log is well-defined; -inf + -inf likewise.
    if (a.log_ == kNegInf || b.log_ == kNegInf) return from_log(kNegInf);
    return from_log(a.log_ + b.log_);
  }

  friend LogProb operator+(const LogProb& a, const LogProb& b) {
    if (a.exact_ && b.exact_) return from_exact(mpq_class(*a.exact_ + *b.exact_));
    return from_log(log_sum_exp(a.log_, b.log_));
  }

 private:
  double log_ = kNegInf;
  std::optional<mpq_class> exact_;
};

}  // namespace ilrt::num

#endif  // ILRT_LOGPROB_HPP_
