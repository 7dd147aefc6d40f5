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
// Observable statistics of a ±1 sequence: partial sums, the iterated-
// logarithm ratio, the band-hit counter, the sample mean, and block-
// frequency (m-normality) deviations.

#ifndef ILRT_WALK_HPP_
#define ILRT_WALK_HPP_

#include <gmpxx.h>

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "ilrt/bitio.hpp"
#include "ilrt/errors.hpp"

namespace ilrt::walk {

/// φ(n) = √(2n·ln ln n), the iterated-logarithm envelope. Real only for
/// n ≥ 3 (ln ln n < 0 below that), hence the domain restriction.
inline double phi(std::size_t n) {
  if (n <= 2) throw DomainError("phi(n) requires n >= 3");
  double dn = static_cast<double>(n);
  return std::sqrt(2.0 * dn * std::log(std::log(dn)));
}

/// The running-sum trajectory s_1..s_N of a ±1 sequence.
class WalkTrace {
 public:
  explicit WalkTrace(std::vector<long long> partial_sums) : sums_(std::move(partial_sums)) {
    if (sums_.empty()) throw DomainError("WalkTrace requires at least one step");
    if (sums_[0] != 1 && sums_[0] != -1) throw DomainError("WalkTrace must start at ±1");
    for (std::size_t i = 1; i < sums_.size(); ++i) {
      long long step = sums_[i] - sums_[i - 1];
      if (step != 1 && step != -1) throw DomainError("WalkTrace steps must be ±1");
    }
  }

  std::size_t length() const { return sums_.size(); }
  /// s_n, 1-based.
  long long sum(std::size_t n) const { return sums_[n - 1]; }
  const std::vector<long long>& sums() const { return sums_; }

 private:
  std::vector<long long> sums_;
};

/// Prefix sums s_k = Σ_{i≤k} x_i.
inline WalkTrace walk_sums(const bitio::SignSequence& x) {
  if (x.empty()) throw DomainError("walk_sums requires a non-empty sequence");
  std::vector<long long> sums;
  sums.reserve(x.size());
  long long s = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    s += x[i];
    sums.push_back(s);
  }
  return WalkTrace(std::move(sums));
}

/// s_n / φ(n), defined from n = 3 on.
inline double lil_ratio(const WalkTrace& trace, std::size_t n) {
  if (n < 3) throw DomainError("lil_ratio requires n >= 3");
  if (n > trace.length()) throw DomainError("lil_ratio index beyond trace length");
  return static_cast<double>(trace.sum(n)) / phi(n);
}

/// Observed value of the band-hit counter for one sequence.
struct CounterResult {
  std::size_t counter = 0;
  double epsilon = 0.0;
  std::size_t start_index = 3;
  std::size_t horizon = 0;
  std::vector<std::size_t> hit_indices;  // ascending
};

/// Count the n in [start_index, N] whose ratio s_n/φ(n) falls in the
/// closed band [1−ε, 1+ε]. Comparisons are plain IEEE double comparisons
/// on the computed ratio; there is no tolerance at the endpoints.
inline CounterResult counter(const bitio::SignSequence& x, double epsilon,
                             std::size_t start_index = 3) {
  if (!(epsilon > 0.0)) throw DomainError("counter requires epsilon > 0");
  if (start_index < 3) throw DomainError("counter requires start_index >= 3");
  if (x.size() < start_index) throw DomainError("sequence shorter than start_index");
  CounterResult result;
  result.epsilon = epsilon;
  result.start_index = start_index;
  result.horizon = x.size();
  double lo = 1.0 - epsilon;
  double hi = 1.0 + epsilon;
  long long s = 0;
  for (std::size_t n = 1; n <= x.size(); ++n) {
    s += x[n - 1];
    if (n < start_index) continue;
    double ratio = static_cast<double>(s) / phi(n);
    if (ratio >= lo && ratio <= hi) result.hit_indices.push_back(n);
  }
  result.counter = result.hit_indices.size();
  return result;
}

/// s_n / n.
inline double sample_mean(const bitio::SignSequence& x, std::size_t n) {
  if (n < 1 || n > x.size()) throw DomainError("sample_mean index out of range");
  long long s = 0;
  for (std::size_t i = 0; i < n; ++i) s += x[i];
  return static_cast<double>(s) / static_cast<double>(n);
}

namespace detail {

inline std::vector<unsigned long> block_counts(const bitio::BitString& b, std::size_t m) {
  if (m < 1) throw DomainError("block length m must be >= 1");
  if (m > 24) throw CapacityError("block length m > 24 would enumerate 2^m > 16M blocks");
  if (b.size() < m) throw DomainError("bit string shorter than block length");
  std::size_t nblocks = b.size() / m;
  std::vector<unsigned long> counts(static_cast<std::size_t>(1) << m, 0);
  for (std::size_t j = 0; j < nblocks; ++j) {
    std::size_t code = 0;
    for (std::size_t i = 0; i < m; ++i) code = (code << 1) | b[j * m + i];
    ++counts[code];
  }
  return counts;
}

inline std::string block_name(std::size_t code, std::size_t m) {
  std::string s(m, '0');
  for (std::size_t i = 0; i < m; ++i) {
    if ((code >> (m - 1 - i)) & 1u) s[i] = '1';
  }
  return s;
}

}  // namespace detail

/// Per-block deviation of the disjoint-consecutive-block frequency from
/// the ideal 2^{−m}: count(a)/⌊n/m⌋ − 2^{−m}, for every length-m block a.
inline std::map<std::string, double> borel_deviation(const bitio::BitString& b, std::size_t m) {
  auto counts = detail::block_counts(b, m);
  double nblocks = static_cast<double>(b.size() / m);
  double ideal = 1.0 / static_cast<double>(static_cast<std::size_t>(1) << m);
  std::map<std::string, double> dev;
  for (std::size_t code = 0; code < counts.size(); ++code) {
    dev[detail::block_name(code, m)] =
        static_cast<double>(counts[code]) / nblocks - ideal;
  }
  return dev;
}

/// Exact-rational variant; the deviations over all 2^m blocks sum to
/// exactly zero by construction.
inline std::map<std::string, mpq_class> borel_deviation_exact(const bitio::BitString& b,
                                                              std::size_t m) {
  auto counts = detail::block_counts(b, m);
  unsigned long nblocks = static_cast<unsigned long>(b.size() / m);
  mpq_class ideal(1, static_cast<unsigned long>(1) << m);
  std::map<std::string, mpq_class> dev;
  for (std::size_t code = 0; code < counts.size(); ++code) {
    mpq_class freq(counts[code], nblocks);
    freq.canonicalize();
    dev[detail::block_name(code, m)] = freq - ideal;
  }
  return dev;
}

}  // namespace ilrt::walk

#endif  // ILRT_WALK_HPP_
