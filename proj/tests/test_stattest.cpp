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

#include <cmath>
#include <limits>
#include <map>
#include <random>

#include <catch2/catch_amalgamated.hpp>

#include "ilrt/dist.hpp"
#include "ilrt/stattest.hpp"

using namespace ilrt::stattest;
using ilrt::num::LogProb;
using ilrt::num::Mode;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {

BinomialModel fair(std::size_t n, std::size_t f) {
  return BinomialModel(LogProb::from_linear(0.5), n, f);
}

}  // namespace

TEST_CASE("chi2_stat_binomial by hand arithmetic") {
  // The statistic is evaluated in log space for underflow robustness, so
  // hand values are matched to near machine precision, not bit-exactly.
  // n=100, p=1/2, f=60: (60-50)^2 / (100 * 1/2 * 1/2) = 4.
  CHECK_THAT(chi2_stat_binomial(fair(100, 60)), WithinRel(4.0, 1e-12));
  // n=4, p=1/2, f=0: (0-2)^2 / 1 = 4.
  CHECK_THAT(chi2_stat_binomial(fair(4, 0)), WithinRel(4.0, 1e-12));
  // f at the mean gives a (numerically) zero statistic.
  CHECK_THAT(chi2_stat_binomial(fair(100, 50)), WithinAbs(0.0, 1e-24));
}

TEST_CASE("chi2_stat_binomial log form agrees with the direct form") {
  BinomialModel m(LogProb::from_linear(0.3), 50, 20);
  CHECK_THAT(std::exp(chi2_stat_binomial_log(m)), WithinRel(chi2_stat_binomial(m), 1e-13));
}

TEST_CASE("chi2 statistic survives astronomically small p") {
  LogProb p = ilrt::dist::counter_zero_probability(100, 0.1);
  BinomialModel m(p, 100, 44);
  double stat = chi2_stat_binomial(m);
  CHECK(std::isfinite(stat));
  CHECK(stat >= 1e34);
  CHECK_THAT(chi2_stat_binomial_log(m) / std::numbers::ln10, WithinAbs(34.1194, 1e-3));
}

TEST_CASE("chi2_stat_binomial rejects degenerate models") {
  CHECK_THROWS_AS(chi2_stat_binomial(BinomialModel(LogProb::zero(Mode::kLogDouble), 10, 5)),
                  ilrt::DomainError);
  CHECK_THROWS_AS(chi2_stat_binomial(BinomialModel(LogProb::from_linear(1.0), 10, 5)),
                  ilrt::DomainError);
}

TEST_CASE("two-cell multinomial statistic collapses to the binomial one") {
  // (f-np)^2/np + ((n-f)-n(1-p))^2/(n(1-p)) == (f-np)^2/(np(1-p)).
  std::mt19937 rng(404);
  std::uniform_real_distribution<double> unif(0.05, 0.95);
  std::uniform_int_distribution<std::size_t> ns(2, 200);
  for (int trial = 0; trial < 50; ++trial) {
    std::size_t n = ns(rng);
    std::size_t f = std::uniform_int_distribution<std::size_t>(0, n)(rng);
    double p = unif(rng);
    FrequencyTable table = FrequencyTable::from_counts({{0, f}, {1, n - f}});
    std::map<std::size_t, LogProb> cells = {{0, LogProb::from_linear(p)},
                                            {1, LogProb::from_linear(1.0 - p)}};
    double multi = chi2_stat_multinomial(table, cells);
    double bino = chi2_stat_binomial(BinomialModel(LogProb::from_linear(p), n, f));
    if (bino == 0.0) {
      REQUIRE_THAT(multi, WithinAbs(0.0, 1e-12));
    } else {
      REQUIRE_THAT(multi, WithinRel(bino, 1e-11));
    }
  }
}

TEST_CASE("chi2_stat_multinomial rejects observations in zero-probability cells") {
  FrequencyTable table = FrequencyTable::from_counts({{0, 1}, {1, 3}});
  std::map<std::size_t, LogProb> cells = {{1, LogProb::from_linear(1.0)}};
  CHECK_THROWS_AS(chi2_stat_multinomial(table, cells), ilrt::DomainError);
}

TEST_CASE("chi2_binomial_cumulative gathers mass in order of the statistic") {
  // n=2, p=1/2: stat(0)=2, stat(1)=0, stat(2)=2.
  BinomialModel m = fair(2, 0);
  CHECK_THAT(chi2_binomial_cumulative(0.0, m).linear(), WithinRel(0.5, 1e-13));
  CHECK_THAT(chi2_binomial_cumulative(1.9, m).linear(), WithinRel(0.5, 1e-13));
  CHECK_THAT(chi2_binomial_cumulative(2.0, m).linear(), WithinRel(1.0, 1e-13));
  CHECK(chi2_binomial_cumulative(-1.0, m).is_zero());
  CHECK(chi2_binomial_cumulative(std::numeric_limits<double>::quiet_NaN(), m).is_zero());
}

TEST_CASE("chi2_binomial_cumulative is monotone in its threshold") {
  // The largest statistic in this model is at f = 25: about 42.6, so
  // the grid must pass it before the cumulative reaches 1.
  BinomialModel m(LogProb::from_linear(0.37), 25, 10);
  double prev = 0.0;
  for (double x = 0.0; x <= 45.0; x += 0.5) {
    double cur = chi2_binomial_cumulative(x, m).linear();
    REQUIRE(cur >= prev);
    prev = cur;
  }
  CHECK_THAT(prev, WithinRel(1.0, 1e-12));
}

TEST_CASE("chi2_quantile on the experiment model is the integer 1") {
  LogProb p = ilrt::dist::counter_zero_probability(100, 0.1);
  BinomialModel m(p, 100, 44);
  CHECK(chi2_quantile(1.0 - 1e-10, m) == 1);
  // The candidate threshold is the raw integer f: at f = 1 the mass with
  // stat <= 1 is all of f = 0, which is 1 - O(1e-31).
  CHECK_THAT(chi2_binomial_cumulative(1.0, m).linear(), WithinRel(1.0, 1e-12));
}

TEST_CASE("chi2_quantile small cases by hand") {
  // n=2, p=1/2, alpha=1/2: cumulative(0) = P(f=1) = 1/2 >= 1/2 already.
  CHECK(chi2_quantile(0.5, fair(2, 0)) == 0);
  CHECK(chi2_quantile(0.6, fair(2, 0)) == 2);
}

TEST_CASE("chi2_quantile minimality on random models") {
  std::mt19937 rng(505);
  std::uniform_real_distribution<double> ps(0.05, 0.95);
  std::uniform_real_distribution<double> as(0.05, 0.95);
  std::uniform_int_distribution<std::size_t> ns(1, 30);
  for (int trial = 0; trial < 200; ++trial) {
    std::size_t n = ns(rng);
    BinomialModel m(LogProb::from_linear(ps(rng)), n, 0);
    double alpha = as(rng);
    std::size_t q;
    try {
      q = chi2_quantile(alpha, m);
    } catch (const ilrt::NoQuantileError&) {
      // Legitimate when even the full-support threshold n excludes
      // high-statistic outcomes carrying more than 1 - alpha mass.
      REQUIRE(chi2_binomial_cumulative(static_cast<double>(n), m).linear() < alpha);
      continue;
    }
    REQUIRE(chi2_binomial_cumulative(static_cast<double>(q), m).linear() >= alpha);
    if (q > 0) {
      REQUIRE(chi2_binomial_cumulative(static_cast<double>(q) - 1.0, m).linear() < alpha);
    }
  }
}

TEST_CASE("chi2_quantile can be unattainable") {
  // n=1, p=0.9: stat(0)=9, stat(1)=1/9. cumulative(1) = 0.9 < 0.95.
  CHECK_THROWS_AS(chi2_quantile(0.95, BinomialModel(LogProb::from_linear(0.9), 1, 0)),
                  ilrt::NoQuantileError);
  CHECK_THROWS_AS(chi2_quantile(1.5, fair(2, 0)), ilrt::DomainError);
}

TEST_CASE("decide accepts exactly when the statistic is within the quantile") {
  CHECK(decide(1.0, 1.0, 0.99).verdict == Verdict::kAccept);  // boundary is acceptance
  CHECK(decide(0.0, 1.0, 0.99).verdict == Verdict::kAccept);
  CHECK(decide(1.0 + 1e-9, 1.0, 0.99).verdict == Verdict::kReject);
  CHECK(decide(1e34, 1.0, 0.99).verdict == Verdict::kReject);
}

TEST_CASE("pearson_applicability flags cells with expected count below 10") {
  std::map<std::size_t, LogProb> balanced = {{0, LogProb::from_linear(0.5)},
                                             {1, LogProb::from_linear(0.5)}};
  CHECK(pearson_applicability(100, balanced).applicable);

  std::map<std::size_t, LogProb> skewed = {{0, LogProb::from_linear(0.05)},
                                           {1, LogProb::from_linear(0.95)}};
  auto a = pearson_applicability(100, skewed);
  CHECK_FALSE(a.applicable);
  CHECK(a.violating_cells == std::vector<std::size_t>{0});

  std::map<std::size_t, LogProb> with_zero = {{0, LogProb::zero(Mode::kLogDouble)},
                                              {1, LogProb::from_linear(1.0)}};
  CHECK(pearson_applicability(100, with_zero).applicable);  // zero cells are outside support
}

TEST_CASE("chi2_density closed-form checks") {
  CHECK(chi2_density(2, 0.0) == 0.0);
  CHECK(chi2_density(2, -1.0) == 0.0);
  // k=2 is Exp(1/2): density(x) = e^{-x/2}/2, so the x->0+ limit is 1/2.
  CHECK_THAT(chi2_density(2, 1e-12), WithinRel(0.5, 1e-9));
  CHECK_THAT(chi2_density(2, 2.0), WithinRel(std::exp(-1.0) / 2.0, 1e-12));
  CHECK_THROWS_AS(chi2_density(0, 1.0), ilrt::DomainError);
}

TEST_CASE("chi2_density integrates to one") {
  // k=1 has an integrable singularity at 0; substitute x = t^2 so the
  // integrand becomes smooth, then apply the trapezoid rule. Start just
  // above 0: the density is defined as 0 at x = 0 exactly, which is not
  // the k=1 integrand's limit, and the omitted sliver is below 1e-9.
  for (std::size_t k : {1u, 2u, 3u}) {
    const double t0 = 1e-9;
    const double T = 9.0;
    const double h = 1e-4;
    double sum = 0.0;
    auto f = [&](double t) { return chi2_density(k, t * t) * 2.0 * t; };
    for (double t = t0; t < T; t += h) sum += 0.5 * h * (f(t) + f(t + h));
    REQUIRE_THAT(sum, WithinAbs(1.0, 1e-6));
  }
}

TEST_CASE("multinomial_joint_logmass by hand") {
  std::map<std::size_t, LogProb> cells = {{0, LogProb::from_linear(0.25)},
                                          {1, LogProb::from_linear(0.5)},
                                          {2, LogProb::from_linear(0.25)}};
  FrequencyTable table = FrequencyTable::from_counts({{0, 1}, {1, 2}, {2, 1}});
  // 4!/(1!2!1!) * (1/4)(1/2)^2(1/4) = 12/64.
  CHECK_THAT(multinomial_joint_logmass(table, cells).log(),
             WithinRel(std::log(12.0 / 64.0), 1e-13));
}

TEST_CASE("multinomial_joint_logmass sums to one over all compositions") {
  std::map<std::size_t, LogProb> cells = {{0, LogProb::from_linear(0.25)},
                                          {1, LogProb::from_linear(0.5)},
                                          {2, LogProb::from_linear(0.25)}};
  double total = 0.0;
  const std::size_t n = 4;
  for (std::size_t f0 = 0; f0 <= n; ++f0) {
    for (std::size_t f1 = 0; f1 + f0 <= n; ++f1) {
      std::size_t f2 = n - f0 - f1;
      FrequencyTable t = FrequencyTable::from_counts({{0, f0}, {1, f1}, {2, f2}});
      total += multinomial_joint_logmass(t, cells).linear();
    }
  }
  CHECK_THAT(total, WithinAbs(1.0, 1e-12));
}

TEST_CASE("multinomial_joint_logmass validation") {
  std::map<std::size_t, LogProb> cells = {{0, LogProb::from_linear(1.0)},
                                          {1, LogProb::zero(Mode::kLogDouble)}};
  FrequencyTable ok = FrequencyTable::from_counts({{0, 3}, {1, 0}});
  CHECK_THAT(multinomial_joint_logmass(ok, cells).log(), WithinAbs(0.0, 1e-15));  // 0^0 = 1
  FrequencyTable bad = FrequencyTable::from_counts({{0, 2}, {1, 1}});
  CHECK_THROWS_AS(multinomial_joint_logmass(bad, cells), ilrt::DomainError);

  FrequencyTable inconsistent;
  inconsistent.counts = {{0, 2}};
  inconsistent.total = 5;  // deliberately out of sync
  std::map<std::size_t, LogProb> any = {{0, LogProb::from_linear(1.0)}};
  CHECK_THROWS_AS(multinomial_joint_logmass(inconsistent, any), ilrt::DomainError);
}
