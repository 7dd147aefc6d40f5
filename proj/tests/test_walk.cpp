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

#include <random>
#include <vector>

#include <catch2/catch_amalgamated.hpp>

#include "ilrt/bitio.hpp"
#include "ilrt/walk.hpp"

using namespace ilrt::walk;
using ilrt::bitio::BitString;
using ilrt::bitio::SignSequence;
using Catch::Matchers::WithinRel;
using Catch::Matchers::WithinULP;

namespace {

SignSequence constant(std::int8_t value, std::size_t n) {
  return SignSequence(std::vector<std::int8_t>(n, value));
}

SignSequence random_signs(std::mt19937& rng, std::size_t n) {
  std::uniform_int_distribution<int> coin(0, 1);
  std::vector<std::int8_t> v(n);
  for (auto& s : v) s = static_cast<std::int8_t>(2 * coin(rng) - 1);
  return SignSequence(std::move(v));
}

}  // namespace

TEST_CASE("phi matches independently computed reference values") {
  CHECK_THAT(phi(3), WithinULP(0.7511903658196067, 2));
  CHECK_THAT(phi(4), WithinULP(1.6165005659838934, 2));
  CHECK_THAT(phi(5), WithinULP(2.1814788454787056, 2));
  CHECK_THAT(phi(10), WithinULP(4.084195013091211, 2));
  CHECK_THAT(phi(100), WithinULP(17.476725241348284, 2));
  CHECK_THAT(phi(10000), WithinULP(210.72858403016172, 2));
}

TEST_CASE("phi is undefined below n = 3") {
  CHECK_THROWS_AS(phi(0), ilrt::DomainError);
  CHECK_THROWS_AS(phi(1), ilrt::DomainError);
  CHECK_THROWS_AS(phi(2), ilrt::DomainError);
}

TEST_CASE("walk sums accumulate the signed steps") {
  WalkTrace t = walk_sums(SignSequence({1, 1, -1}));
  CHECK(t.sum(1) == 1);
  CHECK(t.sum(2) == 2);
  CHECK(t.sum(3) == 1);
  CHECK(walk_sums(SignSequence({-1, -1, 1})).sums() == std::vector<long long>{-1, -2, -1});
}

TEST_CASE("WalkTrace rejects trajectories a ±1 walk cannot produce") {
  CHECK_THROWS_AS(WalkTrace({}), ilrt::DomainError);
  CHECK_THROWS_AS(WalkTrace({0}), ilrt::DomainError);
  CHECK_THROWS_AS(WalkTrace({1, 3}), ilrt::DomainError);
  CHECK_NOTHROW(WalkTrace({-1, 0, 1}));
}

TEST_CASE("lil_ratio divides the walk sum by phi") {
  WalkTrace up = walk_sums(constant(+1, 10));
  CHECK_THAT(lil_ratio(up, 3), WithinULP(3.9936614425649193, 4));  // 3 / phi(3)
  WalkTrace down = walk_sums(constant(-1, 4));
  CHECK_THAT(lil_ratio(down, 4), WithinULP(-2.4744810389629374, 4));  // -4 / phi(4)
  CHECK_THROWS_AS(lil_ratio(up, 2), ilrt::DomainError);
  CHECK_THROWS_AS(lil_ratio(up, 11), ilrt::DomainError);
}

TEST_CASE("counter: the all-plus walk leaves a narrow band immediately") {
  // Ratios n/phi(n) for n in [3,10] all lie in [2.29, 4.0]: none is
  // within 0.1 of 1, and all are within 3.
  auto narrow = counter(constant(+1, 10), 0.1);
  CHECK(narrow.counter == 0);
  CHECK(narrow.hit_indices.empty());

  auto wide = counter(constant(+1, 10), 3.0);
  CHECK(wide.counter == 8);
  CHECK(wide.hit_indices == std::vector<std::size_t>{3, 4, 5, 6, 7, 8, 9, 10});
}

TEST_CASE("counter respects the start index") {
  auto from5 = counter(constant(+1, 10), 3.0, 5);
  CHECK(from5.counter == 6);
  CHECK(from5.hit_indices.front() == 5);
}

TEST_CASE("counter on the shortest admissible sequence") {
  auto r = counter(constant(+1, 3), 0.1);
  CHECK(r.counter == 0);
  CHECK(r.horizon == 3);
}

TEST_CASE("counter is monotone in the band half-width") {
  std::mt19937 rng(101);
  for (int trial = 0; trial < 20; ++trial) {
    SignSequence x = random_signs(rng, 200);
    std::size_t a = counter(x, 0.1).counter;
    std::size_t b = counter(x, 0.5).counter;
    std::size_t c = counter(x, 1.0).counter;
    REQUIRE(a <= b);
    REQUIRE(b <= c);
  }
}

TEST_CASE("counter over a prefix never exceeds the full-sequence counter") {
  std::mt19937 rng(202);
  for (int trial = 0; trial < 20; ++trial) {
    SignSequence full = random_signs(rng, 100);
    std::vector<std::int8_t> head(full.signs().begin(), full.signs().begin() + 50);
    SignSequence prefix{std::move(head)};
    REQUIRE(counter(prefix, 0.5).counter <= counter(full, 0.5).counter);
  }
}

TEST_CASE("counter argument validation") {
  CHECK_THROWS_AS(counter(constant(+1, 10), 0.0), ilrt::DomainError);
  CHECK_THROWS_AS(counter(constant(+1, 10), -0.1), ilrt::DomainError);
  CHECK_THROWS_AS(counter(constant(+1, 10), 0.1, 2), ilrt::DomainError);
  CHECK_THROWS_AS(counter(constant(+1, 2), 0.1), ilrt::DomainError);
}

TEST_CASE("sample_mean is the walk sum over n") {
  SignSequence x({1, 1, -1});
  CHECK(sample_mean(x, 1) == 1.0);
  CHECK(sample_mean(x, 3) == Catch::Approx(1.0 / 3.0));
  CHECK_THROWS_AS(sample_mean(x, 0), ilrt::DomainError);
  CHECK_THROWS_AS(sample_mean(x, 4), ilrt::DomainError);
}

TEST_CASE("borel_deviation on a perfectly balanced string") {
  auto dev = borel_deviation(BitString::from_string("010101"), 1);
  REQUIRE(dev.size() == 2);
  CHECK(dev.at("0") == 0.0);
  CHECK(dev.at("1") == 0.0);
}

TEST_CASE("borel_deviation exposes block-level non-uniformity") {
  // "010101" read in blocks of two is 01,01,01: single-bit balance hides
  // a maximal block imbalance.
  auto dev = borel_deviation(BitString::from_string("010101"), 2);
  REQUIRE(dev.size() == 4);
  CHECK(dev.at("01") == 0.75);
  CHECK(dev.at("00") == -0.25);
  CHECK(dev.at("10") == -0.25);
  CHECK(dev.at("11") == -0.25);
}

TEST_CASE("borel_deviation ignores the incomplete trailing block") {
  // "01101" in blocks of two uses 01,10 and drops the final 1.
  auto dev = borel_deviation(BitString::from_string("01101"), 2);
  CHECK(dev.at("01") == 0.25);
  CHECK(dev.at("10") == 0.25);
  CHECK(dev.at("00") == -0.25);
  CHECK(dev.at("11") == -0.25);
}

TEST_CASE("borel deviations sum to exactly zero in the rational variant") {
  std::mt19937 rng(303);
  std::uniform_int_distribution<int> coin(0, 1);
  for (std::size_t m : {1, 2, 3, 5}) {
    std::vector<std::uint8_t> bits(257);
    for (auto& b : bits) b = static_cast<std::uint8_t>(coin(rng));
    auto dev = borel_deviation_exact(BitString(bits), m);
    mpq_class total = 0;
    for (const auto& [block, d] : dev) total += d;
    REQUIRE(total == 0);
  }
}

TEST_CASE("borel_deviation argument validation") {
  BitString b = BitString::from_string("0101");
  CHECK_THROWS_AS(borel_deviation(b, 0), ilrt::DomainError);
  CHECK_THROWS_AS(borel_deviation(b, 5), ilrt::DomainError);   // shorter than one block
  CHECK_THROWS_AS(borel_deviation(BitString(std::vector<std::uint8_t>(30, 0)), 25),
                  ilrt::CapacityError);
}
