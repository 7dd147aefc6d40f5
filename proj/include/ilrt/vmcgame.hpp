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
// Betting-game view of randomness: place-selection rules over ±1
// prefixes, subsequence extraction, the Alice/Bob payoff ledger, bias of
// an extracted subsequence, and pure-strategy analysis of finite
// strictly competitive matrix games.

#ifndef ILRT_VMCGAME_HPP_
#define ILRT_VMCGAME_HPP_

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "ilrt/bitio.hpp"
#include "ilrt/errors.hpp"
#include "ilrt/matrix.hpp"

namespace ilrt::vmc {

/// Result of evaluating a selection rule on a prefix. kBetPlus doubles
/// as "select" in the extraction role; kBetMinus as "skip"; kDiverge
/// models a non-halting computation and is never an error.
enum class Outcome : int {
  kBetMinus = -1,
  kDiverge = 0,
  kBetPlus = +1,
};

/// A deterministic, budgeted stand-in for a partial recursive strategy:
/// the evaluator maps a non-empty ±1 prefix to an Outcome, reporting
/// kDiverge when its own step count would exceed the budget. True
/// partiality is undecidable to run; budget exhaustion is a conservative
/// finite model of it.
struct SelectionRule {
  std::string name;
  std::size_t step_budget = 0;
  std::function<Outcome(std::span<const std::int8_t> prefix, std::size_t step_budget)> evaluator;

  Outcome evaluate(std::span<const std::int8_t> prefix) const {
    return evaluator(prefix, step_budget);
  }
};

/// Names of the built-in rules, in catalog order.
inline const std::vector<std::string>& rule_names() {
  static const std::vector<std::string> names = {
      "constant-select",    "constant-skip",    "after-plus",     "after-minus",
      "majority-of-prefix", "parity-of-prefix", "always-diverge",
  };
  return names;
}

/// Build a catalog rule by name. Cost model: the constant rules and the
/// last-symbol rules charge 1 step; the whole-prefix rules charge one
/// step per symbol read. A rule whose cost exceeds the budget diverges.
inline SelectionRule make_rule(const std::string& name, std::size_t step_budget = 1000000) {
  if (step_budget < 1) throw DomainError("step_budget must be positive");
  SelectionRule rule;
  rule.name = name;
  rule.step_budget = step_budget;
  if (name == "constant-select") {
    rule.evaluator = [](std::span<const std::int8_t>, std::size_t) { return Outcome::kBetPlus; };
  } else if (name == "constant-skip") {
    rule.evaluator = [](std::span<const std::int8_t>, std::size_t) { return Outcome::kBetMinus; };
  } else if (name == "after-plus") {
    rule.evaluator = [](std::span<const std::int8_t> prefix, std::size_t) {
      return prefix.back() == 1 ? Outcome::kBetPlus : Outcome::kBetMinus;
    };
  } else if (name == "after-minus") {
    rule.evaluator = [](std::span<const std::int8_t> prefix, std::size_t) {
      return prefix.back() == -1 ? Outcome::kBetPlus : Outcome::kBetMinus;
    };
  } else if (name == "majority-of-prefix") {
    rule.evaluator = [](std::span<const std::int8_t> prefix, std::size_t budget) {
      if (prefix.size() > budget) return Outcome::kDiverge;
      long long s = 0;
      for (std::int8_t v : prefix) s += v;
      if (s > 0) return Outcome::kBetPlus;
      if (s < 0) return Outcome::kBetMinus;
      return Outcome::kDiverge;  // tie: no majority to follow
    };
  } else if (name == "parity-of-prefix") {
    rule.evaluator = [](std::span<const std::int8_t> prefix, std::size_t budget) {
      if (prefix.size() > budget) return Outcome::kDiverge;
      std::size_t plus = 0;
      for (std::int8_t v : prefix) {
        if (v == 1) ++plus;
      }
      return (plus % 2 == 0) ? Outcome::kBetPlus : Outcome::kBetMinus;
    };
  } else if (name == "always-diverge") {
    rule.evaluator = [](std::span<const std::int8_t>, std::size_t) { return Outcome::kDiverge; };
  } else {
    throw DomainError("unknown selection rule '" + name + "'");
  }
  return rule;
}

namespace detail {

inline std::span<const std::int8_t> prefix_of(const bitio::SignSequence& x, std::size_t n) {
  return std::span<const std::int8_t>(x.signs().data(), n - 1);
}

}  // namespace detail

/// Indices n (1-based, n ≥ 2) whose prefix evaluates to kBetPlus. Index 1
/// has an empty prefix, outside the rule's domain, and is never selected.
inline std::vector<std::size_t> extract_indices(const bitio::SignSequence& x,
                                                const SelectionRule& rule) {
  std::vector<std::size_t> indices;
  for (std::size_t n = 2; n <= x.size(); ++n) {
    if (rule.evaluate(detail::prefix_of(x, n)) == Outcome::kBetPlus) indices.push_back(n);
  }
  return indices;
}

/// Ordered concatenation of the selected elements.
inline bitio::SignSequence extract(const bitio::SignSequence& x, const SelectionRule& rule) {
  std::vector<std::int8_t> out;
  for (std::size_t n : extract_indices(x, rule)) out.push_back(x[n - 1]);
  return bitio::SignSequence(std::move(out));
}

/// One betting turn: Bob's bet and the resulting payoffs.
struct TurnRecord {
  std::size_t n = 0;
  int bet = 0;    // −1, 0 (no bet), +1
  int alice = 0;  // −bob
  int bob = 0;    // +1 correct nonzero bet, −1 incorrect, 0 on no bet
};

/// Full per-turn payoff record with cumulative totals.
struct PayoffLedger {
  std::vector<TurnRecord> turns;
  long long alice_total = 0;
  long long bob_total = 0;
};

/// Play the game: at each turn n Bob consults the rule on x₁…x_{n−1}
/// (no bet on turn 1 or on divergence), wins +1 on a correct bet, loses
/// 1 on an incorrect one; Alice's payoff is the exact negation.
inline PayoffLedger run_betting_game(const bitio::SignSequence& x, const SelectionRule& rule) {
  PayoffLedger ledger;
  ledger.turns.reserve(x.size());
  for (std::size_t n = 1; n <= x.size(); ++n) {
    TurnRecord turn;
    turn.n = n;
    if (n >= 2) {
      Outcome o = rule.evaluate(detail::prefix_of(x, n));
      turn.bet = static_cast<int>(o);
    }
    if (turn.bet != 0) {
      turn.bob = turn.bet == x[n - 1] ? +1 : -1;
      turn.alice = -turn.bob;
    }
    ledger.alice_total += turn.alice;
    ledger.bob_total += turn.bob;
    ledger.turns.push_back(turn);
  }
  return ledger;
}

/// Frequency of +1 in the extracted subsequence, minus ½.
inline double bias(const bitio::SignSequence& x, const SelectionRule& rule) {
  bitio::SignSequence sub = extract(x, rule);
  if (sub.empty()) throw EmptyExtractionError("extraction is empty; bias is undefined");
  std::size_t plus = 0;
  for (std::size_t i = 0; i < sub.size(); ++i) {
    if (sub[i] == 1) ++plus;
  }
  return static_cast<double>(plus) / static_cast<double>(sub.size()) - 0.5;
}

/// A finite strictly competitive game: rows are Alice's actions, columns
/// Bob's; the stored matrix is Alice's payoff and Bob's is its negation.
class MatrixGame {
 public:
  explicit MatrixGame(Matrix alice_payoff) : alice_(std::move(alice_payoff)) {
    if (alice_.empty()) throw DomainError("MatrixGame requires a non-empty payoff matrix");
  }

  const Matrix& alice_payoff() const { return alice_; }
  std::size_t rows() const { return alice_.rows(); }
  std::size_t cols() const { return alice_.cols(); }

 private:
  Matrix alice_;
};

enum class Player { kAlice, kBob };

/// A player's security level and the actions achieving it.
struct MaxminResult {
  std::vector<std::size_t> actions;
  double value = 0.0;
};

/// Actions maximizing the player's own worst-case payoff. For Alice that
/// is argmax_r min_c A(r,c); for Bob, with payoff −A, it is
/// argmax_c min_r (−A(r,c)) = argmin_c max_r A(r,c).
inline MaxminResult maxminimizers(const MatrixGame& g, Player player) {
  const Matrix& a = g.alice_payoff();
  MaxminResult result;
  if (player == Player::kAlice) {
    std::vector<double> worst(g.rows());
    for (std::size_t r = 0; r < g.rows(); ++r) {
      double w = a(r, 0);
      for (std::size_t c = 1; c < g.cols(); ++c) w = std::min(w, a(r, c));
      worst[r] = w;
    }
    double best = worst[0];
    for (double w : worst) best = std::max(best, w);
    for (std::size_t r = 0; r < g.rows(); ++r) {
      if (worst[r] == best) result.actions.push_back(r);
    }
    result.value = best;
    return result;
  }
  std::vector<double> worst(g.cols());
  for (std::size_t c = 0; c < g.cols(); ++c) {
    double w = -a(0, c);
    for (std::size_t r = 1; r < g.rows(); ++r) w = std::min(w, -a(r, c));
    worst[c] = w;
  }
  double best = worst[0];
  for (double w : worst) best = std::max(best, w);
  for (std::size_t c = 0; c < g.cols(); ++c) {
    if (worst[c] == best) result.actions.push_back(c);
  }
  result.value = best;
  return result;
}

/// All pure-strategy equilibria (r,c): r best response to c and c best
/// response to r, in lexicographic order.
inline std::vector<std::pair<std::size_t, std::size_t>> pure_nash(const MatrixGame& g) {
  const Matrix& a = g.alice_payoff();
  std::vector<std::pair<std::size_t, std::size_t>> profiles;
  for (std::size_t r = 0; r < g.rows(); ++r) {
    for (std::size_t c = 0; c < g.cols(); ++c) {
      bool alice_best = true;
      for (std::size_t r2 = 0; r2 < g.rows(); ++r2) {
        if (a(r2, c) > a(r, c)) {
          alice_best = false;
          break;
        }
      }
      if (!alice_best) continue;
      bool bob_best = true;
      for (std::size_t c2 = 0; c2 < g.cols(); ++c2) {
        // Bob prefers smaller Alice payoff.
        if (a(r, c2) < a(r, c)) {
          bob_best = false;
          break;
        }
      }
      if (bob_best) profiles.emplace_back(r, c);
    }
  }
  return profiles;
}

/// Verification record for the three minimax clauses on a finite game.
struct MinimaxReport {
  bool nash_profiles_are_maxminimizers = true;  // clause 1
  bool values_coincide_at_nash = true;          // clause 2: maxmin = minmax = value
  bool maxmin_pairs_are_nash = true;            // clause 3 (when maxmin == minmax)
  double alice_maxmin = 0.0;
  double alice_minmax = 0.0;
  std::vector<std::pair<std::size_t, std::size_t>> nash;
  std::string detail;  // first failure witness, empty when all pass

  bool all_pass() const {
    return nash_profiles_are_maxminimizers && values_coincide_at_nash && maxmin_pairs_are_nash;
  }
};

/// Exhaustively check the minimax clauses: (1) every pure equilibrium is
/// a pair of maxminimizers; (2) at every equilibrium, maxmin = minmax =
/// the equilibrium payoff; (3) if maxmin = minmax, every maxminimizer
/// pair is an equilibrium. Clauses over empty sets hold vacuously.
inline MinimaxReport check_minimax_theorem(const MatrixGame& g) {
  const Matrix& a = g.alice_payoff();
  MinimaxReport report;
  MaxminResult alice = maxminimizers(g, Player::kAlice);
  MaxminResult bob = maxminimizers(g, Player::kBob);
  report.alice_maxmin = alice.value;
  report.alice_minmax = -bob.value;  // min_c max_r A, Bob's security level negated
  report.nash = pure_nash(g);

  auto contains = [](const std::vector<std::size_t>& v, std::size_t x) {
    for (std::size_t e : v) {
      if (e == x) return true;
    }
    return false;
  };
  for (const auto& [r, c] : report.nash) {
    if (!contains(alice.actions, r) || !contains(bob.actions, c)) {
      report.nash_profiles_are_maxminimizers = false;
      report.detail = "equilibrium (" + std::to_string(r) + "," + std::to_string(c) +
                      ") is not a maxminimizer pair";
    }
    if (report.alice_maxmin != report.alice_minmax || a(r, c) != report.alice_maxmin) {
      report.values_coincide_at_nash = false;
      if (report.detail.empty()) {
        report.detail = "values differ at equilibrium (" + std::to_string(r) + "," +
                        std::to_string(c) + ")";
      }
    }
  }
  if (report.alice_maxmin == report.alice_minmax) {
    auto is_nash = [&](std::size_t r, std::size_t c) {
      for (const auto& [nr, nc] : report.nash) {
        if (nr == r && nc == c) return true;
      }
      return false;
    };
    for (std::size_t r : alice.actions) {
      for (std::size_t c : bob.actions) {
        if (!is_nash(r, c)) {
          report.maxmin_pairs_are_nash = false;
          if (report.detail.empty()) {
            report.detail = "maxminimizer pair (" + std::to_string(r) + "," +
                            std::to_string(c) + ") is not an equilibrium";
          }
        }
      }
    }
  }
  return report;
}

/// True iff a is a strict prefix of b (b = a·z with z non-empty).
inline bool prefix_order(std::string_view a, std::string_view b) {
  return a.size() < b.size() && b.substr(0, a.size()) == a;
}

}  // namespace ilrt::vmc

#endif  // ILRT_VMCGAME_HPP_
