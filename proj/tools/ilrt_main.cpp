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
// Command-line front end: ingest | lil | model | decide | vmc | borel.
//
// Exit codes: 0 success, 1 runtime failure, 2 usage error, 3 data parse
// error, 4 capacity guard, 5 domain error, 6 I/O error.

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <memory>
#include <mutex>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"

#include "ilrt/bitio.hpp"
#include "ilrt/dist.hpp"
#include "ilrt/errors.hpp"
#include "ilrt/report.hpp"
#include "ilrt/stattest.hpp"
#include "ilrt/vmcgame.hpp"
#include "ilrt/walk.hpp"

namespace {

constexpr int kExitFailure = 1;
constexpr int kExitUsage = 2;
constexpr int kExitParse = 3;
constexpr int kExitCapacity = 4;
constexpr int kExitDomain = 5;
constexpr int kExitIo = 6;

struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

using ilrt::bitio::Corpus;
using ilrt::bitio::CorpusFormat;
using ilrt::bitio::OverlengthPolicy;
using ilrt::num::LogProb;
using ilrt::num::Mode;
using ilrt::report::ordered_json;

CorpusFormat parse_format(const std::string& name) {
  if (name == "appendix") return CorpusFormat::kAppendixDecimal;
  if (name == "bits") return CorpusFormat::kAsciiBits;
  return CorpusFormat::kRawBytes;
}

Corpus load_input(const std::string& path, const std::string& format_name,
                  std::size_t record_length, OverlengthPolicy policy) {
  CorpusFormat format = parse_format(format_name);
  bool binary = format == CorpusFormat::kRawBytes;
  if (path == "-") {
    return ilrt::bitio::load_corpus(std::cin, format, record_length, policy);
  }
  std::ifstream in(path, binary ? std::ios::in | std::ios::binary : std::ios::in);
  if (!in) throw IoError("cannot open input file '" + path + "'");
  return ilrt::bitio::load_corpus(in, format, record_length, policy);
}

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

Mode parse_mode(const std::string& mode) {
  return mode == "exact" ? Mode::kExactRational : Mode::kLogDouble;
}

/// Parse an m specification: "4", "0,2,5", or "0..8".
std::vector<std::size_t> parse_m_spec(const std::string& spec) {
  std::vector<std::size_t> out;
  auto parse_int = [](const std::string& s) -> std::size_t {
    std::size_t pos = 0;
    unsigned long v = std::stoul(s, &pos);
    if (pos != s.size()) throw CLI::ValidationError("--m", "invalid integer '" + s + "'");
    return v;
  };
  std::stringstream ss(spec);
  std::string item;
  while (std::getline(ss, item, ',')) {
    auto dots = item.find("..");
    if (dots == std::string::npos) {
      out.push_back(parse_int(item));
      continue;
    }
    std::size_t lo = parse_int(item.substr(0, dots));
    std::size_t hi = parse_int(item.substr(dots + 2));
    if (hi < lo) throw CLI::ValidationError("--m", "descending range '" + item + "'");
    for (std::size_t m = lo; m <= hi; ++m) out.push_back(m);
  }
  if (out.empty()) throw CLI::ValidationError("--m", "empty m specification");
  return out;
}

ordered_json diagnostics_json(const Corpus& corpus) {
  ordered_json diags = ordered_json::array();
  for (const auto& d : corpus.diagnostics) {
    diags.push_back({{"record", d.record_index}, {"message", d.message}});
  }
  return diags;
}

int cmd_ingest(const std::string& input, const std::string& format, std::size_t length,
               bool strict, const std::string& out) {
  Corpus corpus = load_input(input, format, length,
                             strict ? OverlengthPolicy::kStrict : OverlengthPolicy::kTruncate);
  if (out == "json") {
    ordered_json j;
    j["schema"] = "ilrt/ingest/v1";
    j["parameters"] = {{"format", format}, {"record_length", length}};
    j["records"] = corpus.records.size();
    ordered_json recs = ordered_json::array();
    for (std::size_t i = 0; i < corpus.records.size(); ++i) {
      const auto& r = corpus.records[i];
      long long balance = 0;
      for (std::size_t k = 0; k < r.size(); ++k) balance += r[k];
      std::size_t ones = static_cast<std::size_t>((static_cast<long long>(r.size()) + balance) / 2);
      recs.push_back({{"record", i + 1},
                      {"length", r.size()},
                      {"ones", ones},
                      {"zeros", r.size() - ones},
                      {"balance", balance}});
    }
    j["record_details"] = recs;
    j["diagnostics"] = diagnostics_json(corpus);
    std::cout << ilrt::report::render(j);
  } else {
    std::cout << corpus.records.size() << " records x " << length << " bits\n";
    for (std::size_t i = 0; i < corpus.records.size(); ++i) {
      const auto& r = corpus.records[i];
      long long balance = 0;
      for (std::size_t k = 0; k < r.size(); ++k) balance += r[k];
      std::size_t ones = static_cast<std::size_t>((static_cast<long long>(r.size()) + balance) / 2);
      std::cout << "record " << (i + 1) << ": length=" << r.size() << " ones=" << ones
                << " zeros=" << (r.size() - ones) << " balance=" << balance << "\n";
    }
    for (const auto& d : corpus.diagnostics) {
      std::cerr << "diagnostic: record " << d.record_index << ": " << d.message << "\n";
    }
  }
  if (corpus.records.empty()) {
    std::cerr << "error: no records in input\n";
    return kExitFailure;
  }
  return 0;
}

int cmd_lil(const std::string& input, const std::string& format, std::size_t length,
            double epsilon, std::size_t start_index, const std::string& out,
            bool replicate_listing_bug) {
  Corpus corpus = load_input(input, format, length, OverlengthPolicy::kTruncate);
  if (corpus.records.empty()) {
    std::cerr << "error: no records in input\n";
    return kExitFailure;
  }
  std::vector<std::size_t> counters(corpus.records.size(), 0);
  if (replicate_listing_bug) {
    // Reproduce a known indexing slip in a historical analysis script:
    // every record reuses the first record's ratio list, so all counters
    // collapse to the first record's value.
    std::size_t first = ilrt::walk::counter(corpus.records[0], epsilon, start_index).counter;
    counters.assign(corpus.records.size(), first);
  } else {
    // Per-record work fans out over a small pool; records are assigned
    // by stride so each output slot is written by exactly one worker and
    // the result order is the input order.
    std::size_t pool = std::max<std::size_t>(1, std::thread::hardware_concurrency());
    pool = std::min(pool, corpus.records.size());
    std::exception_ptr first_error;
    std::mutex error_mutex;
    auto worker = [&](std::size_t offset) {
      try {
        for (std::size_t i = offset; i < corpus.records.size(); i += pool) {
          counters[i] = ilrt::walk::counter(corpus.records[i], epsilon, start_index).counter;
        }
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mutex);
        if (!first_error) first_error = std::current_exception();
      }
    };
    std::vector<std::thread> threads;
    threads.reserve(pool);
    for (std::size_t t = 0; t < pool; ++t) threads.emplace_back(worker, t);
    for (auto& t : threads) t.join();
    if (first_error) std::rethrow_exception(first_error);
  }
  std::map<std::size_t, std::size_t> histogram;
  for (std::size_t c : counters) ++histogram[c];

  if (out == "csv") {
    std::cout << "record,counter\n";
    for (std::size_t i = 0; i < counters.size(); ++i) {
      std::cout << (i + 1) << "," << counters[i] << "\n";
    }
    std::cout << "\nm,frequency\n";
    for (const auto& [m, f] : histogram) std::cout << m << "," << f << "\n";
    for (const auto& d : corpus.diagnostics) {
      std::cerr << "diagnostic: record " << d.record_index << ": " << d.message << "\n";
    }
  } else {
    ordered_json j;
    j["schema"] = "ilrt/lil/v1";
    j["parameters"] = {{"epsilon", epsilon},
                       {"start_index", start_index},
                       {"record_length", length},
                       {"format", format},
                       {"replicate_listing_bug", replicate_listing_bug}};
    j["records"] = corpus.records.size();
    j["counters"] = counters;
    ordered_json hist = ordered_json::object();
    for (const auto& [m, f] : histogram) hist[std::to_string(m)] = f;
    j["histogram"] = hist;
    j["diagnostics"] = diagnostics_json(corpus);
    std::cout << ilrt::report::render(j);
  }
  return 0;
}

int cmd_model(std::size_t length, double epsilon, const std::string& m_spec,
              const std::string& strategy_name, const std::string& mode_name,
              const std::string& out) {
  Mode mode = parse_mode(mode_name);
  auto strategy = strategy_name == "enumerate" ? ilrt::dist::PaperStrategy::kEnumerateSubsets
                                               : ilrt::dist::PaperStrategy::kDp;
  std::vector<std::size_t> ms = parse_m_spec(m_spec);
  std::vector<std::pair<std::size_t, LogProb>> values;
  for (std::size_t m : ms) {
    LogProb p = m == 0 ? ilrt::dist::counter_zero_probability(length, epsilon, mode)
                       : ilrt::dist::counter_distribution_paper(length, epsilon, m, strategy, mode);
    values.emplace_back(m, p);
  }
  if (out == "csv") {
    std::cout << "m,log10,linear\n";
    for (const auto& [m, p] : values) {
      std::cout << m << "," << (p.is_zero() ? "-inf" : format_double(p.log10())) << ","
                << format_double(p.linear()) << "\n";
    }
  } else {
    ordered_json j;
    j["schema"] = "ilrt/model/v1";
    j["parameters"] = {{"horizon", length},
                       {"epsilon", epsilon},
                       {"strategy", strategy_name},
                       {"mode", mode_name}};
    ordered_json vals = ordered_json::object();
    for (const auto& [m, p] : values) vals[std::to_string(m)] = ilrt::report::prob_json(p);
    j["values"] = vals;
    std::cout << ilrt::report::render(j);
  }
  return 0;
}

int cmd_decide(std::size_t f_tilde, std::size_t n, std::size_t length, double epsilon,
               double alpha, const std::string& mode_name) {
  auto t0 = std::chrono::steady_clock::now();
  Mode mode = parse_mode(mode_name);
  LogProb p = ilrt::dist::counter_zero_probability(length, epsilon, mode);
  ilrt::stattest::BinomialModel model(p, n, f_tilde);
  double stat = ilrt::stattest::chi2_stat_binomial(model);
  double stat_log = ilrt::stattest::chi2_stat_binomial_log(model);
  std::size_t quantile = ilrt::stattest::chi2_quantile(alpha, model);
  auto decision = ilrt::stattest::decide(stat, static_cast<double>(quantile), alpha);
  std::map<std::size_t, LogProb> cells = {{0, p}, {1, p.complement()}};
  auto applicability = ilrt::stattest::pearson_applicability(n, cells);

  ilrt::report::RunReport report;
  report.epsilon = epsilon;
  report.horizon = length;
  report.alpha = alpha;
  report.mode = mode_name;
  report.n_experiments = n;
  report.f_tilde = f_tilde;
  report.p_zero = p;
  report.statistic = stat;
  report.statistic_log10 = stat_log / std::numbers::ln10;
  report.quantile = quantile;
  report.verdict = decision.verdict == ilrt::stattest::Verdict::kAccept ? "accept" : "reject";
  report.pearson_applicable = applicability.applicable;
  report.pearson_violating_cells = applicability.violating_cells;
  report.elapsed_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  std::cout << ilrt::report::render(ilrt::report::to_json(report));
  return 0;
}

int cmd_vmc(const std::string& input, const std::string& format, std::size_t length,
            const std::string& rule_name, std::size_t budget, std::size_t horizon,
            std::size_t record_pick, bool full) {
  ilrt::vmc::SelectionRule rule = ilrt::vmc::make_rule(rule_name, budget);
  Corpus corpus = load_input(input, format, length, OverlengthPolicy::kTruncate);
  if (corpus.records.empty()) {
    std::cerr << "error: no records in input\n";
    return kExitFailure;
  }
  if (record_pick > corpus.records.size()) {
    throw ilrt::DomainError("record " + std::to_string(record_pick) + " out of range (corpus has " +
                            std::to_string(corpus.records.size()) + " records)");
  }
  ordered_json j;
  j["schema"] = "ilrt/vmc/v1";
  j["parameters"] = {{"rule", rule_name},
                     {"step_budget", budget},
                     {"horizon", horizon},
                     {"record_length", length},
                     {"format", format}};
  ordered_json recs = ordered_json::array();
  std::size_t lo = record_pick == 0 ? 1 : record_pick;
  std::size_t hi = record_pick == 0 ? corpus.records.size() : record_pick;
  for (std::size_t idx = lo; idx <= hi; ++idx) {
    const auto& whole = corpus.records[idx - 1];
    ilrt::bitio::SignSequence x = whole;
    if (horizon != 0 && horizon < whole.size()) {
      std::vector<std::int8_t> head(whole.signs().begin(),
                                    whole.signs().begin() + static_cast<std::ptrdiff_t>(horizon));
      x = ilrt::bitio::SignSequence(std::move(head));
    }
    auto ledger = ilrt::vmc::run_betting_game(x, rule);
    auto selected = ilrt::vmc::extract_indices(x, rule);
    std::size_t bets = 0;
    for (const auto& turn : ledger.turns) {
      if (turn.bet != 0) ++bets;
    }
    ordered_json rec;
    rec["record"] = idx;
    rec["turns"] = ledger.turns.size();
    rec["bets_placed"] = bets;
    rec["selected"] = selected.size();
    rec["bob_total"] = ledger.bob_total;
    rec["alice_total"] = ledger.alice_total;
    try {
      rec["bias"] = ilrt::vmc::bias(x, rule);
    } catch (const ilrt::EmptyExtractionError&) {
      rec["bias"] = nullptr;
    }
    if (full) {
      ordered_json turns = ordered_json::array();
      for (const auto& turn : ledger.turns) {
        turns.push_back({{"n", turn.n}, {"bet", turn.bet}, {"alice", turn.alice}, {"bob", turn.bob}});
      }
      rec["ledger"] = turns;
    }
    recs.push_back(rec);
  }
  j["records"] = recs;
  std::cout << ilrt::report::render(j);
  return 0;
}

int cmd_borel(const std::string& input, const std::string& format, std::size_t length,
              std::size_t m, const std::string& out) {
  Corpus corpus = load_input(input, format, length, OverlengthPolicy::kTruncate);
  if (corpus.records.empty()) {
    std::cerr << "error: no records in input\n";
    return kExitFailure;
  }
  double max_abs = 0.0;
  std::size_t nblocks = length / m;
  if (out == "json") {
    ordered_json j;
    j["schema"] = "ilrt/borel/v1";
    j["parameters"] = {{"m", m}, {"record_length", length}, {"blocks_per_record", nblocks}};
    ordered_json recs = ordered_json::array();
    for (std::size_t i = 0; i < corpus.records.size(); ++i) {
      ilrt::bitio::BitString bits = ilrt::bitio::to_bits(corpus.records[i]);
      auto dev = ilrt::walk::borel_deviation(bits, m);
      ordered_json devs = ordered_json::object();
      for (const auto& [block, d] : dev) {
        devs[block] = d;
        max_abs = std::max(max_abs, std::abs(d));
      }
      recs.push_back({{"record", i + 1}, {"deviations", devs}});
    }
    j["records"] = recs;
    j["max_abs_deviation"] = max_abs;
    std::cout << ilrt::report::render(j);
  } else {
    std::cout << "record,block,count,deviation\n";
    double ideal = 1.0 / static_cast<double>(static_cast<std::size_t>(1) << m);
    for (std::size_t i = 0; i < corpus.records.size(); ++i) {
      ilrt::bitio::BitString bits = ilrt::bitio::to_bits(corpus.records[i]);
      auto dev = ilrt::walk::borel_deviation(bits, m);
      for (const auto& [block, d] : dev) {
        long long count = std::llround((d + ideal) * static_cast<double>(nblocks));
        std::cout << i + 1 << "," << block << "," << count << "," << format_double(d) << "\n";
        max_abs = std::max(max_abs, std::abs(d));
      }
    }
    std::cerr << "max |deviation| = " << format_double(max_abs) << "\n";
  }
  return 0;
}

int run(int argc, char** argv) {
  CLI::App app{
      "ilrt: iterated-logarithm randomness testing over ±1 sequences.\n"
      "Exit codes: 0 ok, 1 failure, 2 usage, 3 data parse, 4 capacity, 5 domain, 6 I/O."};
  app.require_subcommand(1);

  std::string input = "-";
  std::string format = "appendix";
  std::size_t length = 10000;
  double epsilon = 0.1;
  std::size_t start_index = 3;
  double alpha = 1.0 - 1e-10;
  std::string mode = "log";
  std::string out = "json";

  auto add_input = [&](CLI::App* cmd) {
    cmd->add_option("input", input, "input path, or '-' for stdin")->required();
    cmd->add_option("--format", format, "input format")
        ->check(CLI::IsMember({"appendix", "bits", "bytes"}))
        ->capture_default_str();
    cmd->add_option("--length", length, "bits per record")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
  };

  auto* ingest = app.add_subcommand("ingest", "summarize a corpus");
  add_input(ingest);
  bool strict = false;
  ingest->add_flag("--strict-length", strict,
                   "reject records whose binary expansion exceeds --length");
  ingest->add_option("--out", out, "output form")->check(CLI::IsMember({"json", "text"}));

  auto* lil = app.add_subcommand("lil", "per-record band-hit counters and their histogram");
  add_input(lil);
  lil->add_option("--epsilon", epsilon, "band half-width")->capture_default_str();
  lil->add_option("--start-index", start_index, "first index checked")->capture_default_str();
  lil->add_option("--out", out, "output form")->check(CLI::IsMember({"json", "csv"}));
  bool replicate_bug = false;
  lil->add_flag("--replicate-listing-bug", replicate_bug,
                "reuse the first record's ratio list for every record, reproducing a known "
                "indexing slip in a historical analysis script");

  auto* model = app.add_subcommand("model", "theoretical counter distribution");
  model->add_option("--length", length, "horizon N")->check(CLI::PositiveNumber)->capture_default_str();
  model->add_option("--epsilon", epsilon, "band half-width")->capture_default_str();
  std::string m_spec = "0";
  model->add_option("--m", m_spec, "counter values: e.g. '0', '0..8', '1,3,5'")
      ->capture_default_str();
  std::string strategy = "dp";
  model->add_option("--strategy", strategy, "evaluation strategy for m >= 1")
      ->check(CLI::IsMember({"dp", "enumerate"}))
      ->capture_default_str();
  model->add_option("--mode", mode, "numeric backend")
      ->check(CLI::IsMember({"log", "exact"}))
      ->capture_default_str();
  model->add_option("--out", out, "output form")->check(CLI::IsMember({"json", "csv"}));

  auto* decide = app.add_subcommand("decide", "chi-squared decision on an observed zero-count");
  std::size_t f_tilde = 44;
  std::size_t n_exp = 100;
  decide->add_option("--f-tilde", f_tilde, "observed zero-counter count")->capture_default_str();
  decide->add_option("--n", n_exp, "number of experiments")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  decide->add_option("--length", length, "horizon N")->check(CLI::PositiveNumber)->capture_default_str();
  decide->add_option("--epsilon", epsilon, "band half-width")->capture_default_str();
  decide->add_option("--alpha", alpha, "confidence coefficient")->capture_default_str();
  decide->add_option("--mode", mode, "numeric backend")
      ->check(CLI::IsMember({"log", "exact"}))
      ->capture_default_str();

  auto* vmc = app.add_subcommand("vmc", "betting game and place-selection extraction");
  add_input(vmc);
  std::string rule_name = "constant-select";
  vmc->add_option("--rule", rule_name, "selection rule")
      ->check(CLI::IsMember(ilrt::vmc::rule_names()))
      ->capture_default_str();
  std::size_t budget = 1000000;
  vmc->add_option("--budget", budget, "step budget per evaluation")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  std::size_t horizon = 0;
  vmc->add_option("--horizon", horizon, "truncate records to this many symbols (0 = all)")
      ->capture_default_str();
  std::size_t record_pick = 0;
  vmc->add_option("--record", record_pick, "single record to analyze (0 = all)")
      ->capture_default_str();
  bool full = false;
  vmc->add_flag("--full", full, "include the per-turn ledger");

  auto* borel = app.add_subcommand("borel", "block-frequency deviations from 2^-m");
  add_input(borel);
  std::size_t block_m = 1;
  borel->add_option("--m", block_m, "block length")->check(CLI::PositiveNumber)->capture_default_str();
  std::string borel_out = "csv";
  borel->add_option("--out", borel_out, "output form")->check(CLI::IsMember({"csv", "json"}));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : kExitUsage;
  }

  if (app.got_subcommand(ingest)) return cmd_ingest(input, format, length, strict, out);
  if (app.got_subcommand(lil)) {
    return cmd_lil(input, format, length, epsilon, start_index, out, replicate_bug);
  }
  if (app.got_subcommand(model)) return cmd_model(length, epsilon, m_spec, strategy, mode, out);
  if (app.got_subcommand(decide)) return cmd_decide(f_tilde, n_exp, length, epsilon, alpha, mode);
  if (app.got_subcommand(vmc)) {
    return cmd_vmc(input, format, length, rule_name, budget, horizon, record_pick, full);
  }
  if (app.got_subcommand(borel)) return cmd_borel(input, format, length, block_m, borel_out);
  return kExitUsage;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const IoError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitIo;
  } catch (const ilrt::ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitParse;
  } catch (const ilrt::OverflowError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitParse;
  } catch (const ilrt::CapacityError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitCapacity;
  } catch (const ilrt::DomainError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitDomain;
  } catch (const ilrt::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitFailure;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitFailure;
  }
}
