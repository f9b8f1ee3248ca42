/*
 * Copyright 2026 The specdiff Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *      http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

// Command-line front end. Exit codes: 0 success, 1 equivalence failure,
// 2 usage, parse, or validation error.

#ifndef SPECDIFF_TOOLS_CLI_HPP
#define SPECDIFF_TOOLS_CLI_HPP

#include <cctype>
#include <cstdint>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "specdiff/specdiff.hpp"

namespace specdiff::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;
inline constexpr int kExitUsage = 2;

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct SigSource {
  std::string suite;
  std::string path;
};

struct Loaded {
  Signature sig;
  std::optional<SuiteEntry> suite;
};

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw UsageError("cannot read '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// Resolves --suite / --sig. A signature file is matched to the bundled suite
// with the same signature name, when there is one.
inline Loaded load(const SigSource& src) {
  if (src.suite.empty() == src.path.empty()) throw UsageError("exactly one of --suite or --sig is required");
  Loaded out;
  if (!src.suite.empty()) {
    out.suite = find_suite(src.suite);
    out.sig = parse_signature(out.suite->signature_text);
  } else {
    out.sig = parse_signature(read_file(src.path));
    for (auto& s : list_suites())
      if (s.name == out.sig.name) out.suite = s;
  }
  validate_signature(out.sig);
  return out;
}

inline std::uint64_t default_seed() {
  if (const char* env = std::getenv("SPECDIFF_SEED")) {
    try {
      std::size_t used = 0;
      std::uint64_t v = std::stoull(env, &used);
      if (used == std::string(env).size()) return v;
    } catch (const std::exception&) {
    }
    throw UsageError(std::string("SPECDIFF_SEED is not an unsigned integer: '") + env + "'");
  }
  return 0;
}

inline void add_source(CLI::App* cmd, SigSource& src) {
  cmd->add_option("--suite", src.suite, "Bundled suite name");
  cmd->add_option("--sig", src.path, "Signature file");
}

inline std::string upper(std::string s) {
  for (auto& c : s) c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
  return s;
}

inline int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Differential property-based testing of two implementations of a signature"};
  app.name("specdiff");
  app.require_subcommand(1);

  SigSource src;
  std::string impl_a, impl_b, report_path, type_text, bench_output, summarize_path;
  std::size_t trials = 1000, count = 10, size = 10, runs = 1000, trial_cap = 10000, jobs = 1;
  std::optional<std::uint64_t> seed;
  GenConfig gen;
  bool stop_on_failure = false;

  auto* check = app.add_subcommand("check", "Test two implementations for observational equivalence");
  add_source(check, src);
  check->add_option("--impl-a", impl_a, "First implementation")->required();
  check->add_option("--impl-b", impl_b, "Second implementation")->required();
  check->add_option("--trials", trials, "Number of trials")->capture_default_str();
  check->add_option("--seed", seed, "Campaign seed (default: $SPECDIFF_SEED or 0)");
  check->add_option("--max-size", gen.max_size, "Largest generator size")->capture_default_str();
  check->add_option("--seq-prob", gen.seq_probability, "Probability of a seq node")
      ->check(CLI::Range(0.0, 1.0))
      ->capture_default_str();
  check->add_option("--report", report_path, "JSON Lines report path ('-' for standard output)");
  check->add_flag("--stop-on-failure", stop_on_failure, "Stop at the first failing trial");
  check->add_option("--jobs", jobs, "Worker threads")->check(CLI::PositiveNumber);

  auto* sample = app.add_subcommand("sample", "Print random expressions of a type");
  add_source(sample, src);
  sample->add_option("--type", type_text, "Target type, e.g. 'bool' or 'int list'")->required();
  sample->add_option("--count", count)->capture_default_str();
  sample->add_option("--size", size)->capture_default_str();
  sample->add_option("--seed", seed);
  sample->add_option("--seq-prob", gen.seq_probability)->check(CLI::Range(0.0, 1.0));

  auto* validate = app.add_subcommand("validate", "Parse and validate a signature");
  add_source(validate, src);

  auto* bench = app.add_subcommand("bench", "Trials-to-failure of every bug variant of a suite");
  bench->add_option("--suite", src.suite, "Bundled suite name")->required();
  bench->add_option("--runs", runs)->capture_default_str();
  bench->add_option("--trial-cap", trial_cap)->capture_default_str();
  bench->add_option("--seed", seed, "Base seed");
  bench->add_option("--max-size", gen.max_size)->capture_default_str();
  bench->add_option("--seq-prob", gen.seq_probability)->check(CLI::Range(0.0, 1.0));
  bench->add_option("--output", bench_output, "JSON Lines file with one summary per run");
  bench->add_option("--jobs", jobs)->check(CLI::PositiveNumber);

  auto* summarize_cmd = app.add_subcommand("summarize", "Summarize a JSON Lines report");
  summarize_cmd->add_option("report", summarize_path, "Report file")->required();

  auto* suites = app.add_subcommand("suites", "List bundled suites and implementations");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (*check) {
      Loaded l = load(src);
      if (!l.suite) throw UsageError("no bundled implementations for signature '" + l.sig.name + "'");
      gen.seed = seed ? *seed : default_seed();
      RunOptions opts;
      opts.stop_on_failure = stop_on_failure;
      opts.jobs = jobs;
      CampaignResult r =
          run_differential(l.sig, find_factory(*l.suite, impl_a), find_factory(*l.suite, impl_b), trials, gen, opts);

      std::ostream& text = report_path == "-" ? err : out;
      if (report_path == "-") {
        emit_campaign(r, out);
      } else if (!report_path.empty()) {
        std::ofstream f(report_path, std::ios::binary | std::ios::trunc);
        if (!f) throw UsageError("cannot write '" + report_path + "'");
        emit_campaign(r, f);
      }
      for (const auto& f : r.failures) {
        text << "FAIL trial " << f.record.trial_index << " at " << to_string(f.record.observable_type) << "\n"
             << "  expr:   " << f.record.expr_text << "\n"
             << "  shrunk: " << f.shrunk_expr_text << "\n"
             << "  " << impl_a << ": " << f.record.outcome_a << "\n"
             << "  " << impl_b << ": " << f.record.outcome_b << "\n";
      }
      text << r.label << ": " << r.total_trials << " trial(s), " << r.failures.size() << " failure(s)";
      if (r.harness_bugs) text << ", " << r.harness_bugs << " harness bug(s)";
      if (r.trials_to_first_failure) text << ", first failure after " << *r.trials_to_first_failure << " trial(s)";
      text << "\n";
      return r.failures.empty() && r.harness_bugs == 0 ? kExitOk : kExitFailure;
    }

    if (*sample) {
      Loaded l = load(src);
      Ty ty = parse_type(type_text);
      auto observable = validate_signature(l.sig).observable_types;
      if (!ty.is_abstract() && std::find(observable.begin(), observable.end(), ty) == observable.end())
        throw UsageError("type '" + to_string(ty) + "' is not produced by any op of " + l.sig.name);
      gen.seed = seed ? *seed : default_seed();
      ExprGenerator g(l.sig, gen);
      Rng rng(gen.seed);
      for (std::size_t i = 0; i < count; ++i) out << to_text(g(ty, size, rng)) << "\n";
      return kExitOk;
    }

    if (*validate) {
      Loaded l = load(src);
      auto report = validate_signature(l.sig);
      out << "signature " << l.sig.name << ": " << l.sig.ops.size() << " op(s)"
          << (l.sig.is_mutable ? ", mutable" : "") << "\nobservable types:";
      for (const auto& t : report.observable_types) out << " [" << to_string(t) << "]";
      out << "\n";
      return kExitOk;
    }

    if (*bench) {
      SuiteEntry suite = find_suite(src.suite);
      Signature sig = parse_signature(suite.signature_text);
      validate_signature(sig);
      std::uint64_t base = seed ? *seed : default_seed();
      const NamedImpl& ref = suite.implementations.front();

      std::vector<std::pair<std::string, std::vector<std::optional<std::size_t>>>> columns;
      std::ofstream jsonl;
      if (!bench_output.empty()) {
        jsonl.open(bench_output, std::ios::binary | std::ios::trunc);
        if (!jsonl) throw UsageError("cannot write '" + bench_output + "'");
      }
      for (const auto& bug : suite.bug_variants) {
        BenchStats stats = bench_trials_to_failure(sig, ref.make, bug.make, runs, trial_cap, base, gen, jobs);
        if (jsonl.is_open()) {
          for (std::size_t r = 0; r < stats.per_run.size(); ++r) {
            CampaignResult c;
            c.signature_name = sig.name;
            c.label = campaign_label(ref.name, bug.name);
            c.seed = base + r;
            c.trials_to_first_failure = stats.per_run[r];
            c.total_trials = stats.per_run[r].value_or(trial_cap);
            if (stats.per_run[r]) c.failures.emplace_back();
            emit_campaign(c, jsonl);
          }
        }
        columns.emplace_back(upper(bug.name), std::move(stats.per_run));
      }
      out << suite.name << ": trials to first failure against " << ref.name << " (" << runs << " runs, cap "
          << trial_cap << ")\n"
          << render_ttf_table(columns);
      return kExitOk;
    }

    if (*summarize_cmd) {
      std::ifstream in(summarize_path, std::ios::binary);
      if (!in) throw UsageError("cannot read '" + summarize_path + "'");
      out << summarize(in);
      return kExitOk;
    }

    if (*suites) {
      for (const auto& s : list_suites()) {
        out << s.name << "\n";
        for (const auto& i : s.implementations) out << "  " << i.name << "  " << i.description << "\n";
        for (const auto& b : s.bug_variants) out << "  " << b.name << "  (bug) " << b.description << "\n";
      }
      return kExitOk;
    }
  } catch (const ParseError& e) {
    err << "specdiff: parse error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const ValidationError& e) {
    err << "specdiff: invalid signature: " << e.what() << "\n";
    return kExitUsage;
  } catch (const UnknownName& e) {
    err << "specdiff: " << e.what() << "\n";
    return kExitUsage;
  } catch (const UsageError& e) {
    err << "specdiff: " << e.what() << "\n";
    return kExitUsage;
  } catch (const ReportFormatError& e) {
    err << "specdiff: malformed report: " << e.what() << "\n";
    return kExitUsage;
  } catch (const ReportIoError& e) {
    err << "specdiff: " << e.what() << "\n";
    return kExitUsage;
  }
  return kExitUsage;
}

inline int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  std::vector<const char*> argv{"specdiff"};
  for (const auto& a : args) argv.push_back(a.c_str());
  return run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
}

}  // namespace specdiff::cli

#endif  // SPECDIFF_TOOLS_CLI_HPP
