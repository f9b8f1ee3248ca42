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

#ifndef SPECDIFF_HARNESS_HPP
#define SPECDIFF_HARNESS_HPP

#include <algorithm>
#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <thread>
#include <tuple>
#include <utility>
#include <vector>

#include "specdiff/expr.hpp"
#include "specdiff/generator.hpp"
#include "specdiff/interp.hpp"
#include "specdiff/rng.hpp"
#include "specdiff/signature.hpp"

namespace specdiff {

enum class TrialStatus { Passed, Failed, HarnessBug };

inline const char* to_string(TrialStatus s) {
  switch (s) {
    case TrialStatus::Passed: return "passed";
    case TrialStatus::Failed: return "failed";
    case TrialStatus::HarnessBug: return "harness_bug";
  }
  return "?";
}

struct TrialRecord {
  std::size_t trial_index = 0;
  Ty observable_type;
  std::string expr_text;
  std::size_t depth = 0;
  std::size_t size = 0;
  std::size_t num_seq = 0;
  std::uint64_t seed = 0;  // per-trial generator seed
  TrialStatus status = TrialStatus::Passed;
  // Rendered outcomes; set for failed and harness_bug trials.
  std::string outcome_a;
  std::string outcome_b;
};

struct Failure {
  TrialRecord record;
  std::string shrunk_expr_text;
};

struct CampaignResult {
  std::string signature_name;
  std::string label;  // "<impl_a>-vs-<impl_b>"
  std::size_t total_trials = 0;
  std::vector<TrialRecord> records;  // empty when records are not kept
  std::vector<Failure> failures;
  std::size_t harness_bugs = 0;
  // 1-based count of trials up to and including the first failure.
  std::optional<std::size_t> trials_to_first_failure;
  std::vector<std::pair<Ty, std::size_t>> per_type_counts;
  std::uint64_t seed = 0;
};

struct RunOptions {
  bool stop_on_failure = false;
  bool shrink = true;
  bool keep_records = true;
  std::size_t jobs = 1;
};

// Resets both implementations and reports whether they disagree on `e`.
// Contract violations count as agreement here; the trial loop reports them.
inline bool fails(const Expr& e, const Ty& ty, const Signature& sig, Implementation& a, Implementation& b) {
  try {
    a.reset();
    b.reset();
    Outcome oa = interp(e, a, sig);
    Outcome ob = interp(e, b, sig);
    return !outcome_equal(oa, ob, ty);
  } catch (const HarnessBug&) {
    return false;
  }
}

namespace detail {

using Rewrite = std::function<std::vector<Expr>(const Expr&, const Ty&)>;
using ArgRewrite = std::function<std::vector<Arg>(const Arg&, const Ty&)>;

// Every tree obtained from `e` by applying `node` at one expression node or
// `arg` at one literal/function argument, in pre-order.
inline void variants(const Expr& e, const Ty& ty, const Signature& sig, const Rewrite& node, const ArgRewrite& arg,
                     std::vector<Expr>& out) {
  if (node)
    for (auto& r : node(e, ty)) out.push_back(std::move(r));
  if (e.is_seq()) {
    for (std::size_t side = 0; side < 2; ++side) {
      const Ty arm_ty = side == 0 ? type_of(e.arms[0], sig) : ty;
      std::vector<Expr> sub;
      variants(e.arms[side], arm_ty, sig, node, arg, sub);
      for (auto& s : sub) {
        Expr copy = e;
        copy.arms[side] = std::move(s);
        out.push_back(std::move(copy));
      }
    }
    return;
  }
  const OpDecl* op = sig.find(e.op);
  for (std::size_t i = 0; i < e.args.size(); ++i) {
    const Arg& a = e.args[i];
    if (a.kind == Arg::Kind::Sub) {
      std::vector<Expr> sub;
      variants(a.expr(), op->args[i], sig, node, arg, sub);
      for (auto& s : sub) {
        Expr copy = e;
        copy.args[i].expr() = std::move(s);
        out.push_back(std::move(copy));
      }
    } else if (arg) {
      for (auto& r : arg(a, op->args[i])) {
        Expr copy = e;
        copy.args[i] = std::move(r);
        out.push_back(std::move(copy));
      }
    }
  }
}

inline void collect_subexprs(const Expr& e, std::vector<const Expr*>& out) {
  if (e.is_seq()) {
    for (const auto& arm : e.arms) {
      out.push_back(&arm);
      collect_subexprs(arm, out);
    }
    return;
  }
  for (const auto& a : e.args) {
    if (a.kind != Arg::Kind::Sub) continue;
    out.push_back(&a.expr());
    collect_subexprs(a.expr(), out);
  }
}

// Literal variants with one integer (at any nesting) set to 0 or halved.
inline void int_variants(const Literal& lit, std::vector<Literal>& out) {
  if (lit.kind == Literal::Kind::Int) {
    if (lit.i != 0) out.push_back(Literal::integer(0));
    if (lit.i / 2 != 0) out.push_back(Literal::integer(lit.i / 2));
    return;
  }
  for (std::size_t i = 0; i < lit.elems.size(); ++i) {
    std::vector<Literal> sub;
    int_variants(lit.elems[i], sub);
    for (auto& s : sub) {
      Literal copy = lit;
      copy.elems[i] = std::move(s);
      out.push_back(std::move(copy));
    }
  }
}

inline Literal zero_literal(const Ty& ty) {
  switch (ty.kind) {
    case Ty::Kind::Int: return Literal::integer(0);
    case Ty::Kind::Bool: return Literal::boolean(false);
    case Ty::Kind::Char: return Literal::character('a');
    case Ty::Kind::Str: return Literal::string("");
    case Ty::Kind::List: return Literal::list({});
    case Ty::Kind::Option: return Literal::none();
    default: return Literal::unit();
  }
}

// The cheapest leaf constructor of `t`: fewest arguments, then declaration order.
inline std::optional<Expr> smallest_leaf(const Signature& sig) {
  const OpDecl* best = nullptr;
  for (const auto& op : sig.ops)
    if (op.ret.is_abstract() && op.is_leaf() && (!best || op.args.size() < best->args.size())) best = &op;
  if (!best) return std::nullopt;
  Expr e = Expr::call(best->name);
  for (const auto& a : best->args)
    e.args.push_back(a.is_fun() ? Arg::function(FnAst::var()) : Arg::literal(zero_literal(a)));
  return e;
}

inline std::uint64_t magnitude(const Literal& lit) {
  std::uint64_t m = 0;
  if (lit.kind == Literal::Kind::Int) m = lit.i < 0 ? 0 - static_cast<std::uint64_t>(lit.i) : lit.i;
  for (const auto& e : lit.elems) m += magnitude(e);
  return m;
}

inline std::uint64_t magnitude(const FnAst& f) {
  std::uint64_t m = 0;
  if (f.kind == FnAst::Kind::Const) m = f.k < 0 ? 0 - static_cast<std::uint64_t>(f.k) : f.k;
  for (const auto& k : f.kids) m += magnitude(k);
  return m;
}

// Shrinking order: fewer nodes, then smaller functions, then smaller ints.
using ShrinkKey = std::tuple<std::size_t, std::size_t, std::uint64_t>;

inline void accumulate_key(const Expr& e, std::size_t& fn_size, std::uint64_t& mag) {
  if (e.is_seq()) {
    for (const auto& arm : e.arms) accumulate_key(arm, fn_size, mag);
    return;
  }
  for (const auto& a : e.args) {
    switch (a.kind) {
      case Arg::Kind::Lit: mag += magnitude(a.lit); break;
      case Arg::Kind::Fn:
        fn_size += fn_nodes(a.fn);
        mag += magnitude(a.fn);
        break;
      case Arg::Kind::Sub: accumulate_key(a.expr(), fn_size, mag); break;
    }
  }
}

inline ShrinkKey shrink_key(const Expr& e) {
  std::size_t fn_size = 0;
  std::uint64_t mag = 0;
  accumulate_key(e, fn_size, mag);
  return {size_of(e), fn_size, mag};
}

}  // namespace detail

inline constexpr std::size_t kMaxShrinkSteps = 1000;

// Greedy first-improvement shrinking. Candidate families, tried in order:
//   1. a same-typed subexpression replaces the whole expression
//   2. (seq f s) becomes s, or f when the types agree
//   3. a t-typed subtree becomes the smallest leaf constructor
//   4. an int literal becomes 0, then half its value
//   5. a function body becomes var, then the constant 0
// A candidate is accepted only if it still fails and strictly lowers
// shrink_key, so the result is a fixpoint and shrinking it again is a no-op.
inline Expr shrink(const Expr& e, const Ty& ty, const Signature& sig, Implementation& a, Implementation& b) {
  using namespace detail;
  const std::optional<Expr> leaf = smallest_leaf(sig);

  const Rewrite seq_arms = [&](const Expr& node, const Ty&) {
    std::vector<Expr> out;
    if (!node.is_seq()) return out;
    out.push_back(node.arms[1]);
    if (type_of(node.arms[0], sig) == type_of(node.arms[1], sig)) out.push_back(node.arms[0]);
    return out;
  };
  const Rewrite to_leaf = [&](const Expr& node, const Ty& node_ty) {
    std::vector<Expr> out;
    if (leaf && node_ty.is_abstract() && !(node == *leaf)) out.push_back(*leaf);
    return out;
  };
  const ArgRewrite ints = [](const Arg& arg, const Ty&) {
    std::vector<Arg> out;
    if (arg.kind != Arg::Kind::Lit) return out;
    std::vector<Literal> lits;
    int_variants(arg.lit, lits);
    for (auto& l : lits) out.push_back(Arg::literal(std::move(l)));
    return out;
  };
  const ArgRewrite fns = [](const Arg& arg, const Ty&) {
    std::vector<Arg> out;
    if (arg.kind != Arg::Kind::Fn) return out;
    out.push_back(Arg::function(FnAst::var()));
    out.push_back(Arg::function(FnAst::constant(0)));
    return out;
  };

  Expr current = e;
  ShrinkKey current_key = shrink_key(current);
  for (std::size_t step = 0; step < kMaxShrinkSteps; ++step) {
    std::vector<Expr> candidates;
    std::vector<const Expr*> subs;
    collect_subexprs(current, subs);
    for (const Expr* s : subs)
      if (type_of(*s, sig) == ty) candidates.push_back(*s);
    variants(current, ty, sig, seq_arms, nullptr, candidates);
    variants(current, ty, sig, to_leaf, nullptr, candidates);
    variants(current, ty, sig, nullptr, ints, candidates);
    variants(current, ty, sig, nullptr, fns, candidates);

    bool improved = false;
    for (auto& c : candidates) {
      ShrinkKey k = shrink_key(c);
      if (!(k < current_key)) continue;
      if (!fails(c, ty, sig, a, b)) continue;
      current = std::move(c);
      current_key = k;
      improved = true;
      break;
    }
    if (!improved) break;
  }
  return current;
}

namespace detail {

struct TrialContext {
  const Signature& sig;
  const std::vector<Ty>& observables;
  const ExprGenerator& gen;
  const RunOptions& opts;
};

inline Failure run_trial(std::size_t index, const TrialContext& ctx, Implementation& a, Implementation& b) {
  const GenConfig& cfg = ctx.gen.config();
  TrialRecord rec;
  rec.trial_index = index;
  rec.observable_type = ctx.observables[index % ctx.observables.size()];
  rec.seed = trial_seed(cfg.seed, index);
  Rng rng(rec.seed);
  Expr e = ctx.gen(rec.observable_type, size_schedule(index, cfg), rng);
  rec.expr_text = to_text(e);
  rec.depth = depth(e);
  rec.size = size_of(e);
  rec.num_seq = num_seq(e);

  Failure out;
  try {
    a.reset();
    b.reset();
    Outcome oa = interp(e, a, ctx.sig);
    Outcome ob = interp(e, b, ctx.sig);
    if (!outcome_equal(oa, ob, rec.observable_type)) {
      rec.status = TrialStatus::Failed;
      rec.outcome_a = to_text(oa);
      rec.outcome_b = to_text(ob);
      out.shrunk_expr_text =
          ctx.opts.shrink ? to_text(shrink(e, rec.observable_type, ctx.sig, a, b)) : rec.expr_text;
    }
  } catch (const HarnessBug& bug) {
    rec.status = TrialStatus::HarnessBug;
    rec.outcome_a = bug.what();
  }
  out.record = std::move(rec);
  return out;
}

}  // namespace detail

inline std::string campaign_label(const std::string& a, const std::string& b) { return a + "-vs-" + b; }

// Differential campaign over implementations created by the two factories.
// With opts.jobs > 1 trials run on worker threads, each owning its own pair
// of implementations; results are identical to a sequential run.
inline CampaignResult run_differential(const Signature& sig, const ImplFactory& make_a, const ImplFactory& make_b,
                                       std::size_t trials, const GenConfig& cfg, const RunOptions& opts = {}) {
  const std::vector<Ty> observables = validate_signature(sig).observable_types;
  const ExprGenerator gen(sig, cfg);
  const detail::TrialContext ctx{sig, observables, gen, opts};

  std::size_t jobs = std::max<std::size_t>(1, opts.jobs);
  std::vector<std::unique_ptr<Implementation>> as, bs;
  for (std::size_t j = 0; j < jobs; ++j) {
    as.push_back(make_a());
    bs.push_back(make_b());
  }

  CampaignResult result;
  result.signature_name = sig.name;
  result.label = campaign_label(as[0]->name(), bs[0]->name());
  result.seed = cfg.seed;
  for (const auto& t : observables) result.per_type_counts.emplace_back(t, 0);

  const std::size_t block = jobs == 1 ? 1 : 64 * jobs;
  std::vector<Failure> slots;
  for (std::size_t start = 0; start < trials; start += block) {
    std::size_t n = std::min(block, trials - start);
    slots.assign(n, {});
    if (jobs == 1) {
      slots[0] = detail::run_trial(start, ctx, *as[0], *bs[0]);
    } else {
      std::vector<std::thread> workers;
      for (std::size_t j = 0; j < jobs; ++j) {
        workers.emplace_back([&, j] {
          for (std::size_t k = j; k < n; k += jobs) slots[k] = detail::run_trial(start + k, ctx, *as[j], *bs[j]);
        });
      }
      for (auto& w : workers) w.join();
    }
    bool stop = false;
    for (auto& slot : slots) {
      TrialRecord& rec = slot.record;
      ++result.total_trials;
      result.per_type_counts[rec.trial_index % observables.size()].second++;
      if (rec.status == TrialStatus::HarnessBug) ++result.harness_bugs;
      if (rec.status == TrialStatus::Failed) {
        if (!result.trials_to_first_failure) result.trials_to_first_failure = rec.trial_index + 1;
        result.failures.push_back({rec, slot.shrunk_expr_text});
      }
      if (opts.keep_records) result.records.push_back(rec);
      if (rec.status == TrialStatus::Failed && opts.stop_on_failure) {
        stop = true;
        break;
      }
    }
    if (stop) break;
  }
  return result;
}

// Sequential campaign over two existing instances.
inline CampaignResult run_differential(const Signature& sig, Implementation& a, Implementation& b,
                                       std::size_t trials, const GenConfig& cfg, RunOptions opts = {}) {
  // Non-owning adapters so both entry points share one trial loop.
  struct Borrowed final : Implementation {
    explicit Borrowed(Implementation& i) : inner(i) {}
    std::string name() const override { return inner.name(); }
    void reset() override { inner.reset(); }
    Outcome apply(std::string_view op, std::span<const Value> args) override { return inner.apply(op, args); }
    Implementation& inner;
  };
  opts.jobs = 1;
  return run_differential(
      sig, [&] { return std::make_unique<Borrowed>(a); }, [&] { return std::make_unique<Borrowed>(b); }, trials, cfg,
      opts);
}

struct BenchStats {
  std::size_t runs = 0;
  std::vector<std::optional<std::size_t>> per_run;  // trials to first failure, by run
  std::optional<std::size_t> min;
  std::optional<std::size_t> max;
  std::optional<double> mean;
  double detection_rate = 0.0;
};

inline BenchStats summarize_runs(std::vector<std::optional<std::size_t>> per_run) {
  BenchStats s;
  s.runs = per_run.size();
  std::size_t detected = 0;
  double total = 0;
  for (const auto& r : per_run) {
    if (!r) continue;
    ++detected;
    total += static_cast<double>(*r);
    s.min = s.min ? std::min(*s.min, *r) : *r;
    s.max = s.max ? std::max(*s.max, *r) : *r;
  }
  if (detected) s.mean = total / static_cast<double>(detected);
  s.detection_rate = s.runs ? static_cast<double>(detected) / static_cast<double>(s.runs) : 0.0;
  s.per_run = std::move(per_run);
  return s;
}

// Trials-to-failure over `runs` campaigns seeded base_seed, base_seed + 1, ...
// Each campaign stops at its first failure or after trial_cap trials.
inline BenchStats bench_trials_to_failure(const Signature& sig, const ImplFactory& make_correct,
                                          const ImplFactory& make_buggy, std::size_t runs, std::size_t trial_cap,
                                          std::uint64_t base_seed, GenConfig cfg = {}, std::size_t jobs = 1) {
  RunOptions opts;
  opts.stop_on_failure = true;
  opts.shrink = false;
  opts.keep_records = false;
  std::vector<std::optional<std::size_t>> per_run(runs);
  auto one = [&](std::size_t r) {
    GenConfig c = cfg;
    c.seed = base_seed + r;
    per_run[r] = run_differential(sig, make_correct, make_buggy, trial_cap, c, opts).trials_to_first_failure;
  };
  jobs = std::max<std::size_t>(1, jobs);
  if (jobs == 1) {
    for (std::size_t r = 0; r < runs; ++r) one(r);
  } else {
    std::vector<std::thread> workers;
    for (std::size_t j = 0; j < jobs; ++j)
      workers.emplace_back([&, j] {
        for (std::size_t r = j; r < runs; r += jobs) one(r);
      });
    for (auto& w : workers) w.join();
  }
  return summarize_runs(std::move(per_run));
}

}  // namespace specdiff

#endif  // SPECDIFF_HARNESS_HPP
