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

#include <gtest/gtest.h>

#include <string>
#include <vector>

#include "specdiff/generator.hpp"
#include "specdiff/interp.hpp"
#include "specdiff/suite.hpp"

namespace specdiff {
namespace {

constexpr std::string_view kStackSig = R"(
signature stack
abstract t
op empty : t
op push : int -> t -> t
op pop : t -> t
op top : t -> int
op map : (int -> int) -> t -> t
op depth : t -> int
end
)";

// Persistent stack; pop and top on an empty stack fail with "empty".
// Every applied op name is logged so tests can see evaluation order.
class Stack final : public Implementation {
 public:
  explicit Stack(bool bad_depth = false) : bad_depth_(bad_depth) {}
  std::string name() const override { return "stack"; }
  void reset() override { store_.clear(); log.clear(); }

  Outcome apply(std::string_view op, std::span<const Value> a) override {
    log.emplace_back(op);
    using S = std::vector<std::int64_t>;
    if (op == "empty") return Outcome::success(store_.put({}));
    if (op == "push") {
      S s = store_.get(a[1]);
      s.push_back(a[0].i);
      return Outcome::success(store_.put(std::move(s)));
    }
    if (op == "pop" || op == "top") {
      S s = store_.get(a[0]);
      if (s.empty()) return Outcome::failure("empty");
      if (op == "top") return Outcome::success(Value::integer(s.back()));
      s.pop_back();
      return Outcome::success(store_.put(std::move(s)));
    }
    if (op == "map") {
      S s = store_.get(a[1]);
      for (auto& x : s) x = a[0].call(x);
      return Outcome::success(store_.put(std::move(s)));
    }
    if (op == "depth") {
      if (bad_depth_) return Outcome::success(Value::boolean(true));
      return Outcome::success(Value::integer(static_cast<std::int64_t>(store_.get(a[0]).size())));
    }
    impl::unknown_op(name(), op);
  }

  std::vector<std::string> log;

 private:
  bool bad_depth_;
  impl::HandleStore<std::vector<std::int64_t>> store_;
};

Outcome run(std::string_view text, Implementation& impl, const Signature& sig) {
  impl.reset();
  return interp(from_text(text, sig), impl, sig);
}

TEST(Interp, SetExamples) {
  Signature sig = parse_signature(kFiniteSetSig);
  impl::ListSet set;
  EXPECT_EQ(to_text(run("(mem 3 (insert 3 (empty)))", set, sig)), "ok true");
  EXPECT_EQ(to_text(run("(mem 4 (remove 4 (insert 4 (empty))))", set, sig)), "ok false");
  EXPECT_EQ(to_text(run("(to_list (union (insert 2 (empty)) (insert 1 (insert 2 (empty)))))", set, sig)),
            "ok (list 1 2)");
  EXPECT_EQ(to_text(run("(size (insert 1 (insert 1 (empty))))", set, sig)), "ok 1");
}

TEST(Interp, CounterSequencing) {
  Signature sig = parse_signature(kCounterSig);
  impl::IntCounter c;
  EXPECT_EQ(to_text(run("(seq (incr) (get))", c, sig)), "ok 1");
  EXPECT_EQ(to_text(run("(seq (add 5) (seq (incr) (is_zero)))", c, sig)), "ok false");
  EXPECT_EQ(to_text(run("(get)", c, sig)), "ok 0");
  EXPECT_EQ(to_text(run("(seq (get) (incr))", c, sig)), "ok unit");
}

TEST(Interp, FunctionArgumentsAreApplied) {
  Signature sig = parse_signature(kStackSig);
  Stack s;
  EXPECT_EQ(to_text(run("(top (map (fn (mul var var)) (push 7 (empty))))", s, sig)), "ok 49");
  EXPECT_EQ(to_text(run("(top (map (fn (sub 0 var)) (push 7 (empty))))", s, sig)), "ok -7");
}

TEST(Interp, FailureTagPropagatesAndShortCircuits) {
  Signature sig = parse_signature(kStackSig);
  Stack s;
  Outcome o = run("(depth (push 1 (pop (empty))))", s, sig);
  EXPECT_FALSE(o.ok);
  EXPECT_EQ(o.tag, "empty");
  EXPECT_EQ(to_text(o), "failed empty");
  // push and depth never ran
  EXPECT_EQ(s.log, (std::vector<std::string>{"empty", "pop"}));
}

TEST(Interp, EvaluationIsLeftToRight) {
  Signature sig = parse_signature(kFiniteSetSig);
  Signature stack = parse_signature(kStackSig);
  Stack s;
  run("(top (push 1 (push 2 (empty))))", s, stack);
  EXPECT_EQ(s.log, (std::vector<std::string>{"empty", "push", "push", "top"}));

  // In a two-argument op the left subtree is evaluated fully first.
  struct Recorder final : Implementation {
    impl::ListSet inner;
    std::vector<std::string> log;
    std::string name() const override { return "recorder"; }
    void reset() override { inner.reset(); log.clear(); }
    Outcome apply(std::string_view op, std::span<const Value> a) override {
      std::string entry(op);
      for (const auto& v : a)
        if (v.kind == Value::Kind::Int) entry += " " + std::to_string(v.i);
      log.push_back(entry);
      return inner.apply(op, a);
    }
  } rec;
  run("(union (insert 1 (empty)) (insert 2 (empty)))", rec, sig);
  EXPECT_EQ(rec.log, (std::vector<std::string>{"empty", "insert 1", "empty", "insert 2", "union"}));
}

TEST(Interp, SeqStopsAtFailingFirstArm) {
  // counter ops never fail, so build a mutable stack-like signature
  Signature sig = parse_signature("signature m\nmutable\nabstract t\nop boom : unit\nop get : int\nend");
  struct Boom final : Implementation {
    int gets = 0;
    std::string name() const override { return "boom"; }
    void reset() override { gets = 0; }
    Outcome apply(std::string_view op, std::span<const Value>) override {
      if (op == "boom") return Outcome::failure("boom");
      ++gets;
      return Outcome::success(Value::integer(gets));
    }
  } b;
  Outcome o = run("(seq (boom) (get))", b, sig);
  EXPECT_EQ(to_text(o), "failed boom");
  EXPECT_EQ(b.gets, 0);
}

TEST(Interp, ShapeMismatchIsHarnessBug) {
  Signature sig = parse_signature(kStackSig);
  Stack bad(true);
  bad.reset();
  EXPECT_THROW(interp(from_text("(depth (empty))", sig), bad, sig), HarnessBug);
}

TEST(OutcomeEqual, ConcreteComparisons) {
  Ty il = Ty::list(Ty::integer());
  auto l = [](std::vector<std::int64_t> xs) { return Outcome::success(impl::int_list(xs)); };
  EXPECT_TRUE(outcome_equal(l({1, 2}), l({1, 2}), il));
  EXPECT_FALSE(outcome_equal(l({1, 2}), l({2, 1}), il));
  EXPECT_FALSE(outcome_equal(l({1}), l({1, 1}), il));
  Ty oi = Ty::option(Ty::integer());
  EXPECT_TRUE(outcome_equal(Outcome::success(Value::none()), Outcome::success(Value::none()), oi));
  EXPECT_FALSE(outcome_equal(Outcome::success(Value::none()), Outcome::success(Value::some(Value::integer(0))), oi));
  EXPECT_TRUE(outcome_equal(Outcome::failure("x"), Outcome::failure("x"), Ty::integer()));
  EXPECT_FALSE(outcome_equal(Outcome::failure("x"), Outcome::failure("y"), Ty::integer()));
  EXPECT_FALSE(outcome_equal(Outcome::failure("x"), Outcome::success(Value::integer(0)), Ty::integer()));
  EXPECT_TRUE(outcome_equal(Outcome::success(Value::unit()), Outcome::success(Value::unit()), Ty::unit()));
  EXPECT_TRUE(outcome_equal(Outcome::success(Value::string("a\"")), Outcome::success(Value::string("a\"")),
                            Ty::string()));
}

TEST(OutcomeEqual, AbstractIsRejectedAndCounted) {
  auto before = abstract_comparison_count();
  EXPECT_THROW(outcome_equal(Outcome::success(Value::abstract(0)), Outcome::success(Value::abstract(0)),
                             Ty::abstract()),
               std::logic_error);
  EXPECT_EQ(abstract_comparison_count(), before + 1);
}

TEST(Interp, EveryImplementationAgreesWithItself) {
  for (const auto& suite : list_suites()) {
    Signature sig = parse_signature(suite.signature_text);
    ExprGenerator gen(sig, GenConfig{});
    auto observable = validate_signature(sig).observable_types;
    std::vector<NamedImpl> all = suite.implementations;
    all.insert(all.end(), suite.bug_variants.begin(), suite.bug_variants.end());
    for (const auto& ni : all) {
      auto a = ni.make();
      auto b = ni.make();
      Rng rng(17);
      for (int i = 0; i < 300; ++i) {
        const Ty& ty = observable[static_cast<std::size_t>(i) % observable.size()];
        Expr e = gen(ty, static_cast<std::size_t>(i % 31), rng);
        a->reset();
        b->reset();
        Outcome oa = interp(e, *a, sig);
        Outcome ob = interp(e, *b, sig);
        ASSERT_TRUE(outcome_equal(oa, ob, ty)) << ni.name << " " << to_text(e);
        ASSERT_TRUE(!oa.ok || value_has_type(oa.value, ty));
      }
    }
  }
}

}  // namespace
}  // namespace specdiff
