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

// Test-only oracles. Nothing here calls the generator, the type checker or
// the shrinker; well-typed terms are built directly from op declarations.

#ifndef SPECDIFF_TESTS_ORACLES_HPP
#define SPECDIFF_TESTS_ORACLES_HPP

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "specdiff/specdiff.hpp"

namespace specdiff::oracle {

// Literal pools used for concrete argument positions.
struct Pools {
  std::vector<std::int64_t> ints{0, 1, 2};

  std::vector<Literal> literals(const Ty& ty) const {
    std::vector<Literal> out;
    switch (ty.kind) {
      case Ty::Kind::Int:
        for (auto i : ints) out.push_back(Literal::integer(i));
        break;
      case Ty::Kind::Bool:
        out = {Literal::boolean(false), Literal::boolean(true)};
        break;
      case Ty::Kind::Char: out = {Literal::character('a')}; break;
      case Ty::Kind::Str: out = {Literal::string("")}; break;
      case Ty::Kind::Unit: out = {Literal::unit()}; break;
      case Ty::Kind::List: out = {Literal::list({})}; break;
      case Ty::Kind::Option: out = {Literal::none()}; break;
      default: break;
    }
    return out;
  }
};

namespace detail {

// Cartesian product over per-argument choices.
inline void product(const std::vector<std::vector<Arg>>& choices, std::size_t i, std::vector<Arg>& cur,
                    const std::string& op, std::vector<Expr>& out) {
  if (i == choices.size()) {
    out.push_back(Expr::call(op, cur));
    return;
  }
  for (const auto& c : choices[i]) {
    cur.push_back(c);
    product(choices, i + 1, cur, op, out);
    cur.pop_back();
  }
}

}  // namespace detail

// All well-typed expressions of type `target` with depth <= max_depth.
class DepthEnumerator {
 public:
  DepthEnumerator(Signature sig, Pools pools) : sig_(std::move(sig)), pools_(std::move(pools)) {}

  const std::vector<Expr>& terms(const Ty& target, std::size_t max_depth) {
    auto key = std::make_pair(to_string(target), max_depth);
    if (auto it = memo_.find(key); it != memo_.end()) return it->second;
    std::vector<Expr> out;
    if (max_depth > 0) {
      for (const auto& op : sig_.ops) {
        if (!(op.ret == target)) continue;
        std::vector<std::vector<Arg>> choices;
        for (const auto& a : op.args) {
          std::vector<Arg> c;
          if (a.is_abstract()) {
            for (const auto& s : terms(a, max_depth - 1)) c.push_back(Arg::subexpr(s));
          } else if (a.is_fun()) {
            c.push_back(Arg::function(FnAst::var()));
          } else {
            for (auto& l : pools_.literals(a)) c.push_back(Arg::literal(l));
          }
          choices.push_back(std::move(c));
        }
        std::vector<Arg> cur;
        detail::product(choices, 0, cur, op.name, out);
      }
      if (sig_.is_mutable) {
        for (const auto& first_ty : return_types()) {
          const auto firsts = terms(first_ty, max_depth - 1);
          const auto seconds = terms(target, max_depth - 1);
          for (const auto& f : firsts)
            for (const auto& s : seconds) out.push_back(Expr::seq(f, s));
        }
      }
    }
    return memo_[key] = std::move(out);
  }

 private:
  std::vector<Ty> return_types() const {
    std::vector<Ty> out;
    for (const auto& op : sig_.ops)
      if (std::find(out.begin(), out.end(), op.ret) == out.end()) out.push_back(op.ret);
    return out;
  }

  Signature sig_;
  Pools pools_;
  std::map<std::pair<std::string, std::size_t>, std::vector<Expr>> memo_;
};

// All well-typed expressions of type `target` with exactly `n` Call/Seq nodes.
class SizeEnumerator {
 public:
  SizeEnumerator(Signature sig, Pools pools) : sig_(std::move(sig)), pools_(std::move(pools)) {}

  const std::vector<Expr>& exactly(const Ty& target, std::size_t n) {
    auto key = std::make_pair(to_string(target), n);
    if (auto it = memo_.find(key); it != memo_.end()) return it->second;
    std::vector<Expr> out;
    if (n > 0) {
      for (const auto& op : sig_.ops) {
        if (!(op.ret == target)) continue;
        std::vector<std::size_t> abstract_pos;
        for (std::size_t i = 0; i < op.args.size(); ++i)
          if (op.args[i].is_abstract()) abstract_pos.push_back(i);
        // Distribute n - 1 nodes over the abstract positions, each >= 1.
        std::vector<std::size_t> split(abstract_pos.size(), 0);
        distribute(op, abstract_pos, split, 0, n - 1, out);
      }
      if (sig_.is_mutable && n >= 3) {
        std::vector<Ty> rets;
        for (const auto& op : sig_.ops)
          if (std::find(rets.begin(), rets.end(), op.ret) == rets.end()) rets.push_back(op.ret);
        for (std::size_t left = 1; left + 1 < n; ++left) {
          for (const auto& ft : rets) {
            const auto firsts = exactly(ft, left);
            const auto seconds = exactly(target, n - 1 - left);
            for (const auto& f : firsts)
              for (const auto& s : seconds) out.push_back(Expr::seq(f, s));
          }
        }
      }
    }
    return memo_[key] = std::move(out);
  }

  std::vector<Expr> up_to(const Ty& target, std::size_t n) {
    std::vector<Expr> out;
    for (std::size_t k = 1; k <= n; ++k) {
      const auto& xs = exactly(target, k);
      out.insert(out.end(), xs.begin(), xs.end());
    }
    return out;
  }

 private:
  void distribute(const OpDecl& op, const std::vector<std::size_t>& pos, std::vector<std::size_t>& split,
                  std::size_t i, std::size_t remaining, std::vector<Expr>& out) {
    if (i == pos.size()) {
      if (remaining != 0) return;
      std::vector<std::vector<Arg>> choices;
      std::size_t next_abstract = 0;
      for (const auto& a : op.args) {
        std::vector<Arg> c;
        if (a.is_abstract()) {
          for (const auto& s : exactly(a, split[next_abstract++])) c.push_back(Arg::subexpr(s));
        } else if (a.is_fun()) {
          c.push_back(Arg::function(FnAst::var()));
        } else {
          for (auto& l : pools_.literals(a)) c.push_back(Arg::literal(l));
        }
        choices.push_back(std::move(c));
      }
      std::vector<Arg> cur;
      detail::product(choices, 0, cur, op.name, out);
      return;
    }
    for (std::size_t k = 1; k <= remaining; ++k) {
      split[i] = k;
      distribute(op, pos, split, i + 1, remaining - k, out);
    }
  }

  Signature sig_;
  Pools pools_;
  std::map<std::pair<std::string, std::size_t>, std::vector<Expr>> memo_;
};

// Every call term of depth <= max_depth whose arguments are drawn from a
// fixed menu regardless of the declared types, so most are ill-typed.
inline std::vector<Expr> raw_terms(const Signature& sig, std::size_t max_depth) {
  if (max_depth == 0) return {};
  std::vector<Arg> menu{Arg::literal(Literal::integer(0)), Arg::literal(Literal::integer(1)),
                        Arg::literal(Literal::boolean(true)), Arg::function(FnAst::var())};
  for (const auto& s : raw_terms(sig, max_depth - 1)) menu.push_back(Arg::subexpr(s));
  std::vector<Expr> out;
  for (const auto& op : sig.ops) {
    std::vector<std::vector<Arg>> choices(op.args.size(), menu);
    std::vector<Arg> cur;
    detail::product(choices, 0, cur, op.name, out);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Naive models
// ---------------------------------------------------------------------------

// Association list, newest binding first.
class AssocListMap final : public Implementation {
 public:
  std::string name() const override { return "assoc_model"; }
  void reset() override { store_.clear(); }

  Outcome apply(std::string_view op, std::span<const Value> a) override {
    if (op == "empty") return put({});
    if (op == "insert") {
      Entries e = without(get(a[2]), a[0].i);
      e.insert(e.begin(), {a[0].i, a[1].i});
      return put(std::move(e));
    }
    if (op == "delete") return put(without(get(a[1]), a[0].i));
    if (op == "find") {
      for (const auto& [k, v] : get(a[1]))
        if (k == a[0].i) return Outcome::success(Value::some(Value::integer(v)));
      return Outcome::success(Value::none());
    }
    if (op == "union") {
      Entries e = get(a[0]);
      for (const auto& [k, v] : get(a[1])) {
        bool present = std::any_of(e.begin(), e.end(), [&](const auto& p) { return p.first == k; });
        if (!present) e.emplace_back(k, v);
      }
      return put(std::move(e));
    }
    if (op == "keys") {
      std::vector<std::int64_t> ks;
      for (const auto& [k, v] : get(a[0])) ks.push_back(k);
      std::sort(ks.begin(), ks.end());
      return Outcome::success(impl::int_list(ks));
    }
    if (op == "size") return Outcome::success(Value::integer(static_cast<std::int64_t>(get(a[0]).size())));
    throw HarnessBug("assoc_model: unknown op");
  }

 private:
  using Entries = std::vector<std::pair<std::int64_t, std::int64_t>>;
  static Entries without(Entries e, std::int64_t k) {
    e.erase(std::remove_if(e.begin(), e.end(), [&](const auto& p) { return p.first == k; }), e.end());
    return e;
  }
  Outcome put(Entries e) {
    store_.push_back(std::move(e));
    return Outcome::success(Value::abstract(store_.size() - 1));
  }
  const Entries& get(const Value& v) const { return store_.at(v.handle); }

  std::vector<Entries> store_;
};

// std::set-backed finite set.
class StdSetModel final : public Implementation {
 public:
  std::string name() const override { return "set_model"; }
  void reset() override { store_.clear(); }

  Outcome apply(std::string_view op, std::span<const Value> a) override {
    if (op == "empty") return put({});
    if (op == "insert") {
      auto s = get(a[1]);
      s.insert(a[0].i);
      return put(std::move(s));
    }
    if (op == "remove") {
      auto s = get(a[1]);
      s.erase(a[0].i);
      return put(std::move(s));
    }
    if (op == "mem") return Outcome::success(Value::boolean(get(a[1]).count(a[0].i) > 0));
    if (op == "size") return Outcome::success(Value::integer(static_cast<std::int64_t>(get(a[0]).size())));
    if (op == "union") {
      auto s = get(a[0]);
      s.insert(get(a[1]).begin(), get(a[1]).end());
      return put(std::move(s));
    }
    if (op == "to_list") {
      const auto& s = get(a[0]);
      return Outcome::success(impl::int_list({s.begin(), s.end()}));
    }
    throw HarnessBug("set_model: unknown op");
  }

 private:
  Outcome put(std::set<std::int64_t> s) {
    store_.push_back(std::move(s));
    return Outcome::success(Value::abstract(store_.size() - 1));
  }
  const std::set<std::int64_t>& get(const Value& v) const { return store_.at(v.handle); }

  std::vector<std::set<std::int64_t>> store_;
};

// Searches all expressions of each observable type up to `max_size` nodes for
// one on which `a` and `b` disagree.
inline std::optional<Expr> find_witness(const Signature& sig, Implementation& a, Implementation& b,
                                        std::size_t max_size, const Pools& pools) {
  SizeEnumerator en(sig, pools);
  for (std::size_t n = 1; n <= max_size; ++n) {
    for (const auto& ty : validate_signature(sig).observable_types) {
      for (const auto& e : en.exactly(ty, n)) {
        a.reset();
        b.reset();
        Outcome oa = interp(e, a, sig);
        Outcome ob = interp(e, b, sig);
        if (!outcome_equal(oa, ob, ty)) return e;
      }
    }
  }
  return std::nullopt;
}

}  // namespace specdiff::oracle

#endif  // SPECDIFF_TESTS_ORACLES_HPP
