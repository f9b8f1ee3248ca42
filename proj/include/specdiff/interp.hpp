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

#ifndef SPECDIFF_INTERP_HPP
#define SPECDIFF_INTERP_HPP

#include <algorithm>
#include <atomic>
#include <cstdint>
#include <functional>
#include <memory>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "specdiff/expr.hpp"
#include "specdiff/signature.hpp"

namespace specdiff {

// Runtime value flowing between the interpreter and an implementation.
// Abstract values are opaque handles owned by the implementation that
// produced them.
struct Value {
  enum class Kind { Int, Bool, Char, Str, Unit, List, None, Some, Fun, Abstract };

  Kind kind = Kind::Unit;
  std::int64_t i = 0;
  bool b = false;
  char c = 0;
  std::string s;
  std::vector<Value> elems;  // List items, or the Some payload
  FnAst fn;
  std::uint64_t handle = 0;

  static Value integer(std::int64_t v) { Value x; x.kind = Kind::Int; x.i = v; return x; }
  static Value boolean(bool v) { Value x; x.kind = Kind::Bool; x.b = v; return x; }
  static Value character(char v) { Value x; x.kind = Kind::Char; x.c = v; return x; }
  static Value string(std::string v) { Value x; x.kind = Kind::Str; x.s = std::move(v); return x; }
  static Value unit() { return {}; }
  static Value list(std::vector<Value> v) { Value x; x.kind = Kind::List; x.elems = std::move(v); return x; }
  static Value none() { Value x; x.kind = Kind::None; return x; }
  static Value some(Value v) { Value x; x.kind = Kind::Some; x.elems.push_back(std::move(v)); return x; }
  static Value function(FnAst f) { Value x; x.kind = Kind::Fun; x.fn = std::move(f); return x; }
  static Value abstract(std::uint64_t h) { Value x; x.kind = Kind::Abstract; x.handle = h; return x; }

  // Applies a function value; only meaningful for Kind::Fun.
  std::int64_t call(std::int64_t x) const { return eval_fn(fn, x); }
};

inline Value value_of(const Literal& lit) {
  using K = Literal::Kind;
  switch (lit.kind) {
    case K::Int: return Value::integer(lit.i);
    case K::Bool: return Value::boolean(lit.b);
    case K::Char: return Value::character(lit.c);
    case K::Str: return Value::string(lit.s);
    case K::Unit: return Value::unit();
    case K::List: {
      std::vector<Value> out;
      out.reserve(lit.elems.size());
      for (const auto& e : lit.elems) out.push_back(value_of(e));
      return Value::list(std::move(out));
    }
    case K::None: return Value::none();
    case K::Some: return Value::some(value_of(lit.elems[0]));
  }
  return Value::unit();
}

inline bool value_has_type(const Value& v, const Ty& ty) {
  using K = Value::Kind;
  switch (ty.kind) {
    case Ty::Kind::Int: return v.kind == K::Int;
    case Ty::Kind::Bool: return v.kind == K::Bool;
    case Ty::Kind::Char: return v.kind == K::Char;
    case Ty::Kind::Str: return v.kind == K::Str;
    case Ty::Kind::Unit: return v.kind == K::Unit;
    case Ty::Kind::Abstract: return v.kind == K::Abstract;
    case Ty::Kind::Fun: return v.kind == K::Fun;
    case Ty::Kind::List:
      return v.kind == K::List &&
             std::all_of(v.elems.begin(), v.elems.end(), [&](const Value& e) { return value_has_type(e, ty.elem()); });
    case Ty::Kind::Option:
      return v.kind == K::None || (v.kind == K::Some && value_has_type(v.elems[0], ty.elem()));
  }
  return false;
}

inline std::string to_text(const Value& v) {
  using K = Value::Kind;
  switch (v.kind) {
    case K::Int: return std::to_string(v.i);
    case K::Bool: return v.b ? "true" : "false";
    case K::Char: return to_text(Literal::character(v.c));
    case K::Str: return to_text(Literal::string(v.s));
    case K::Unit: return "unit";
    case K::List: {
      std::string out = "(list";
      for (const auto& e : v.elems) out += " " + to_text(e);
      return out + ")";
    }
    case K::None: return "none";
    case K::Some: return "(some " + to_text(v.elems[0]) + ")";
    case K::Fun: return "(fn " + to_text(v.fn) + ")";
    case K::Abstract: return "<abstract>";
  }
  return "?";
}

// Result of interpreting an expression: a value, or a failure tag raised by
// a partial operation.
struct Outcome {
  bool ok = true;
  Value value;
  std::string tag;

  static Outcome success(Value v) { return {true, std::move(v), {}}; }
  static Outcome failure(std::string tag) { return {false, Value::unit(), std::move(tag)}; }
};

inline std::string to_text(const Outcome& o) {
  return o.ok ? "ok " + to_text(o.value) : "failed " + o.tag;
}

// The contract an implementation of a signature exposes to the harness.
class Implementation {
 public:
  virtual ~Implementation() = default;

  virtual std::string name() const = 0;
  // Restores the initial state. Handles issued before a reset are invalid.
  virtual void reset() = 0;
  virtual Outcome apply(std::string_view op, std::span<const Value> args) = 0;
};

using ImplFactory = std::function<std::unique_ptr<Implementation>()>;

// Raised when an implementation returns a value whose shape does not match
// the op's declared return type. This is a defect in the implementation
// binding, not an equivalence failure.
class HarnessBug : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Strict, left-to-right evaluation; the first failure short-circuits.
inline Outcome interp(const Expr& e, Implementation& impl, const Signature& sig) {
  if (e.is_seq()) {
    Outcome first = interp(e.arms[0], impl, sig);
    if (!first.ok) return first;
    return interp(e.arms[1], impl, sig);
  }
  const OpDecl* op = sig.find(e.op);
  if (!op) throw TypeError("unknown op '" + e.op + "'");
  std::vector<Value> args;
  args.reserve(e.args.size());
  for (const auto& a : e.args) {
    switch (a.kind) {
      case Arg::Kind::Lit: args.push_back(value_of(a.lit)); break;
      case Arg::Kind::Fn: args.push_back(Value::function(a.fn)); break;
      case Arg::Kind::Sub: {
        Outcome sub = interp(a.expr(), impl, sig);
        if (!sub.ok) return sub;
        args.push_back(std::move(sub.value));
        break;
      }
    }
  }
  Outcome out = impl.apply(e.op, args);
  if (out.ok && !value_has_type(out.value, op->ret))
    throw HarnessBug(impl.name() + ": '" + e.op + "' returned " + to_text(out.value) + ", expected a value of type " +
                     to_string(op->ret));
  return out;
}

namespace detail {

// Incremented whenever a comparison reaches an abstract value.
inline std::atomic<std::uint64_t>& abstract_comparisons() {
  static std::atomic<std::uint64_t> count{0};
  return count;
}

inline bool concrete_equal(const Value& a, const Value& b) {
  using K = Value::Kind;
  if (a.kind == K::Abstract || b.kind == K::Abstract) {
    ++abstract_comparisons();
    throw std::logic_error("comparison of abstract values");
  }
  if (a.kind != b.kind) return false;
  switch (a.kind) {
    case K::Int: return a.i == b.i;
    case K::Bool: return a.b == b.b;
    case K::Char: return a.c == b.c;
    case K::Str: return a.s == b.s;
    case K::Unit:
    case K::None: return true;
    case K::List:
    case K::Some:
      return a.elems.size() == b.elems.size() &&
             std::equal(a.elems.begin(), a.elems.end(), b.elems.begin(), concrete_equal);
    case K::Fun: return a.fn == b.fn;
    case K::Abstract: break;
  }
  return false;
}

}  // namespace detail

// Number of times a comparison touched an abstract value. The harness never
// asks for one, so this stays zero outside of misuse.
inline std::uint64_t abstract_comparison_count() { return detail::abstract_comparisons().load(); }

// Observational equality of two outcomes at a concrete type.
inline bool outcome_equal(const Outcome& a, const Outcome& b, const Ty& ty) {
  if (ty.is_abstract()) {
    ++detail::abstract_comparisons();
    throw std::logic_error("outcome_equal at the abstract type");
  }
  if (!a.ok || !b.ok) return !a.ok && !b.ok && a.tag == b.tag;
  return detail::concrete_equal(a.value, b.value);
}

}  // namespace specdiff

#endif  // SPECDIFF_INTERP_HPP
