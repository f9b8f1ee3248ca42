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

#ifndef SPECDIFF_EXPR_HPP
#define SPECDIFF_EXPR_HPP

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "specdiff/signature.hpp"

namespace specdiff {

// Literal argument values for concrete types.
struct Literal {
  enum class Kind { Int, Bool, Char, Str, Unit, List, None, Some };

  Kind kind = Kind::Unit;
  std::int64_t i = 0;
  bool b = false;
  char c = 0;
  std::string s;
  // List elements, or the single payload of Some.
  std::vector<Literal> elems;

  static Literal integer(std::int64_t v) { Literal l; l.kind = Kind::Int; l.i = v; return l; }
  static Literal boolean(bool v) { Literal l; l.kind = Kind::Bool; l.b = v; return l; }
  static Literal character(char v) { Literal l; l.kind = Kind::Char; l.c = v; return l; }
  static Literal string(std::string v) { Literal l; l.kind = Kind::Str; l.s = std::move(v); return l; }
  static Literal unit() { return {}; }
  static Literal list(std::vector<Literal> v) { Literal l; l.kind = Kind::List; l.elems = std::move(v); return l; }
  static Literal none() { Literal l; l.kind = Kind::None; return l; }
  static Literal some(Literal v) { Literal l; l.kind = Kind::Some; l.elems.push_back(std::move(v)); return l; }

  friend bool operator==(const Literal&, const Literal&) = default;
};

// First-order body of a unary int -> int function. Var is the parameter.
struct FnAst {
  enum class Kind { Var, Const, Add, Sub, Mul };

  Kind kind = Kind::Var;
  std::int64_t k = 0;
  std::vector<FnAst> kids;

  static FnAst var() { return {}; }
  static FnAst constant(std::int64_t v) { return {Kind::Const, v, {}}; }
  static FnAst add(FnAst l, FnAst r) { return {Kind::Add, 0, {std::move(l), std::move(r)}}; }
  static FnAst sub(FnAst l, FnAst r) { return {Kind::Sub, 0, {std::move(l), std::move(r)}}; }
  static FnAst mul(FnAst l, FnAst r) { return {Kind::Mul, 0, {std::move(l), std::move(r)}}; }

  friend bool operator==(const FnAst&, const FnAst&) = default;
};

inline constexpr std::size_t kMaxFnDepth = 3;

inline std::size_t fn_depth(const FnAst& f) {
  std::size_t d = 0;
  for (const auto& k : f.kids) d = std::max(d, fn_depth(k));
  return d + 1;
}

inline std::size_t fn_nodes(const FnAst& f) {
  std::size_t n = 1;
  for (const auto& k : f.kids) n += fn_nodes(k);
  return n;
}

// Two's-complement evaluation; overflow wraps.
inline std::int64_t eval_fn(const FnAst& f, std::int64_t x) {
  switch (f.kind) {
    case FnAst::Kind::Var: return x;
    case FnAst::Kind::Const: return f.k;
    default: break;
  }
  auto l = static_cast<std::uint64_t>(eval_fn(f.kids[0], x));
  auto r = static_cast<std::uint64_t>(eval_fn(f.kids[1], x));
  std::uint64_t v = f.kind == FnAst::Kind::Add ? l + r : f.kind == FnAst::Kind::Sub ? l - r : l * r;
  return static_cast<std::int64_t>(v);
}

struct Expr;

struct Arg {
  enum class Kind { Lit, Sub, Fn };

  Kind kind = Kind::Lit;
  Literal lit;
  std::vector<Expr> sub;  // exactly one element when kind == Sub
  FnAst fn;

  static Arg literal(Literal l) { Arg a; a.lit = std::move(l); return a; }
  static Arg subexpr(Expr e);
  static Arg function(FnAst f) { Arg a; a.kind = Kind::Fn; a.fn = std::move(f); return a; }

  const Expr& expr() const { return sub.front(); }
  Expr& expr() { return sub.front(); }

  friend bool operator==(const Arg&, const Arg&) = default;
};

// Symbolic expression: a call of a signature operation, or a sequencing of
// two expressions where only the second one's value is kept.
struct Expr {
  enum class Kind { Call, Seq };

  Kind kind = Kind::Call;
  std::string op;
  std::vector<Arg> args;
  std::vector<Expr> arms;  // Seq: first, second

  static Expr call(std::string op, std::vector<Arg> args = {}) {
    Expr e;
    e.op = std::move(op);
    e.args = std::move(args);
    return e;
  }
  static Expr seq(Expr first, Expr second) {
    Expr e;
    e.kind = Kind::Seq;
    e.arms.push_back(std::move(first));
    e.arms.push_back(std::move(second));
    return e;
  }

  bool is_seq() const { return kind == Kind::Seq; }

  friend bool operator==(const Expr&, const Expr&) = default;
};

inline Arg Arg::subexpr(Expr e) {
  Arg a;
  a.kind = Kind::Sub;
  a.sub.push_back(std::move(e));
  return a;
}

class TypeError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline bool literal_has_type(const Literal& lit, const Ty& ty) {
  using K = Literal::Kind;
  switch (ty.kind) {
    case Ty::Kind::Int: return lit.kind == K::Int;
    case Ty::Kind::Bool: return lit.kind == K::Bool;
    case Ty::Kind::Char: return lit.kind == K::Char;
    case Ty::Kind::Str: return lit.kind == K::Str;
    case Ty::Kind::Unit: return lit.kind == K::Unit;
    case Ty::Kind::List:
      return lit.kind == K::List && std::all_of(lit.elems.begin(), lit.elems.end(), [&](const Literal& e) {
               return literal_has_type(e, ty.elem());
             });
    case Ty::Kind::Option:
      return lit.kind == K::None || (lit.kind == K::Some && literal_has_type(lit.elems[0], ty.elem()));
    case Ty::Kind::Abstract:
    case Ty::Kind::Fun: return false;
  }
  return false;
}

inline Ty type_of(const Expr& e, const Signature& sig) {
  if (e.is_seq()) {
    if (!sig.is_mutable) throw TypeError("seq in non-mutable signature '" + sig.name + "'");
    type_of(e.arms[0], sig);
    return type_of(e.arms[1], sig);
  }
  const OpDecl* op = sig.find(e.op);
  if (!op) throw TypeError("unknown op '" + e.op + "'");
  if (op->args.size() != e.args.size())
    throw TypeError("op '" + e.op + "' expects " + std::to_string(op->args.size()) + " argument(s), got " +
                    std::to_string(e.args.size()));
  for (std::size_t i = 0; i < e.args.size(); ++i) {
    const Arg& a = e.args[i];
    const Ty& want = op->args[i];
    auto where = "argument " + std::to_string(i + 1) + " of '" + e.op + "'";
    if (want.is_abstract()) {
      if (a.kind != Arg::Kind::Sub) throw TypeError(where + " must be an expression of type t");
      Ty got = type_of(a.expr(), sig);
      if (!got.is_abstract()) throw TypeError(where + " must have type t, got " + to_string(got));
    } else if (want.is_fun()) {
      if (a.kind != Arg::Kind::Fn) throw TypeError(where + " must be a function");
      if (fn_depth(a.fn) > kMaxFnDepth) throw TypeError(where + ": function body too deep");
    } else {
      if (a.kind != Arg::Kind::Lit) throw TypeError(where + " must be a literal of type " + to_string(want));
      if (!literal_has_type(a.lit, want)) throw TypeError(where + " is not a literal of type " + to_string(want));
    }
  }
  return op->ret;
}

// 1 + the deepest child expression; literals and functions add nothing.
inline std::size_t depth(const Expr& e) {
  std::size_t d = 0;
  if (e.is_seq()) {
    d = std::max(depth(e.arms[0]), depth(e.arms[1]));
  } else {
    for (const auto& a : e.args)
      if (a.kind == Arg::Kind::Sub) d = std::max(d, depth(a.expr()));
  }
  return d + 1;
}

// Number of Call and Seq nodes.
inline std::size_t size_of(const Expr& e) {
  if (e.is_seq()) return 1 + size_of(e.arms[0]) + size_of(e.arms[1]);
  std::size_t n = 1;
  for (const auto& a : e.args)
    if (a.kind == Arg::Kind::Sub) n += size_of(a.expr());
  return n;
}

inline std::size_t num_seq(const Expr& e) {
  if (e.is_seq()) return 1 + num_seq(e.arms[0]) + num_seq(e.arms[1]);
  std::size_t n = 0;
  for (const auto& a : e.args)
    if (a.kind == Arg::Kind::Sub) n += num_seq(a.expr());
  return n;
}

// ---------------------------------------------------------------------------
// Canonical s-expression text
// ---------------------------------------------------------------------------

inline std::string to_text(const Literal& lit) {
  using K = Literal::Kind;
  switch (lit.kind) {
    case K::Int: return std::to_string(lit.i);
    case K::Bool: return lit.b ? "true" : "false";
    case K::Char: {
      if (lit.c == '\'' || lit.c == '\\') return std::string("'\\") + lit.c + "'";
      return std::string("'") + lit.c + "'";
    }
    case K::Str: {
      std::string out = "\"";
      for (char c : lit.s) {
        if (c == '"' || c == '\\') out += '\\';
        out += c;
      }
      return out + "\"";
    }
    case K::Unit: return "unit";
    case K::List: {
      std::string out = "(list";
      for (const auto& e : lit.elems) out += " " + to_text(e);
      return out + ")";
    }
    case K::None: return "none";
    case K::Some: return "(some " + to_text(lit.elems[0]) + ")";
  }
  return "?";
}

inline std::string to_text(const FnAst& f) {
  switch (f.kind) {
    case FnAst::Kind::Var: return "var";
    case FnAst::Kind::Const: return std::to_string(f.k);
    case FnAst::Kind::Add: return "(add " + to_text(f.kids[0]) + " " + to_text(f.kids[1]) + ")";
    case FnAst::Kind::Sub: return "(sub " + to_text(f.kids[0]) + " " + to_text(f.kids[1]) + ")";
    case FnAst::Kind::Mul: return "(mul " + to_text(f.kids[0]) + " " + to_text(f.kids[1]) + ")";
  }
  return "?";
}

inline std::string to_text(const Expr& e) {
  if (e.is_seq()) return "(seq " + to_text(e.arms[0]) + " " + to_text(e.arms[1]) + ")";
  std::string out = "(" + e.op;
  for (const auto& a : e.args) {
    out += ' ';
    switch (a.kind) {
      case Arg::Kind::Lit: out += to_text(a.lit); break;
      case Arg::Kind::Sub: out += to_text(a.expr()); break;
      case Arg::Kind::Fn: out += "(fn " + to_text(a.fn) + ")"; break;
    }
  }
  return out + ")";
}

namespace detail {

// Untyped s-expression tree; strings and chars keep their decoded payload.
struct SNode {
  enum class Kind { Atom, Str, Char, List };
  Kind kind = Kind::Atom;
  std::string text;
  std::vector<SNode> items;
  std::size_t offset = 0;
};

class SExprReader {
 public:
  explicit SExprReader(std::string_view src) : src_(src) {}

  SNode read_all() {
    SNode n = read();
    skip_ws();
    if (pos_ != src_.size()) fail("trailing input");
    return n;
  }

 private:
  [[noreturn]] void fail(const std::string& what) const {
    throw ParseError(1, pos_ + 1, what);
  }
  void skip_ws() {
    while (pos_ < src_.size() && std::isspace(static_cast<unsigned char>(src_[pos_]))) ++pos_;
  }

  SNode read() {
    skip_ws();
    if (pos_ >= src_.size()) fail("unexpected end of input");
    SNode n;
    n.offset = pos_;
    char c = src_[pos_];
    if (c == '(') {
      ++pos_;
      n.kind = SNode::Kind::List;
      for (;;) {
        skip_ws();
        if (pos_ >= src_.size()) fail("missing ')'");
        if (src_[pos_] == ')') {
          ++pos_;
          break;
        }
        n.items.push_back(read());
      }
    } else if (c == ')') {
      fail("unexpected ')'");
    } else if (c == '"') {
      ++pos_;
      n.kind = SNode::Kind::Str;
      for (;;) {
        if (pos_ >= src_.size()) fail("unterminated string");
        char d = src_[pos_++];
        if (d == '"') break;
        if (d == '\\') {
          if (pos_ >= src_.size()) fail("unterminated string");
          d = src_[pos_++];
        }
        n.text += d;
      }
    } else if (c == '\'') {
      ++pos_;
      n.kind = SNode::Kind::Char;
      if (pos_ >= src_.size()) fail("unterminated char");
      char d = src_[pos_++];
      if (d == '\\') {
        if (pos_ >= src_.size()) fail("unterminated char");
        d = src_[pos_++];
      }
      if (pos_ >= src_.size() || src_[pos_] != '\'') fail("unterminated char");
      ++pos_;
      n.text = std::string(1, d);
    } else {
      std::size_t start = pos_;
      while (pos_ < src_.size() && !std::isspace(static_cast<unsigned char>(src_[pos_])) && src_[pos_] != '(' &&
             src_[pos_] != ')' && src_[pos_] != '"' && src_[pos_] != '\'')
        ++pos_;
      n.text = std::string(src_.substr(start, pos_ - start));
    }
    return n;
  }

  std::string_view src_;
  std::size_t pos_ = 0;
};

[[noreturn]] inline void sfail(const SNode& n, const std::string& what) {
  throw ParseError(1, n.offset + 1, what);
}

inline std::int64_t read_int(const SNode& n) {
  if (n.kind != SNode::Kind::Atom) sfail(n, "expected integer");
  std::int64_t v = 0;
  const char* first = n.text.data();
  const char* last = first + n.text.size();
  auto [p, ec] = std::from_chars(first, last, v);
  if (ec != std::errc() || p != last || n.text.empty()) sfail(n, "expected integer, got '" + n.text + "'");
  return v;
}

inline Literal read_literal(const SNode& n, const Ty& ty) {
  auto is_form = [&](std::string_view head) {
    return n.kind == SNode::Kind::List && !n.items.empty() && n.items[0].kind == SNode::Kind::Atom &&
           n.items[0].text == head;
  };
  switch (ty.kind) {
    case Ty::Kind::Int: return Literal::integer(read_int(n));
    case Ty::Kind::Bool:
      if (n.kind == SNode::Kind::Atom && (n.text == "true" || n.text == "false"))
        return Literal::boolean(n.text == "true");
      throw TypeError("expected bool literal at offset " + std::to_string(n.offset));
    case Ty::Kind::Char:
      if (n.kind == SNode::Kind::Char) return Literal::character(n.text[0]);
      throw TypeError("expected char literal at offset " + std::to_string(n.offset));
    case Ty::Kind::Str:
      if (n.kind == SNode::Kind::Str) return Literal::string(n.text);
      throw TypeError("expected string literal at offset " + std::to_string(n.offset));
    case Ty::Kind::Unit:
      if (n.kind == SNode::Kind::Atom && n.text == "unit") return Literal::unit();
      throw TypeError("expected unit at offset " + std::to_string(n.offset));
    case Ty::Kind::List: {
      if (!is_form("list")) throw TypeError("expected (list ...) at offset " + std::to_string(n.offset));
      std::vector<Literal> elems;
      for (std::size_t i = 1; i < n.items.size(); ++i) elems.push_back(read_literal(n.items[i], ty.elem()));
      return Literal::list(std::move(elems));
    }
    case Ty::Kind::Option:
      if (n.kind == SNode::Kind::Atom && n.text == "none") return Literal::none();
      if (is_form("some") && n.items.size() == 2) return Literal::some(read_literal(n.items[1], ty.elem()));
      throw TypeError("expected none or (some ...) at offset " + std::to_string(n.offset));
    case Ty::Kind::Abstract:
    case Ty::Kind::Fun: break;
  }
  throw TypeError("no literal form for type " + to_string(ty));
}

inline FnAst read_fn_body(const SNode& n) {
  if (n.kind == SNode::Kind::Atom) {
    if (n.text == "var") return FnAst::var();
    return FnAst::constant(read_int(n));
  }
  if (n.kind != SNode::Kind::List || n.items.size() != 3 || n.items[0].kind != SNode::Kind::Atom)
    sfail(n, "malformed function body");
  const auto& head = n.items[0].text;
  FnAst l = read_fn_body(n.items[1]);
  FnAst r = read_fn_body(n.items[2]);
  if (head == "add") return FnAst::add(std::move(l), std::move(r));
  if (head == "sub") return FnAst::sub(std::move(l), std::move(r));
  if (head == "mul") return FnAst::mul(std::move(l), std::move(r));
  sfail(n, "unknown function operator '" + head + "'");
}

inline Expr read_expr(const SNode& n, const Signature& sig) {
  if (n.kind != SNode::Kind::List || n.items.empty() || n.items[0].kind != SNode::Kind::Atom)
    throw TypeError("expected an expression at offset " + std::to_string(n.offset));
  const std::string& head = n.items[0].text;
  if (head == "seq") {
    if (n.items.size() != 3) sfail(n, "seq takes two expressions");
    return Expr::seq(read_expr(n.items[1], sig), read_expr(n.items[2], sig));
  }
  const OpDecl* op = sig.find(head);
  if (!op) throw TypeError("unknown op '" + head + "'");
  if (op->args.size() + 1 != n.items.size())
    throw TypeError("op '" + head + "' expects " + std::to_string(op->args.size()) + " argument(s), got " +
                    std::to_string(n.items.size() - 1));
  Expr e = Expr::call(head);
  for (std::size_t i = 0; i < op->args.size(); ++i) {
    const SNode& item = n.items[i + 1];
    const Ty& want = op->args[i];
    if (want.is_abstract()) {
      e.args.push_back(Arg::subexpr(read_expr(item, sig)));
    } else if (want.is_fun()) {
      if (item.kind != SNode::Kind::List || item.items.size() != 2 || item.items[0].kind != SNode::Kind::Atom ||
          item.items[0].text != "fn")
        throw TypeError("argument " + std::to_string(i + 1) + " of '" + head + "' must be (fn ...)");
      e.args.push_back(Arg::function(read_fn_body(item.items[1])));
    } else {
      e.args.push_back(Arg::literal(read_literal(item, want)));
    }
  }
  return e;
}

}  // namespace detail

// Parses canonical text and type-checks the result against `sig`.
inline Expr from_text(std::string_view text, const Signature& sig) {
  detail::SNode root = detail::SExprReader(text).read_all();
  Expr e = detail::read_expr(root, sig);
  type_of(e, sig);
  return e;
}

}  // namespace specdiff

#endif  // SPECDIFF_EXPR_HPP
