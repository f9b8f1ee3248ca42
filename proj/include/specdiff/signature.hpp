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

#ifndef SPECDIFF_SIGNATURE_HPP
#define SPECDIFF_SIGNATURE_HPP

#include <algorithm>
#include <cctype>
#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace specdiff {

// A type in the signature language. `'a` is already instantiated to int, so
// the only abstract type is the bare `t`.
struct Ty {
  enum class Kind { Int, Bool, Char, Str, Unit, Abstract, List, Option, Fun };

  Kind kind = Kind::Unit;
  // List/Option: one element type. Fun: argument then result.
  std::vector<Ty> params;

  static Ty integer() { return {Kind::Int, {}}; }
  static Ty boolean() { return {Kind::Bool, {}}; }
  static Ty character() { return {Kind::Char, {}}; }
  static Ty string() { return {Kind::Str, {}}; }
  static Ty unit() { return {Kind::Unit, {}}; }
  static Ty abstract() { return {Kind::Abstract, {}}; }
  static Ty list(Ty elem) { return {Kind::List, {std::move(elem)}}; }
  static Ty option(Ty elem) { return {Kind::Option, {std::move(elem)}}; }
  static Ty fun(Ty arg, Ty ret) { return {Kind::Fun, {std::move(arg), std::move(ret)}}; }

  bool is_abstract() const { return kind == Kind::Abstract; }
  bool is_fun() const { return kind == Kind::Fun; }
  const Ty& elem() const { return params.at(0); }

  friend bool operator==(const Ty&, const Ty&) = default;
};

inline bool mentions_abstract(const Ty& ty) {
  if (ty.is_abstract()) return true;
  return std::any_of(ty.params.begin(), ty.params.end(), mentions_abstract);
}

// Renders a type in the surface syntax: `int list`, `(int -> int)`, `t`.
inline std::string to_string(const Ty& ty) {
  switch (ty.kind) {
    case Ty::Kind::Int: return "int";
    case Ty::Kind::Bool: return "bool";
    case Ty::Kind::Char: return "char";
    case Ty::Kind::Str: return "string";
    case Ty::Kind::Unit: return "unit";
    case Ty::Kind::Abstract: return "t";
    case Ty::Kind::List: return to_string(ty.elem()) + " list";
    case Ty::Kind::Option: return to_string(ty.elem()) + " option";
    case Ty::Kind::Fun: {
      std::string out = "(" + to_string(ty.params[0]);
      const Ty* ret = &ty.params[1];
      while (ret->is_fun()) {
        out += " -> " + to_string(ret->params[0]);
        ret = &ret->params[1];
      }
      return out + " -> " + to_string(*ret) + ")";
    }
  }
  return "?";
}

struct OpDecl {
  std::string name;
  std::vector<Ty> args;
  Ty ret;

  // A leaf takes no abstract-typed argument.
  bool is_leaf() const {
    return std::none_of(args.begin(), args.end(), [](const Ty& a) { return a.is_abstract(); });
  }
  std::size_t abstract_arity() const {
    return static_cast<std::size_t>(
        std::count_if(args.begin(), args.end(), [](const Ty& a) { return a.is_abstract(); }));
  }

  friend bool operator==(const OpDecl&, const OpDecl&) = default;
};

struct Signature {
  std::string name;
  bool is_mutable = false;
  std::vector<OpDecl> ops;

  const OpDecl* find(std::string_view op) const {
    for (const auto& d : ops)
      if (d.name == op) return &d;
    return nullptr;
  }

  friend bool operator==(const Signature&, const Signature&) = default;
};

class ParseError : public std::runtime_error {
 public:
  ParseError(std::size_t line, std::size_t column, const std::string& what)
      : std::runtime_error(std::to_string(line) + ":" + std::to_string(column) + ": " + what),
        line_(line),
        column_(column) {}

  std::size_t line() const { return line_; }
  std::size_t column() const { return column_; }

 private:
  std::size_t line_;
  std::size_t column_;
};

class ValidationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

namespace detail {

struct Token {
  enum class Kind { Ident, Colon, Arrow, LParen, RParen, End };
  Kind kind;
  std::string text;
  std::size_t line;
  std::size_t column;
};

inline bool is_ident_start(char c) {
  return std::isalpha(static_cast<unsigned char>(c)) || c == '_';
}
inline bool is_ident_char(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || c == '_';
}

inline std::vector<Token> tokenize_signature(std::string_view src) {
  std::vector<Token> out;
  std::size_t line = 1, col = 1;
  std::size_t i = 0;
  auto advance = [&](std::size_t n) {
    for (std::size_t k = 0; k < n; ++k, ++i) {
      if (src[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
  };
  while (i < src.size()) {
    char c = src[i];
    if (c == '#') {
      while (i < src.size() && src[i] != '\n') advance(1);
    } else if (std::isspace(static_cast<unsigned char>(c))) {
      advance(1);
    } else if (c == ':') {
      out.push_back({Token::Kind::Colon, ":", line, col});
      advance(1);
    } else if (c == '(') {
      out.push_back({Token::Kind::LParen, "(", line, col});
      advance(1);
    } else if (c == ')') {
      out.push_back({Token::Kind::RParen, ")", line, col});
      advance(1);
    } else if (c == '-' && i + 1 < src.size() && src[i + 1] == '>') {
      out.push_back({Token::Kind::Arrow, "->", line, col});
      advance(2);
    } else if (is_ident_start(c)) {
      std::size_t start = i, l = line, cl = col;
      while (i < src.size() && is_ident_char(src[i])) advance(1);
      out.push_back({Token::Kind::Ident, std::string(src.substr(start, i - start)), l, cl});
    } else {
      throw ParseError(line, col, std::string("unexpected character '") + c + "'");
    }
  }
  out.push_back({Token::Kind::End, "", line, col});
  return out;
}

class SignatureParser {
 public:
  explicit SignatureParser(std::string_view src) : toks_(tokenize_signature(src)) {}

  Signature parse() {
    Signature sig;
    expect_keyword("signature");
    sig.name = expect_ident("signature name").text;
    std::size_t abstract_decls = 0;
    std::optional<Token> first_t_use;
    for (;;) {
      const Token& tok = peek();
      if (tok.kind == Token::Kind::End) throw ParseError(tok.line, tok.column, "missing 'end'");
      if (tok.kind != Token::Kind::Ident)
        throw ParseError(tok.line, tok.column, "expected declaration, got '" + tok.text + "'");
      if (tok.text == "end") {
        next();
        break;
      }
      if (tok.text == "mutable") {
        next();
        sig.is_mutable = true;
      } else if (tok.text == "abstract") {
        next();
        const Token& t = next();
        if (t.kind != Token::Kind::Ident || t.text != "t")
          throw ParseError(t.line, t.column, "only 'abstract t' is supported");
        if (++abstract_decls > 1)
          throw ParseError(t.line, t.column, "more than one 'abstract t' declaration");
      } else if (tok.text == "op") {
        next();
        sig.ops.push_back(parse_op(sig, first_t_use));
      } else {
        throw ParseError(tok.line, tok.column, "unknown declaration '" + tok.text + "'");
      }
    }
    const Token& trailing = peek();
    if (trailing.kind != Token::Kind::End)
      throw ParseError(trailing.line, trailing.column, "unexpected input after 'end'");
    if (abstract_decls == 0) {
      const Token& where = first_t_use ? *first_t_use : toks_.front();
      throw ParseError(where.line, where.column, "missing 'abstract t' declaration");
    }
    return sig;
  }

  // A standalone type, as written after `op name :` but without a leading
  // declaration. Arrow types parse as Fun.
  Ty parse_standalone_type() {
    std::optional<Token> unused;
    Ty ty = parse_arrow(unused);
    const Token& tok = peek();
    if (tok.kind != Token::Kind::End)
      throw ParseError(tok.line, tok.column, "unexpected '" + tok.text + "' after type");
    return ty;
  }

 private:
  const Token& peek() const { return toks_[pos_]; }
  const Token& next() {
    const Token& t = toks_[pos_];
    if (t.kind != Token::Kind::End) ++pos_;
    return t;
  }

  void expect_keyword(std::string_view kw) {
    const Token& t = next();
    if (t.kind != Token::Kind::Ident || t.text != kw)
      throw ParseError(t.line, t.column, "expected '" + std::string(kw) + "'");
  }
  const Token& expect_ident(std::string_view what) {
    const Token& t = next();
    if (t.kind != Token::Kind::Ident) throw ParseError(t.line, t.column, "expected " + std::string(what));
    return t;
  }

  OpDecl parse_op(const Signature& sig, std::optional<Token>& first_t_use) {
    const Token& name = expect_ident("operation name");
    if (name.text == "seq" || is_reserved(name.text))
      throw ParseError(name.line, name.column, "'" + name.text + "' is reserved");
    if (sig.find(name.text))
      throw ParseError(name.line, name.column, "duplicate op '" + name.text + "'");
    const Token& colon = next();
    if (colon.kind != Token::Kind::Colon) throw ParseError(colon.line, colon.column, "expected ':'");

    OpDecl op;
    op.name = name.text;
    std::vector<std::pair<Ty, Token>> parts;
    for (;;) {
      Token at = peek();
      parts.emplace_back(parse_atom(first_t_use), at);
      if (peek().kind != Token::Kind::Arrow) break;
      next();
    }
    auto& [ret, ret_tok] = parts.back();
    if (ret.is_fun())
      throw ParseError(ret_tok.line, ret_tok.column, "function type in return position");
    op.ret = ret;
    for (std::size_t i = 0; i + 1 < parts.size(); ++i) op.args.push_back(parts[i].first);
    return op;
  }

  static bool is_reserved(std::string_view s) {
    return s == "end" || s == "op" || s == "abstract" || s == "mutable" || s == "signature";
  }

  Ty parse_arrow(std::optional<Token>& first_t_use) {
    Ty lhs = parse_atom(first_t_use);
    if (peek().kind != Token::Kind::Arrow) return lhs;
    next();
    return Ty::fun(std::move(lhs), parse_arrow(first_t_use));
  }

  Ty parse_atom(std::optional<Token>& first_t_use) {
    const Token& t = next();
    Ty ty;
    if (t.kind == Token::Kind::LParen) {
      ty = parse_arrow(first_t_use);
      const Token& close = next();
      if (close.kind != Token::Kind::RParen) throw ParseError(close.line, close.column, "expected ')'");
    } else if (t.kind == Token::Kind::Ident) {
      if (t.text == "int") ty = Ty::integer();
      else if (t.text == "bool") ty = Ty::boolean();
      else if (t.text == "char") ty = Ty::character();
      else if (t.text == "string") ty = Ty::string();
      else if (t.text == "unit") ty = Ty::unit();
      else if (t.text == "t") {
        ty = Ty::abstract();
        if (!first_t_use) first_t_use = t;
      } else {
        throw ParseError(t.line, t.column, "unknown type name '" + t.text + "'");
      }
    } else {
      throw ParseError(t.line, t.column, "expected a type");
    }
    while (peek().kind == Token::Kind::Ident && (peek().text == "list" || peek().text == "option")) {
      ty = next().text == "list" ? Ty::list(std::move(ty)) : Ty::option(std::move(ty));
    }
    return ty;
  }

  std::vector<Token> toks_;
  std::size_t pos_ = 0;
};

}  // namespace detail

// Parses a signature file. Ops keep their source order.
inline Signature parse_signature(std::string_view source) {
  return detail::SignatureParser(source).parse();
}

// Parses a single type expression such as `int list` or `bool`.
inline Ty parse_type(std::string_view source) {
  return detail::SignatureParser(source).parse_standalone_type();
}

inline std::string to_text(const Signature& sig) {
  std::string out = "signature " + sig.name + "\n";
  if (sig.is_mutable) out += "mutable\n";
  out += "abstract t\n";
  for (const auto& op : sig.ops) {
    out += "op " + op.name + " :";
    for (const auto& a : op.args) out += " " + to_string(a) + " ->";
    out += " " + to_string(op.ret) + "\n";
  }
  return out + "end\n";
}

struct ValidationReport {
  // Distinct non-abstract return types in first-occurrence order.
  std::vector<Ty> observable_types;
};

inline ValidationReport validate_signature(const Signature& sig) {
  auto check_nested = [](const Ty& ty, auto& self) -> void {
    for (const auto& p : ty.params) {
      if (p.is_abstract()) throw ValidationError("abstract type nested under a type constructor");
      if (p.is_fun()) throw ValidationError("function type nested under a type constructor");
      self(p, self);
    }
  };
  for (const auto& op : sig.ops) {
    if (op.ret.is_fun()) throw ValidationError("op '" + op.name + "' returns a function");
    if (op.ret.kind == Ty::Kind::List || op.ret.kind == Ty::Kind::Option) check_nested(op.ret, check_nested);
    for (const auto& a : op.args) {
      if (a.is_fun()) {
        if (!(a == Ty::fun(Ty::integer(), Ty::integer())))
          throw ValidationError("op '" + op.name + "': only (int -> int) function arguments are supported");
      } else {
        check_nested(a, check_nested);
      }
    }
  }

  bool uses_abstract = std::any_of(sig.ops.begin(), sig.ops.end(), [](const OpDecl& op) {
    return op.ret.is_abstract() ||
           std::any_of(op.args.begin(), op.args.end(), [](const Ty& a) { return a.is_abstract(); });
  });
  if (uses_abstract) {
    bool has_leaf = std::any_of(sig.ops.begin(), sig.ops.end(),
                                [](const OpDecl& op) { return op.ret.is_abstract() && op.is_leaf(); });
    if (!has_leaf) throw ValidationError("no leaf constructor for abstract type t");
  }

  ValidationReport report;
  for (const auto& op : sig.ops) {
    if (op.ret.is_abstract()) continue;
    if (std::find(report.observable_types.begin(), report.observable_types.end(), op.ret) ==
        report.observable_types.end())
      report.observable_types.push_back(op.ret);
  }
  if (report.observable_types.empty()) throw ValidationError("no concrete return type");
  return report;
}

}  // namespace specdiff

#endif  // SPECDIFF_SIGNATURE_HPP
