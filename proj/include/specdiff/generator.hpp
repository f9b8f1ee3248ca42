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

#ifndef SPECDIFF_GENERATOR_HPP
#define SPECDIFF_GENERATOR_HPP

#include <algorithm>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "specdiff/expr.hpp"
#include "specdiff/rng.hpp"
#include "specdiff/signature.hpp"

namespace specdiff {

struct GenConfig {
  std::size_t max_size = 30;
  // Treated as zero for signatures without the `mutable` flag.
  double seq_probability = 0.25;
  std::uint64_t seed = 0;
};

// Size used for trial `trial_index`: cycles 0, 1, ..., max_size, 0, ...
inline std::size_t size_schedule(std::size_t trial_index, const GenConfig& cfg) {
  return trial_index % (cfg.max_size + 1);
}

namespace detail {

inline FnAst gen_fn_node(std::int64_t hi, Rng& rng, std::size_t level) {
  std::size_t kinds = level >= kMaxFnDepth ? 2 : 5;
  switch (rng.index(kinds)) {
    case 0: return FnAst::var();
    case 1: return FnAst::constant(rng.uniform(0, hi));
    case 2: {
      FnAst l = gen_fn_node(hi, rng, level + 1);
      return FnAst::add(std::move(l), gen_fn_node(hi, rng, level + 1));
    }
    case 3: {
      FnAst l = gen_fn_node(hi, rng, level + 1);
      return FnAst::sub(std::move(l), gen_fn_node(hi, rng, level + 1));
    }
    default: {
      FnAst l = gen_fn_node(hi, rng, level + 1);
      return FnAst::mul(std::move(l), gen_fn_node(hi, rng, level + 1));
    }
  }
}

}  // namespace detail

// Random int -> int body: node kinds uniform over {var, const, add, sub, mul},
// only var/const at the third level. Constants lie in [0, max(size, 1)].
inline FnAst gen_fn_ast(std::size_t size, Rng& rng) {
  return detail::gen_fn_node(static_cast<std::int64_t>(std::max<std::size_t>(size, 1)), rng, 1);
}

// Literal of a concrete type. Ints are uniform in [0, size].
inline Literal gen_literal(const Ty& ty, std::size_t size, Rng& rng) {
  auto s = static_cast<std::int64_t>(size);
  switch (ty.kind) {
    case Ty::Kind::Int: return Literal::integer(rng.uniform(0, s));
    case Ty::Kind::Bool: return Literal::boolean(rng.index(2) == 1);
    case Ty::Kind::Char: return Literal::character(static_cast<char>('a' + rng.index(26)));
    case Ty::Kind::Str: {
      auto len = rng.uniform(0, std::min<std::int64_t>(s, 6));
      std::string out;
      for (std::int64_t i = 0; i < len; ++i) out += static_cast<char>('a' + rng.index(26));
      return Literal::string(std::move(out));
    }
    case Ty::Kind::Unit: return Literal::unit();
    case Ty::Kind::List: {
      auto len = rng.uniform(0, std::min<std::int64_t>(s, 5));
      std::vector<Literal> elems;
      for (std::int64_t i = 0; i < len; ++i) elems.push_back(gen_literal(ty.elem(), size, rng));
      return Literal::list(std::move(elems));
    }
    case Ty::Kind::Option:
      if (rng.index(4) == 0) return Literal::none();
      return Literal::some(gen_literal(ty.elem(), size, rng));
    case Ty::Kind::Abstract:
    case Ty::Kind::Fun: break;
  }
  throw std::logic_error("no literal form for type " + to_string(ty));
}

// Type-directed generator for a fixed signature. Candidate tables are built
// once; each call draws from the supplied Rng only.
class ExprGenerator {
 public:
  ExprGenerator(Signature sig, GenConfig cfg) : sig_(std::move(sig)), cfg_(cfg) {
    if (!sig_.is_mutable) cfg_.seq_probability = 0.0;
    for (const auto& op : sig_.ops)
      if (std::find(return_types_.begin(), return_types_.end(), op.ret) == return_types_.end())
        return_types_.push_back(op.ret);
  }

  const Signature& signature() const { return sig_; }
  const GenConfig& config() const { return cfg_; }

  Expr operator()(const Ty& target, std::size_t size, Rng& rng) const {
    if (sig_.is_mutable && size >= 2 && rng.bernoulli(cfg_.seq_probability)) {
      const Ty& first_ty = return_types_[rng.index(return_types_.size())];
      Expr first = (*this)(first_ty, size / 2, rng);
      Expr second = (*this)(target, size / 2, rng);
      return Expr::seq(std::move(first), std::move(second));
    }

    std::vector<const OpDecl*> candidates;
    for (const auto& op : sig_.ops)
      if (op.ret == target) candidates.push_back(&op);
    if (candidates.empty()) throw std::invalid_argument("no op returns type " + to_string(target));
    if (size == 0) {
      std::vector<const OpDecl*> leaves;
      for (const auto* op : candidates)
        if (op->is_leaf()) leaves.push_back(op);
      if (!leaves.empty()) candidates = std::move(leaves);
    }
    const OpDecl& op = *candidates[rng.index(candidates.size())];

    std::size_t k = op.abstract_arity();
    std::size_t sub_size = (size == 0 || k == 0) ? 0 : (size - 1) / k;
    Expr e = Expr::call(op.name);
    e.args.reserve(op.args.size());
    for (const auto& a : op.args) {
      if (a.is_abstract())
        e.args.push_back(Arg::subexpr((*this)(a, sub_size, rng)));
      else if (a.is_fun())
        e.args.push_back(Arg::function(gen_fn_ast(size, rng)));
      else
        e.args.push_back(Arg::literal(gen_literal(a, size, rng)));
    }
    return e;
  }

 private:
  Signature sig_;
  GenConfig cfg_;
  std::vector<Ty> return_types_;
};

// One-shot form of ExprGenerator.
inline Expr gen_expr(const Ty& target, std::size_t size, const Signature& sig, const GenConfig& cfg, Rng& rng) {
  return ExprGenerator(sig, cfg)(target, size, rng);
}

}  // namespace specdiff

#endif  // SPECDIFF_GENERATOR_HPP
