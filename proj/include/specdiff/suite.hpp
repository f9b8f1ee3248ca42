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

// Bundled case studies: finite sets, BST-backed finite maps with eight
// seeded faults, and a global-state counter.

#ifndef SPECDIFF_SUITE_HPP
#define SPECDIFF_SUITE_HPP

#include <algorithm>
#include <cstdint>
#include <functional>
#include <iterator>
#include <memory>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "specdiff/interp.hpp"

namespace specdiff {

inline constexpr std::string_view kFiniteSetSig = R"(# Finite sets of integers.
signature finite_set
abstract t
op empty : t
op insert : int -> t -> t
op remove : int -> t -> t
op mem : int -> t -> bool
op size : t -> int
op union : t -> t -> t
# Ascending order, no duplicates.
op to_list : t -> int list
end
)";

inline constexpr std::string_view kBstMapSig = R"(# Finite maps from int keys to int values.
signature bst_map
abstract t
op empty : t
op insert : int -> int -> t -> t
op delete : int -> t -> t
op find : int -> t -> int option
# Left-biased on duplicate keys.
op union : t -> t -> t
# Ascending order.
op keys : t -> int list
op size : t -> int
end
)";

inline constexpr std::string_view kCounterSig = R"(# A single global counter. The state lives in the implementation instance,
# so `t` is declared but never used by an operation.
signature counter
mutable
abstract t
op incr : unit
op add : int -> unit
op get : int
op is_zero : bool
end
)";

namespace impl {

// Maps handles to per-value state for implementations of a persistent `t`.
template <typename State>
class HandleStore {
 public:
  Value put(State s) {
    items_.push_back(std::move(s));
    return Value::abstract(items_.size() - 1);
  }
  const State& get(const Value& v) const {
    if (v.kind != Value::Kind::Abstract || v.handle >= items_.size())
      throw HarnessBug("invalid abstract handle " + std::to_string(v.handle));
    return items_[v.handle];
  }
  void clear() { items_.clear(); }
  const std::vector<State>& items() const { return items_; }

 private:
  std::vector<State> items_;
};

[[noreturn]] inline void unknown_op(const std::string& impl, std::string_view op) {
  throw HarnessBug(impl + ": unsupported op '" + std::string(op) + "'");
}

inline Value int_list(const std::vector<std::int64_t>& xs) {
  std::vector<Value> out;
  out.reserve(xs.size());
  for (auto x : xs) out.push_back(Value::integer(x));
  return Value::list(std::move(out));
}

// ---------------------------------------------------------------------------
// finite_set
// ---------------------------------------------------------------------------

// Sorted, duplicate-free vector.
class ListSet final : public Implementation {
 public:
  explicit ListSet(bool dedup = true) : dedup_(dedup) {}

  std::string name() const override { return dedup_ ? "listset" : "bug_dedup"; }
  void reset() override { store_.clear(); }

  Outcome apply(std::string_view op, std::span<const Value> a) override {
    using List = std::vector<std::int64_t>;
    if (op == "empty") return Outcome::success(store_.put({}));
    if (op == "insert") {
      List xs = store_.get(a[1]);
      auto it = std::lower_bound(xs.begin(), xs.end(), a[0].i);
      if (dedup_ && it != xs.end() && *it == a[0].i) return Outcome::success(store_.put(std::move(xs)));
      xs.insert(it, a[0].i);
      return Outcome::success(store_.put(std::move(xs)));
    }
    if (op == "remove") {
      List xs = store_.get(a[1]);
      auto it = std::lower_bound(xs.begin(), xs.end(), a[0].i);
      if (it != xs.end() && *it == a[0].i) xs.erase(it);
      return Outcome::success(store_.put(std::move(xs)));
    }
    if (op == "mem") {
      const List& xs = store_.get(a[1]);
      return Outcome::success(Value::boolean(std::binary_search(xs.begin(), xs.end(), a[0].i)));
    }
    if (op == "size") return Outcome::success(Value::integer(static_cast<std::int64_t>(store_.get(a[0]).size())));
    if (op == "union") {
      const List& l = store_.get(a[0]);
      const List& r = store_.get(a[1]);
      List out;
      if (dedup_) {
        std::set_union(l.begin(), l.end(), r.begin(), r.end(), std::back_inserter(out));
      } else {
        std::merge(l.begin(), l.end(), r.begin(), r.end(), std::back_inserter(out));
      }
      return Outcome::success(store_.put(std::move(out)));
    }
    if (op == "to_list") return Outcome::success(int_list(store_.get(a[0])));
    unknown_op(name(), op);
  }

 private:
  bool dedup_;
  HandleStore<std::vector<std::int64_t>> store_;
};

// Unbalanced persistent BST.
class BstSet final : public Implementation {
 public:
  enum class Fault { None, RemoveLeftOnly, MemNonStrict };

  explicit BstSet(Fault fault = Fault::None) : fault_(fault) {}

  std::string name() const override {
    switch (fault_) {
      case Fault::RemoveLeftOnly: return "bug_remove_left";
      case Fault::MemNonStrict: return "bug_mem_strict";
      case Fault::None: break;
    }
    return "bstset";
  }
  void reset() override { store_.clear(); }

  Outcome apply(std::string_view op, std::span<const Value> a) override {
    if (op == "empty") return Outcome::success(store_.put(nullptr));
    if (op == "insert") return Outcome::success(store_.put(insert(a[0].i, store_.get(a[1]))));
    if (op == "remove") return Outcome::success(store_.put(remove(a[0].i, store_.get(a[1]))));
    if (op == "mem") return Outcome::success(Value::boolean(mem(a[0].i, store_.get(a[1]))));
    if (op == "size") {
      std::vector<std::int64_t> xs;
      inorder(store_.get(a[0]), xs);
      return Outcome::success(Value::integer(static_cast<std::int64_t>(xs.size())));
    }
    if (op == "union") {
      std::vector<std::int64_t> xs;
      inorder(store_.get(a[1]), xs);
      Tree t = store_.get(a[0]);
      for (auto x : xs) t = insert(x, t);
      return Outcome::success(store_.put(std::move(t)));
    }
    if (op == "to_list") {
      std::vector<std::int64_t> xs;
      inorder(store_.get(a[0]), xs);
      return Outcome::success(int_list(xs));
    }
    unknown_op(name(), op);
  }

 private:
  struct Node;
  using Tree = std::shared_ptr<const Node>;
  struct Node {
    std::int64_t key;
    Tree left, right;
  };

  static Tree node(std::int64_t k, Tree l, Tree r) {
    return std::make_shared<const Node>(Node{k, std::move(l), std::move(r)});
  }

  static Tree insert(std::int64_t k, const Tree& t) {
    if (!t) return node(k, nullptr, nullptr);
    if (k < t->key) return node(t->key, insert(k, t->left), t->right);
    if (k > t->key) return node(t->key, t->left, insert(k, t->right));
    return t;
  }

  static std::int64_t min_key(const Tree& t) { return t->left ? min_key(t->left) : t->key; }

  Tree remove(std::int64_t k, const Tree& t) const {
    if (!t) return t;
    if (k < t->key) return node(t->key, remove(k, t->left), t->right);
    if (k > t->key) {
      if (fault_ == Fault::RemoveLeftOnly) return t;
      return node(t->key, t->left, remove(k, t->right));
    }
    if (!t->left) return t->right;
    if (!t->right) return t->left;
    std::int64_t m = min_key(t->right);
    return node(m, t->left, remove(m, t->right));
  }

  bool mem(std::int64_t k, const Tree& t) const {
    for (const Node* n = t.get(); n;) {
      if (fault_ == Fault::MemNonStrict) {
        n = k <= n->key ? n->left.get() : n->right.get();
        continue;
      }
      if (k < n->key) n = n->left.get();
      else if (k > n->key) n = n->right.get();
      else return true;
    }
    return false;
  }

  static void inorder(const Tree& t, std::vector<std::int64_t>& out) {
    if (!t) return;
    inorder(t->left, out);
    out.push_back(t->key);
    inorder(t->right, out);
  }

  Fault fault_;
  HandleStore<Tree> store_;
};

// ---------------------------------------------------------------------------
// bst_map
// ---------------------------------------------------------------------------

// Unbalanced persistent BST map. Each fault perturbs one operation.
class BstMap final : public Implementation {
 public:
  enum class Fault {
    None,
    InsertSingleton,      // b1
    InsertWrongSubtree,   // b2
    InsertNoOverwrite,    // b3
    DeleteReversed,       // b4
    DeleteDropsSubtree,   // b5
    UnionRightBiased,     // b6
    FindOffByOne,         // b7
    KeysPreorder,         // b8
  };

  explicit BstMap(Fault fault = Fault::None) : fault_(fault) {}

  std::string name() const override {
    if (fault_ == Fault::None) return "correct";
    return "b" + std::to_string(static_cast<int>(fault_));
  }
  void reset() override { store_.clear(); }

  Outcome apply(std::string_view op, std::span<const Value> a) override {
    if (op == "empty") return Outcome::success(store_.put(nullptr));
    if (op == "insert") return Outcome::success(store_.put(insert(a[0].i, a[1].i, store_.get(a[2]))));
    if (op == "delete") return Outcome::success(store_.put(erase(a[0].i, store_.get(a[1]))));
    if (op == "find") {
      auto v = find(a[0].i, store_.get(a[1]));
      return Outcome::success(v ? Value::some(Value::integer(*v)) : Value::none());
    }
    if (op == "union") return Outcome::success(store_.put(unite(store_.get(a[0]), store_.get(a[1]))));
    if (op == "keys") {
      std::vector<std::int64_t> ks;
      collect_keys(store_.get(a[0]), ks);
      return Outcome::success(int_list(ks));
    }
    if (op == "size") return Outcome::success(Value::integer(static_cast<std::int64_t>(count(store_.get(a[0])))));
    unknown_op(name(), op);
  }

  // True when every tree this instance has produced is ordered by key.
  bool invariant_holds() const {
    return std::all_of(store_.items().begin(), store_.items().end(),
                       [](const Tree& t) { return ordered(t, std::nullopt, std::nullopt); });
  }

 private:
  struct Node;
  using Tree = std::shared_ptr<const Node>;
  struct Node {
    std::int64_t key;
    std::int64_t value;
    Tree left, right;
  };

  static Tree node(std::int64_t k, std::int64_t v, Tree l, Tree r) {
    return std::make_shared<const Node>(Node{k, v, std::move(l), std::move(r)});
  }

  static bool ordered(const Tree& t, std::optional<std::int64_t> lo, std::optional<std::int64_t> hi) {
    if (!t) return true;
    if ((lo && t->key <= *lo) || (hi && t->key >= *hi)) return false;
    return ordered(t->left, lo, t->key) && ordered(t->right, t->key, hi);
  }

  Tree insert(std::int64_t k, std::int64_t v, const Tree& t) const {
    if (fault_ == Fault::InsertSingleton) return node(k, v, nullptr, nullptr);
    return insert_from(k, v, t, fault_);
  }

  static Tree insert_from(std::int64_t k, std::int64_t v, const Tree& t, Fault fault) {
    if (!t) return node(k, v, nullptr, nullptr);
    if (k < t->key) {
      if (fault == Fault::InsertWrongSubtree) return node(t->key, t->value, t->left, insert_from(k, v, t->right, fault));
      return node(t->key, t->value, insert_from(k, v, t->left, fault), t->right);
    }
    if (k > t->key) return node(t->key, t->value, t->left, insert_from(k, v, t->right, fault));
    if (fault == Fault::InsertNoOverwrite) return t;
    return node(k, v, t->left, t->right);
  }

  static std::pair<std::int64_t, std::int64_t> min_entry(const Tree& t) {
    return t->left ? min_entry(t->left) : std::pair{t->key, t->value};
  }

  static Tree erase_correct(std::int64_t k, const Tree& t) {
    if (!t) return t;
    if (k < t->key) return node(t->key, t->value, erase_correct(k, t->left), t->right);
    if (k > t->key) return node(t->key, t->value, t->left, erase_correct(k, t->right));
    if (!t->left) return t->right;
    if (!t->right) return t->left;
    auto [mk, mv] = min_entry(t->right);
    return node(mk, mv, t->left, erase_correct(mk, t->right));
  }

  Tree erase(std::int64_t k, const Tree& t) const {
    if (!t) return t;
    bool go_left = k < t->key;
    bool go_right = k > t->key;
    if (fault_ == Fault::DeleteReversed) std::swap(go_left, go_right);
    if (go_left) return node(t->key, t->value, erase(k, t->left), t->right);
    if (go_right) return node(t->key, t->value, t->left, erase(k, t->right));
    if (k != t->key) return t;
    if (fault_ == Fault::DeleteDropsSubtree) return nullptr;
    if (!t->left) return t->right;
    if (!t->right) return t->left;
    auto [mk, mv] = min_entry(t->right);
    return node(mk, mv, t->left, erase_correct(mk, t->right));
  }

  std::optional<std::int64_t> find(std::int64_t k, const Tree& t) const {
    for (const Node* n = t.get(); n;) {
      if (fault_ == Fault::FindOffByOne) {
        // Treats the key just below a node as matching it.
        if (k + 1 < n->key) n = n->left.get();
        else if (k > n->key) n = n->right.get();
        else return n->value;
        continue;
      }
      if (k < n->key) n = n->left.get();
      else if (k > n->key) n = n->right.get();
      else return n->value;
    }
    return std::nullopt;
  }

  static void preorder(const Tree& t, std::vector<std::pair<std::int64_t, std::int64_t>>& out) {
    if (!t) return;
    out.emplace_back(t->key, t->value);
    preorder(t->left, out);
    preorder(t->right, out);
  }

  // Left-biased: entries of `l` are inserted over `r`.
  Tree unite(const Tree& l, const Tree& r) const {
    std::vector<std::pair<std::int64_t, std::int64_t>> entries;
    if (fault_ == Fault::UnionRightBiased) {
      preorder(r, entries);
      Tree out = l;
      for (auto [k, v] : entries) out = insert_from(k, v, out, Fault::None);
      return out;
    }
    preorder(l, entries);
    Tree out = r;
    for (auto [k, v] : entries) out = insert(k, v, out);
    return out;
  }

  void collect_keys(const Tree& t, std::vector<std::int64_t>& out) const {
    if (!t) return;
    if (fault_ == Fault::KeysPreorder) {
      out.push_back(t->key);
      collect_keys(t->left, out);
      collect_keys(t->right, out);
      return;
    }
    collect_keys(t->left, out);
    out.push_back(t->key);
    collect_keys(t->right, out);
  }

  static std::size_t count(const Tree& t) { return t ? 1 + count(t->left) + count(t->right) : 0; }

  Fault fault_;
  HandleStore<Tree> store_;
};

// ---------------------------------------------------------------------------
// counter
// ---------------------------------------------------------------------------

class IntCounter final : public Implementation {
 public:
  // A positive cap models the saturating fault.
  explicit IntCounter(std::int64_t cap = 0) : cap_(cap) {}

  std::string name() const override { return cap_ > 0 ? "bug_saturate" : "intcounter"; }
  void reset() override { count_ = 0; }

  Outcome apply(std::string_view op, std::span<const Value> a) override {
    if (op == "incr") return bump(1);
    if (op == "add") return bump(a[0].i);
    if (op == "get") return Outcome::success(Value::integer(count_));
    if (op == "is_zero") return Outcome::success(Value::boolean(count_ == 0));
    unknown_op(name(), op);
  }

 private:
  Outcome bump(std::int64_t by) {
    count_ = static_cast<std::int64_t>(static_cast<std::uint64_t>(count_) + static_cast<std::uint64_t>(by));
    if (cap_ > 0 && count_ > cap_) count_ = cap_;
    return Outcome::success(Value::unit());
  }

  std::int64_t cap_;
  std::int64_t count_ = 0;
};

// Keeps the log of increments and sums it on demand.
class ListCounter final : public Implementation {
 public:
  std::string name() const override { return "listcounter"; }
  void reset() override { log_.clear(); }

  Outcome apply(std::string_view op, std::span<const Value> a) override {
    if (op == "incr") {
      log_.push_back(1);
      return Outcome::success(Value::unit());
    }
    if (op == "add") {
      log_.push_back(a[0].i);
      return Outcome::success(Value::unit());
    }
    if (op == "get") return Outcome::success(Value::integer(total()));
    if (op == "is_zero") return Outcome::success(Value::boolean(total() == 0));
    unknown_op(name(), op);
  }

 private:
  std::int64_t total() const {
    std::uint64_t sum = 0;
    for (auto d : log_) sum += static_cast<std::uint64_t>(d);
    return static_cast<std::int64_t>(sum);
  }

  std::vector<std::int64_t> log_;
};

}  // namespace impl

struct NamedImpl {
  std::string name;
  std::string description;
  ImplFactory make;
};

struct SuiteEntry {
  std::string name;
  std::string_view signature_text;
  // Correct implementations; the first is the reference for bug hunting.
  std::vector<NamedImpl> implementations;
  std::vector<NamedImpl> bug_variants;

  const std::string& reference() const { return implementations.front().name; }
};

class UnknownName : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

inline std::vector<SuiteEntry> list_suites() {
  using impl::BstMap;
  using impl::BstSet;
  auto map_bug = [](std::string name, std::string desc, BstMap::Fault f) {
    return NamedImpl{std::move(name), std::move(desc), [f] { return std::make_unique<BstMap>(f); }};
  };
  return {
      SuiteEntry{
          "finite_set",
          kFiniteSetSig,
          {{"listset", "sorted duplicate-free list", [] { return std::make_unique<impl::ListSet>(); }},
           {"bstset", "unbalanced binary search tree", [] { return std::make_unique<BstSet>(); }}},
          {{"bug_dedup", "insert does not deduplicate, so size inflates",
            [] { return std::make_unique<impl::ListSet>(false); }},
           {"bug_remove_left", "remove only descends into the left subtree",
            [] { return std::make_unique<BstSet>(BstSet::Fault::RemoveLeftOnly); }},
           {"bug_mem_strict", "mem sends keys equal to the node key left instead of matching",
            [] { return std::make_unique<BstSet>(BstSet::Fault::MemNonStrict); }}},
      },
      SuiteEntry{
          "bst_map",
          kBstMapSig,
          {{"correct", "unbalanced binary search tree", [] { return std::make_unique<BstMap>(); }}},
          {map_bug("b1", "insert returns a singleton tree, discarding the input", BstMap::Fault::InsertSingleton),
           map_bug("b2", "insert sends smaller keys into the right subtree", BstMap::Fault::InsertWrongSubtree),
           map_bug("b3", "insert keeps the old value of an existing key", BstMap::Fault::InsertNoOverwrite),
           map_bug("b4", "delete compares keys in reverse", BstMap::Fault::DeleteReversed),
           map_bug("b5", "delete drops the deleted node's whole subtree", BstMap::Fault::DeleteDropsSubtree),
           map_bug("b6", "union is right-biased on duplicate keys", BstMap::Fault::UnionRightBiased),
           map_bug("b7", "find matches the key one below a node's key", BstMap::Fault::FindOffByOne),
           map_bug("b8", "keys are emitted in pre-order", BstMap::Fault::KeysPreorder)},
      },
      SuiteEntry{
          "counter",
          kCounterSig,
          {{"intcounter", "machine integer", [] { return std::make_unique<impl::IntCounter>(); }},
           {"listcounter", "log of increments, summed on read", [] { return std::make_unique<impl::ListCounter>(); }}},
          {{"bug_saturate", "counter saturates at 10", [] { return std::make_unique<impl::IntCounter>(10); }}},
      },
  };
}

inline SuiteEntry find_suite(std::string_view name) {
  std::string known;
  for (auto& s : list_suites()) {
    if (s.name == name) return s;
    known += (known.empty() ? "" : ", ") + s.name;
  }
  throw UnknownName("unknown suite '" + std::string(name) + "' (available: " + known + ")");
}

inline ImplFactory find_factory(const SuiteEntry& suite, std::string_view impl) {
  std::string known;
  for (const auto* group : {&suite.implementations, &suite.bug_variants}) {
    for (const auto& n : *group) {
      if (n.name == impl) return n.make;
      known += (known.empty() ? "" : ", ") + n.name;
    }
  }
  throw UnknownName("unknown implementation '" + std::string(impl) + "' for suite " + suite.name +
                    " (available: " + known + ")");
}

// A fresh, reset instance.
inline std::unique_ptr<Implementation> get_implementation(std::string_view suite, std::string_view impl) {
  auto p = find_factory(find_suite(suite), impl)();
  p->reset();
  return p;
}

}  // namespace specdiff

#endif  // SPECDIFF_SUITE_HPP
