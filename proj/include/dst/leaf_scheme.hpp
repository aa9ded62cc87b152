#pragma once

// Leaf-schemes over a finite ground universe.
//
// A leaf-scheme assigns a subset of the universe to every leaf of a finite
// tree; evaluation propagates values to the root taking unions at nodes of
// odd leaf-rank and intersections at even positive leaf-rank. The module
// also compiles union/intersection set expressions into schemes over the
// full width-w grid of the matching depth, padding unused branches with
// the expression's own value so the result is unchanged.
//
// The ground universe is a plain finite set of atom names; the set algebra
// mechanized here never needs topology, so "closed set" is modeled as
// "arbitrary subset".

#include <algorithm>
#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "dst/derive.hpp"
#include "dst/error.hpp"
#include "dst/ordinal.hpp"
#include "dst/seq.hpp"
#include "dst/tree_expr.hpp"

namespace dst {

using Atom = std::string;
using AtomSet = std::set<Atom>;

inline AtomSet setUnion(const AtomSet& a, const AtomSet& b) {
  AtomSet out = a;
  out.insert(b.begin(), b.end());
  return out;
}

inline AtomSet setInter(const AtomSet& a, const AtomSet& b) {
  AtomSet out;
  std::set_intersection(a.begin(), a.end(), b.begin(), b.end(),
                        std::inserter(out, out.begin()));
  return out;
}

inline AtomSet setMinus(const AtomSet& a, const AtomSet& b) {
  AtomSet out;
  std::set_difference(a.begin(), a.end(), b.begin(), b.end(),
                      std::inserter(out, out.begin()));
  return out;
}

inline bool isSubset(const AtomSet& a, const AtomSet& b) {
  return std::includes(b.begin(), b.end(), a.begin(), a.end());
}

struct Universe {
  std::vector<Atom> atoms;

  explicit Universe(std::vector<Atom> a) : atoms(std::move(a)) {
    if (atoms.empty()) throw PreconditionError("universe must be nonempty");
    std::set<Atom> seen(atoms.begin(), atoms.end());
    if (seen.size() != atoms.size())
      throw PreconditionError("universe atoms must be distinct");
  }

  AtomSet all() const { return AtomSet(atoms.begin(), atoms.end()); }
  bool contains(const Atom& a) const {
    return std::find(atoms.begin(), atoms.end(), a) != atoms.end();
  }
};

class LeafScheme {
 public:
  LeafScheme(FiniteTree tree, std::map<Seq, AtomSet> assign)
      : tree_(std::move(tree)), assign_(std::move(assign)) {
    if (tree_.empty())
      throw PreconditionError("leaf scheme needs a nonempty tree");
    std::vector<Seq> ls = tree_.leaves();
    if (ls.size() != assign_.size())
      throw PreconditionError("leaf scheme must assign exactly the leaves");
    for (const Seq& l : ls)
      if (!assign_.count(l))
        throw PreconditionError("leaf scheme is missing leaf " +
                                seqToString(l));
  }

  const FiniteTree& tree() const { return tree_; }
  const std::map<Seq, AtomSet>& assign() const { return assign_; }
  const AtomSet& at(const Seq& leaf) const {
    auto it = assign_.find(leaf);
    if (it == assign_.end())
      throw PreconditionError("not a leaf: " + seqToString(leaf));
    return it->second;
  }

 private:
  FiniteTree tree_;
  std::map<Seq, AtomSet> assign_;
};

namespace detail {

inline AtomSet evalSchemeAt(const LeafScheme& h, const Seq& t) {
  const std::vector<int> children = h.tree().childEntries(t);
  if (children.empty()) return h.at(t);
  // Odd leaf-rank of the subtree takes the union of the children, even
  // takes the intersection. The leaf rank of a finite tree is its height.
  const std::size_t height = h.tree().subtreeAt(t).depth();
  bool first = true;
  AtomSet acc;
  for (int c : children) {
    AtomSet v = evalSchemeAt(h, concat(t, c));
    if (first) {
      acc = std::move(v);
      first = false;
    } else {
      acc = (height % 2 == 1) ? setUnion(acc, v) : setInter(acc, v);
    }
  }
  return acc;
}

}  // namespace detail

inline AtomSet evalScheme(const LeafScheme& h) {
  return detail::evalSchemeAt(h, {});
}

/// The shrink relation: every leaf of h2 sits between h(t) cut down to x
// and h(t) itself. When it holds and h evaluates to x, so does h2.
inline bool shrinkScheme(const LeafScheme& h, const AtomSet& x,
                         const LeafScheme& h2) {
  if (!(h.tree() == h2.tree()))
    throw PreconditionError("shrinkScheme needs schemes on the same tree");
  for (const auto& [leaf, value] : h.assign()) {
    const AtomSet& v2 = h2.at(leaf);
    if (!isSubset(setInter(value, x), v2)) return false;
    if (!isSubset(v2, value)) return false;
  }
  return true;
}

// ---------------------------------------------------------------------------
// Set expressions and the grid compiler.

struct SetExpr {
  enum class Kind { Base, Union, Inter };
  Kind kind = Kind::Base;
  AtomSet base;
  std::vector<SetExpr> items;

  static SetExpr makeBase(AtomSet s) {
    SetExpr e;
    e.kind = Kind::Base;
    e.base = std::move(s);
    return e;
  }
  static SetExpr makeUnion(std::vector<SetExpr> items) {
    SetExpr e;
    e.kind = Kind::Union;
    e.items = std::move(items);
    return e;
  }
  static SetExpr makeInter(std::vector<SetExpr> items) {
    SetExpr e;
    e.kind = Kind::Inter;
    e.items = std::move(items);
    return e;
  }
};

// Empty unions are the empty set; empty intersections are the whole
// universe.
inline AtomSet evalExpr(const SetExpr& e, const Universe& u) {
  switch (e.kind) {
    case SetExpr::Kind::Base:
      for (const Atom& a : e.base)
        if (!u.contains(a))
          throw PreconditionError("expression uses an atom outside the "
                                  "universe: " + a);
      return e.base;
    case SetExpr::Kind::Union: {
      AtomSet acc;
      for (const SetExpr& item : e.items) acc = setUnion(acc, evalExpr(item, u));
      return acc;
    }
    case SetExpr::Kind::Inter: {
      AtomSet acc = u.all();
      for (const SetExpr& item : e.items) acc = setInter(acc, evalExpr(item, u));
      return acc;
    }
  }
  throw Error("unreachable expression kind");
}

// Merge directly nested operations of the same kind, so the alternation
// class reflects genuine alternation.
inline SetExpr normalizeExpr(const SetExpr& e) {
  if (e.kind == SetExpr::Kind::Base) return e;
  std::vector<SetExpr> flat;
  for (const SetExpr& item : e.items) {
    SetExpr n = normalizeExpr(item);
    if (n.kind == e.kind) {
      for (SetExpr& sub : n.items) flat.push_back(std::move(sub));
    } else {
      flat.push_back(std::move(n));
    }
  }
  SetExpr out;
  out.kind = e.kind;
  out.items = std::move(flat);
  return out;
}

// Alternation class: bases are 0, unions take the smallest odd number
// above all item classes, intersections the smallest even one.
inline std::uint64_t exprClass(const SetExpr& e) {
  if (e.kind == SetExpr::Kind::Base) return 0;
  std::uint64_t worst = 0;
  for (const SetExpr& item : e.items)
    worst = std::max(worst, exprClass(item));
  if (e.kind == SetExpr::Kind::Union)
    return worst % 2 == 0 ? worst + 1 : worst + 2;
  return worst % 2 == 1 ? worst + 1 : worst + 2;
}

namespace detail {

// Place e at a grid node whose subtree has leaf-rank `level`. At a leaf the
// value is eval(e). At a union (odd) or intersection (even) level, matching
// operations spread their items over the children; anything else passes
// through child 0. Padding children carry eval(e), which changes neither a
// union nor an intersection containing eval(e) already.
inline void compileAt(const SetExpr& e, const Universe& u, std::uint64_t level,
                      int width, const Seq& at, std::map<Seq, AtomSet>& out) {
  if (level == 0) {
    out[at] = evalExpr(e, u);
    return;
  }
  const bool unionLevel = level % 2 == 1;
  const bool spread = (unionLevel && e.kind == SetExpr::Kind::Union) ||
                      (!unionLevel && e.kind == SetExpr::Kind::Inter);
  if (spread && e.items.size() > static_cast<std::size_t>(width))
    throw PreconditionError(
        "width " + std::to_string(width) + " is too small for " +
        std::to_string(e.items.size()) + " operands");
  const SetExpr pad = SetExpr::makeBase(evalExpr(e, u));
  for (int c = 0; c < width; ++c) {
    const std::size_t idx = static_cast<std::size_t>(c);
    const SetExpr* child = &pad;
    if (spread) {
      if (idx < e.items.size()) child = &e.items[idx];
    } else if (c == 0) {
      child = &e;
    }
    compileAt(*child, u, level - 1, width, concat(at, c), out);
  }
}

}  // namespace detail

// Compile a set expression into a scheme over the full width-w grid of
// depth alpha (the width-w truncation of the canonical tree of rank
// alpha). The expression's alternation class must not exceed alpha.
inline LeafScheme compileSimple(const SetExpr& e, const Universe& u,
                                const Ordinal& alpha, int width) {
  if (!alpha.isFinite())
    throw PreconditionError(
        "compileSimple targets finite ranks; the compiled tree is the "
        "depth-alpha grid");
  if (width < 1) throw PreconditionError("width must be positive");
  const SetExpr norm = normalizeExpr(e);
  const std::uint64_t cls = exprClass(norm);
  if (cls > alpha.natValue())
    throw PreconditionError("expression of alternation class " +
                            std::to_string(cls) +
                            " does not fit rank " + toString(alpha));
  std::map<Seq, AtomSet> assign;
  detail::compileAt(norm, u, alpha.natValue(), width, {}, assign);
  return LeafScheme(gridTree(alpha.natValue(), width), std::move(assign));
}

}  // namespace dst
