#pragma once

// Tree derivatives and ranks.
//
// Three derivatives act on a tree T, each keeping the nodes t whose
// subtree passes a test:
//
//   leaf derivative          T^t has a node other than the root
//   infinite derivative      T^t is infinite
//   incomparable derivative  T^t has infinitely many pairwise incomparable
//                            nodes other than the root
//
// The rank r(T) is the largest alpha with D^alpha(T) nonempty, with a
// distinguished Empty value for the empty tree. Everything here rests on
// one identity, provable by induction on alpha for each derivative:
//
//   D^alpha(T) = { t in T : r(T^t) >= alpha }
//
// (using that r(T) >= r(T^t) for every node t). It turns the transfinite
// iteration into a rank computation, which in turn follows structural
// rules on the TreeExpr constructors:
//
//   leaf rank:      point 0; explicit trees their height; graft adds the
//                   handle length; finite joins take the max over branches;
//                   infinite joins take sup over members of (rank + 1).
//   infinite /      point and explicit trees 0; graft and finite joins
//   incomparable:   forward the subtree ranks; infinite joins take the sup
//                   s of member ranks, plus one exactly when s is attained
//                   by infinitely many members.
//
// On well-founded trees the infinite and incomparable ranks coincide: a
// well-founded tree has an infinite antichain iff it is infinite (an
// infinite finitely-branching tree would have an infinite branch). They
// differ only on ill-founded trees, which in this representation always
// contain a full cone, where both derivatives fix the cone.
//
// For the canonical families the member at position beta has rank
// leftSubtract(stage, beta); the sup over beta < lambda is
// leftSubtract(stage, lambda) and is never attained. Tests spot-check this
// tower law by ranking individual members through the engine.

#include <cstdint>
#include <map>
#include <string>
#include <utility>

#include "dst/error.hpp"
#include "dst/ordinal.hpp"
#include "dst/seq.hpp"
#include "dst/tree_expr.hpp"

namespace dst {

enum class DeriveKind { Leaf, Infinite, IncomparableInfinite };

inline std::string toString(DeriveKind k) {
  switch (k) {
    case DeriveKind::Leaf: return "l";
    case DeriveKind::Infinite: return "i";
    case DeriveKind::IncomparableInfinite: return "iie";
  }
  throw Error("unreachable derive kind");
}

inline DeriveKind parseDeriveKind(const std::string& s) {
  if (s == "l") return DeriveKind::Leaf;
  if (s == "i") return DeriveKind::Infinite;
  if (s == "iie") return DeriveKind::IncomparableInfinite;
  throw ParseError("unknown derivative kind: " + s + " (expected l, i, iie)");
}

// One derivative step on an explicit finite tree, by direct scan. No node
// of a finite tree has infinitely many extensions, so the infinite and
// incomparable derivatives are empty outright.
inline FiniteTree deriveFiniteTree(DeriveKind k, const FiniteTree& f) {
  if (k != DeriveKind::Leaf) return FiniteTree{};
  std::set<Seq> kept;
  for (const Seq& t : f.nodes())
    if (!f.childEntries(t).empty()) kept.insert(t);
  // Keeping exactly the non-leaves preserves prefix closure.
  return FiniteTree::fromNodes(std::move(kept));
}

namespace detail {

using RankMemo = std::map<const Node*, Ordinal>;

inline Ordinal rankOrdinal(DeriveKind k, const TreeExpr& t, RankMemo& memo);

// Sup over the members of a family of (member rank + 1) for the leaf
// derivative, and of member ranks with the infinitely-attained adjustment
// otherwise. Empty members contribute nothing.
inline Ordinal familyRank(DeriveKind k, const TreeFamily& f, RankMemo& memo) {
  switch (f.kind) {
    case TreeFamily::Kind::Constant:
      // The same rank occurs at every branch, so both the leaf sup and the
      // attained-infinitely-often adjustment add exactly one.
      return rankOrdinal(k, f.tail, memo) + 1;
    case TreeFamily::Kind::PrefixThenConstant: {
      const Ordinal tailRank = rankOrdinal(k, f.tail, memo);
      if (k == DeriveKind::Leaf) {
        Ordinal best = tailRank + 1;
        for (const TreeExpr& p : f.prefix)
          if (!p.isEmpty())
            best = maxOrdinal(best, rankOrdinal(k, p, memo) + 1);
        return best;
      }
      // The tail rank is attained infinitely often; a strictly larger
      // prefix rank is attained finitely often and wins without the +1.
      Ordinal best = tailRank;
      for (const TreeExpr& p : f.prefix)
        if (!p.isEmpty()) best = maxOrdinal(best, rankOrdinal(k, p, memo));
      return best == tailRank ? tailRank + 1 : best;
    }
    case TreeFamily::Kind::CanonicalSeq:
      // Member ranks leftSubtract(stage, beta) approach this sup strictly
      // from below, so it is never attained and no +1 applies for any
      // derivative kind.
      return Ordinal::leftSubtract(f.stage, f.lambda);
  }
  throw Error("unreachable family kind");
}

inline Ordinal rankOrdinal(DeriveKind k, const TreeExpr& t, RankMemo& memo) {
  switch (t.kind()) {
    case TreeExpr::Kind::Point:
      return Ordinal();
    case TreeExpr::Kind::Explicit:
      return k == DeriveKind::Leaf
                 ? Ordinal(static_cast<std::uint64_t>(t.asFiniteTree().depth()))
                 : Ordinal();
    case TreeExpr::Kind::FullCone:
      throw IllFoundedError("rank of an ill-founded tree");
    default:
      break;
  }
  auto it = memo.find(&t.node());
  if (it != memo.end()) return it->second;
  Ordinal result;
  if (auto* g = std::get_if<GraftNode>(&t.node().v)) {
    result = rankOrdinal(k, g->sub, memo);
    if (k == DeriveKind::Leaf) result = Ordinal(g->head.size()) + result;
  } else if (auto* jf = std::get_if<JoinFiniteNode>(&t.node().v)) {
    for (const auto& [head, sub] : jf->branches) {
      Ordinal r = rankOrdinal(k, sub, memo);
      if (k == DeriveKind::Leaf) r = Ordinal(head.size()) + r;
      result = maxOrdinal(result, r);
    }
  } else {
    result = familyRank(k, std::get<JoinOmegaNode>(t.node().v).family, memo);
  }
  memo.emplace(&t.node(), result);
  return result;
}

// Number of leaf-stripping steps until at most the root remains; the
// literal reading of the leaf rank on finite trees.
inline std::uint64_t leafStripSteps(FiniteTree f) {
  std::uint64_t steps = 0;
  while (f.size() > 1) {
    f = deriveFiniteTree(DeriveKind::Leaf, f);
    ++steps;
  }
  return steps;
}

// Second computation of the leaf rank, following the successor formula
// r(T) = sup over children c of (r(T^c) + 1) shape by shape. Kept separate
// from rankOrdinal so the two can be required to agree.
inline Ordinal leafRankByFormula(const TreeExpr& t) {
  switch (t.kind()) {
    case TreeExpr::Kind::Point:
      return Ordinal();
    case TreeExpr::Kind::Explicit:
      return Ordinal(leafStripSteps(t.asFiniteTree()));
    case TreeExpr::Kind::FullCone:
      throw IllFoundedError("rank of an ill-founded tree");
    case TreeExpr::Kind::Graft: {
      const auto& g = std::get<GraftNode>(t.node().v);
      return Ordinal(g.head.size()) + leafRankByFormula(g.sub);
    }
    case TreeExpr::Kind::JoinFinite: {
      Ordinal best;
      for (const auto& [head, sub] :
           std::get<JoinFiniteNode>(t.node().v).branches)
        best = maxOrdinal(best, Ordinal(head.size()) + leafRankByFormula(sub));
      return best;
    }
    case TreeExpr::Kind::JoinOmega: {
      const TreeFamily& f = std::get<JoinOmegaNode>(t.node().v).family;
      switch (f.kind) {
        case TreeFamily::Kind::Constant:
          return leafRankByFormula(f.tail) + 1;
        case TreeFamily::Kind::PrefixThenConstant: {
          Ordinal best = leafRankByFormula(f.tail) + 1;
          for (const TreeExpr& p : f.prefix)
            if (!p.isEmpty()) best = maxOrdinal(best, leafRankByFormula(p) + 1);
          return best;
        }
        case TreeFamily::Kind::CanonicalSeq:
          return Ordinal::leftSubtract(f.stage, f.lambda);
      }
      throw Error("unreachable family kind");
    }
  }
  throw Error("unreachable tree kind");
}

}  // namespace detail

inline Rank rank(DeriveKind k, const TreeExpr& t) {
  if (t.isEmpty()) return Rank::ofEmpty();
  if (!t.wellFounded())
    throw IllFoundedError(
        "rank of an ill-founded tree (it contains a full cone, so every "
        "derivative fixes part of it)");
  detail::RankMemo memo;
  Ordinal r = detail::rankOrdinal(k, t, memo);
  if (k == DeriveKind::Leaf) {
    Ordinal second = detail::leafRankByFormula(t);
    if (!(second == r))
      throw Error("internal: leaf rank computations disagree: " + toString(r) +
                  " vs " + toString(second));
  }
  return Rank::of(r);
}

// D^alpha(t). Works on ill-founded trees as well: full cones are fixed by
// every derivative, and the well-founded parts around them are filtered by
// rank.
inline TreeExpr iterate(DeriveKind k, const TreeExpr& t, const Ordinal& alpha) {
  if (alpha.isZero()) return t;
  switch (t.kind()) {
    case TreeExpr::Kind::Point:
      return TreeExpr::emptyTree();
    case TreeExpr::Kind::FullCone:
      return TreeExpr::fullCone();
    case TreeExpr::Kind::Explicit: {
      if (k != DeriveKind::Leaf || !alpha.isFinite())
        return TreeExpr::emptyTree();
      FiniteTree f = t.asFiniteTree();
      for (std::uint64_t i = 0; i < alpha.natValue() && !f.empty(); ++i)
        f = deriveFiniteTree(k, f);
      return TreeExpr::explicitTree(std::move(f));
    }
    case TreeExpr::Kind::Graft: {
      const auto& g = std::get<GraftNode>(t.node().v);
      TreeExpr sub = iterate(k, g.sub, alpha);
      if (!sub.isEmpty()) return TreeExpr::graft(g.head, sub);
      if (k != DeriveKind::Leaf) return TreeExpr::emptyTree();
      // The subtree died, but for the leaf derivative a prefix of the
      // handle can survive: the node at depth j has rank (|h| - j) + r.
      const Ordinal r = rank(k, g.sub).value;
      if (!r.isFinite() || !alpha.isFinite()) return TreeExpr::emptyTree();
      const std::uint64_t reach = g.head.size() + r.natValue();
      if (alpha.natValue() > reach) return TreeExpr::emptyTree();
      const std::uint64_t keep = reach - alpha.natValue();
      if (keep == 0) return TreeExpr::point();
      Seq prefix(g.head.begin(),
                 g.head.begin() + static_cast<std::ptrdiff_t>(
                                      std::min(keep, g.head.size())));
      return TreeExpr::explicitTree(clTr({prefix}));
    }
    case TreeExpr::Kind::JoinFinite: {
      const auto& jf = std::get<JoinFiniteNode>(t.node().v);
      std::vector<std::pair<Seq, TreeExpr>> branches;
      bool rootAlive = false;
      for (const auto& [head, sub] : jf.branches) {
        TreeExpr sub2 = iterate(k, sub, alpha);
        if (!sub2.isEmpty()) {
          branches.emplace_back(head, sub2);
          rootAlive = true;
          continue;
        }
        if (k != DeriveKind::Leaf) continue;
        const Ordinal r = rank(k, sub).value;
        if (!r.isFinite() || !alpha.isFinite()) continue;
        const std::uint64_t reach = head.size() + r.natValue();
        if (alpha.natValue() > reach) continue;
        rootAlive = true;
        const std::uint64_t keep = reach - alpha.natValue();
        if (keep == 0) continue;
        Seq prefix(head.begin(),
                   head.begin() + static_cast<std::ptrdiff_t>(
                                      std::min(keep, head.size())));
        branches.emplace_back(std::move(prefix), TreeExpr::point());
      }
      if (!rootAlive) return TreeExpr::emptyTree();
      return TreeExpr::joinFinite(std::move(branches));
    }
    case TreeExpr::Kind::JoinOmega: {
      const TreeFamily& f = std::get<JoinOmegaNode>(t.node().v).family;
      switch (f.kind) {
        case TreeFamily::Kind::Constant: {
          TreeExpr sub = iterate(k, f.tail, alpha);
          if (!sub.isEmpty())
            return TreeExpr::joinOmega(TreeFamily::constant(sub));
          // All members died at once; the root survives exactly when the
          // whole tree had rank >= alpha, i.e. member rank + 1 >= alpha.
          return rank(k, f.tail).value + 1 >= alpha ? TreeExpr::point()
                                                    : TreeExpr::emptyTree();
        }
        case TreeFamily::Kind::PrefixThenConstant: {
          TreeExpr tail = iterate(k, f.tail, alpha);
          std::vector<TreeExpr> prefix;
          for (const TreeExpr& p : f.prefix) prefix.push_back(iterate(k, p, alpha));
          if (!tail.isEmpty())
            return TreeExpr::joinOmega(
                TreeFamily::prefixThenConstant(std::move(prefix), tail));
          std::vector<std::pair<Seq, TreeExpr>> branches;
          for (std::size_t n = 0; n < prefix.size(); ++n)
            if (!prefix[n].isEmpty())
              branches.emplace_back(Seq{static_cast<int>(n)}, prefix[n]);
          if (!branches.empty())
            // A surviving member has rank >= alpha, so the root does too.
            return TreeExpr::joinFinite(std::move(branches));
          return rank(k, t).value >= alpha ? TreeExpr::point()
                                           : TreeExpr::emptyTree();
        }
        case TreeFamily::Kind::CanonicalSeq: {
          // Stages compose: iterating alpha more steps on the stage-a
          // family lands on stage a + alpha.
          const Ordinal total = f.stage + alpha;
          if (f.lambda < total) return TreeExpr::emptyTree();
          if (f.lambda == total) return TreeExpr::point();
          return TreeExpr::joinOmega(
              TreeFamily::canonicalSeq(f.lambda, total, f.altEnum));
        }
      }
      throw Error("unreachable family kind");
    }
  }
  throw Error("unreachable tree kind");
}

inline TreeExpr deriveL(const TreeExpr& t) {
  return iterate(DeriveKind::Leaf, t, Ordinal(1));
}
inline TreeExpr deriveI(const TreeExpr& t) {
  return iterate(DeriveKind::Infinite, t, Ordinal(1));
}
inline TreeExpr deriveIie(const TreeExpr& t) {
  return iterate(DeriveKind::IncomparableInfinite, t, Ordinal(1));
}

}  // namespace dst
