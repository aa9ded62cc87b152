#pragma once

// Symbolic trees on omega.
//
// A TreeExpr denotes a (possibly infinite) prefix-closed set of finite
// sequences, built from six constructors:
//
//   point                the one-node tree {()}
//   explicit(F)          a finite tree given by its node set
//   graft(h, S)          prefixes of h, plus h followed by members of S
//   joinFinite(branches) {()} plus finitely many grafts with distinct
//                        first entries
//   joinOmega(family)    {()} plus, under each root entry n, the n-th
//                        member of an infinite tree family
//   fullCone             all of omega^{<omega}
//
// Constructors normalize: finite denotations collapse to explicit form,
// nested grafts merge their heads, degenerate joins collapse to point.
// After normalization a TreeExpr denotes a finite tree iff its kind is
// Point or Explicit.
//
// Families come in three shapes: constant, finitely many exceptional
// members followed by a constant tail, and the canonical sequence of
// staged canonical trees along a limit ordinal (the shape produced by
// tree derivatives of canonical trees; see derive.hpp).

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "dst/error.hpp"
#include "dst/ordinal.hpp"
#include "dst/seq.hpp"

namespace dst {

// Rank of a tree: an ordinal, or the distinguished marker for the empty
// tree (printed as -1).
struct Rank {
  bool emptyTree = false;
  Ordinal value;

  static Rank ofEmpty() { return Rank{true, Ordinal()}; }
  static Rank of(Ordinal v) { return Rank{false, std::move(v)}; }

  friend bool operator==(const Rank&, const Rank&) = default;
  friend bool operator<(const Rank& a, const Rank& b) {
    if (a.emptyTree) return !b.emptyTree;
    if (b.emptyTree) return false;
    return a.value < b.value;
  }
  friend bool operator<=(const Rank& a, const Rank& b) { return a < b || a == b; }
  friend bool operator>(const Rank& a, const Rank& b) { return b < a; }
  friend bool operator>=(const Rank& a, const Rank& b) { return b <= a; }
};

inline std::string toString(const Rank& r) {
  return r.emptyTree ? "-1" : toString(r.value);
}

// Root children of a tree, reported either as an explicit finite list or
// as "all entries except finitely many".
struct ChildrenProfile {
  enum class Kind { Finite, Cofinite };
  Kind kind = Kind::Finite;
  std::vector<int> entries;  // Finite: the children; Cofinite: the excluded.
};

struct Node;
class TreeExpr;
TreeExpr canonicalTree(const Ordinal& alpha, bool altEnum = false);
TreeExpr derivedCanonicalTree(const Ordinal& beta, const Ordinal& stage,
                              bool altEnum = false);

class TreeExpr {
 public:
  enum class Kind { Point, Explicit, Graft, JoinOmega, JoinFinite, FullCone };

  // Default is the one-node tree; use emptyTree() for the empty tree.
  TreeExpr();

  static TreeExpr point();
  static TreeExpr emptyTree();
  static TreeExpr explicitTree(FiniteTree t);
  static TreeExpr graft(const Seq& head, const TreeExpr& sub);
  static TreeExpr joinFinite(std::vector<std::pair<Seq, TreeExpr>> branches);
  static TreeExpr joinOmega(struct TreeFamily family);
  static TreeExpr fullCone();

  Kind kind() const;
  const Node& node() const { return *p_; }

  bool isEmpty() const;
  bool denotesPoint() const { return kind() == Kind::Point; }
  // After normalization, finite denotations are always in explicit form.
  bool isFiniteTree() const {
    return kind() == Kind::Point || kind() == Kind::Explicit;
  }
  FiniteTree asFiniteTree() const;

  bool member(const Seq& s) const;
  TreeExpr subtreeAt(const Seq& s) const;
  ChildrenProfile childrenAtRoot() const;
  std::vector<int> childEntriesBelow(int width) const;
  FiniteTree truncate(std::size_t depth, int width) const;
  std::optional<std::size_t> depthBound() const;
  bool wellFounded() const;

  bool structuralEquals(const TreeExpr& other) const;

 private:
  explicit TreeExpr(std::shared_ptr<const Node> p) : p_(std::move(p)) {}
  std::shared_ptr<const Node> p_;
};

struct TreeFamily {
  enum class Kind { Constant, PrefixThenConstant, CanonicalSeq };

  Kind kind = Kind::Constant;

  // Constant: every member is `tail`.
  // PrefixThenConstant: member n is prefix[n] for n < |prefix|, else `tail`.
  std::vector<TreeExpr> prefix;
  TreeExpr tail;

  // CanonicalSeq: member n is the stage-th derivative of the canonical tree
  // at position limitEnumeration(lambda, n) (alternate enumeration when
  // altEnum is set).
  Ordinal lambda;
  Ordinal stage;
  bool altEnum = false;

  static TreeFamily constant(TreeExpr member) {
    TreeFamily f;
    f.kind = Kind::Constant;
    f.tail = std::move(member);
    return f;
  }

  static TreeFamily prefixThenConstant(std::vector<TreeExpr> prefix,
                                       TreeExpr tail) {
    TreeFamily f;
    f.kind = Kind::PrefixThenConstant;
    f.prefix = std::move(prefix);
    f.tail = std::move(tail);
    return f;
  }

  static TreeFamily canonicalSeq(Ordinal lambda, Ordinal stage = Ordinal(),
                                 bool altEnum = false) {
    if (!lambda.isLimit())
      throw PreconditionError("canonical family needs a limit ordinal, got " +
                              toString(lambda));
    TreeFamily f;
    f.kind = Kind::CanonicalSeq;
    f.lambda = std::move(lambda);
    f.stage = std::move(stage);
    f.altEnum = altEnum;
    return f;
  }

  TreeExpr member(std::uint64_t n) const {
    switch (kind) {
      case Kind::Constant:
        return tail;
      case Kind::PrefixThenConstant:
        return n < prefix.size() ? prefix[static_cast<std::size_t>(n)] : tail;
      case Kind::CanonicalSeq:
        return derivedCanonicalTree(memberPosition(n), stage, altEnum);
    }
    throw Error("unreachable family kind");
  }

  // For the canonical sequence, the ordinal position of member n.
  Ordinal memberPosition(std::uint64_t n) const {
    if (kind != Kind::CanonicalSeq)
      throw PreconditionError("memberPosition applies to canonical families");
    return altEnum ? limitEnumerationAlt(lambda, n)
                   : limitEnumeration(lambda, n);
  }

  bool memberNonEmpty(std::uint64_t n) const {
    switch (kind) {
      case Kind::Constant:
        return !tail.isEmpty();
      case Kind::PrefixThenConstant:
        return n < prefix.size() ? !prefix[static_cast<std::size_t>(n)].isEmpty()
                                 : !tail.isEmpty();
      case Kind::CanonicalSeq:
        // The stage-th derivative of the canonical tree at position beta is
        // nonempty exactly when beta >= stage; see derive.hpp.
        return memberPosition(n) >= stage;
    }
    throw Error("unreachable family kind");
  }
};

struct PointNode {};
struct FullConeNode {};
struct ExplicitNode {
  FiniteTree tree;
};
struct GraftNode {
  Seq head;  // nonempty
  TreeExpr sub;
};
struct JoinFiniteNode {
  // Sorted by head first entry; heads nonempty with distinct first entries.
  std::vector<std::pair<Seq, TreeExpr>> branches;
};
struct JoinOmegaNode {
  TreeFamily family;
};

struct Node {
  std::variant<PointNode, ExplicitNode, GraftNode, JoinOmegaNode,
               JoinFiniteNode, FullConeNode>
      v;
};

namespace detail {

inline std::shared_ptr<const Node> makeNode(
    std::variant<PointNode, ExplicitNode, GraftNode, JoinOmegaNode,
                 JoinFiniteNode, FullConeNode>
        v) {
  auto n = std::make_shared<Node>();
  n->v = std::move(v);
  return n;
}

}  // namespace detail

inline TreeExpr::TreeExpr() : p_(detail::makeNode(PointNode{})) {}

inline TreeExpr TreeExpr::point() { return TreeExpr(); }

inline TreeExpr TreeExpr::fullCone() {
  return TreeExpr(detail::makeNode(FullConeNode{}));
}

inline TreeExpr TreeExpr::emptyTree() {
  return TreeExpr(detail::makeNode(ExplicitNode{FiniteTree{}}));
}

inline TreeExpr TreeExpr::explicitTree(FiniteTree t) {
  if (t.size() == 1) return point();
  return TreeExpr(detail::makeNode(ExplicitNode{std::move(t)}));
}

inline TreeExpr::Kind TreeExpr::kind() const {
  struct V {
    Kind operator()(const PointNode&) const { return Kind::Point; }
    Kind operator()(const ExplicitNode&) const { return Kind::Explicit; }
    Kind operator()(const GraftNode&) const { return Kind::Graft; }
    Kind operator()(const JoinOmegaNode&) const { return Kind::JoinOmega; }
    Kind operator()(const JoinFiniteNode&) const { return Kind::JoinFinite; }
    Kind operator()(const FullConeNode&) const { return Kind::FullCone; }
  };
  return std::visit(V{}, p_->v);
}

inline bool TreeExpr::isEmpty() const {
  if (auto* e = std::get_if<ExplicitNode>(&p_->v)) return e->tree.empty();
  return false;
}

inline FiniteTree TreeExpr::asFiniteTree() const {
  if (kind() == Kind::Point) return FiniteTree::single();
  if (auto* e = std::get_if<ExplicitNode>(&p_->v)) return e->tree;
  throw PreconditionError("tree is not finite");
}

inline TreeExpr TreeExpr::graft(const Seq& head, const TreeExpr& sub) {
  if (head.empty()) return sub;
  switch (sub.kind()) {
    case Kind::Point:
      return explicitTree(clTr({head}));
    case Kind::Explicit: {
      FiniteTree out;
      out.insertWithPrefixes(head);
      for (const Seq& t : std::get<ExplicitNode>(sub.node().v).tree.nodes())
        out.insertWithPrefixes(concat(head, t));
      return explicitTree(std::move(out));
    }
    case Kind::Graft: {
      const auto& g = std::get<GraftNode>(sub.node().v);
      return graft(concat(head, g.head), g.sub);
    }
    default:
      return TreeExpr(detail::makeNode(GraftNode{head, sub}));
  }
}

inline TreeExpr TreeExpr::joinFinite(
    std::vector<std::pair<Seq, TreeExpr>> branches) {
  std::vector<std::pair<Seq, TreeExpr>> norm;
  for (auto& [head, sub] : branches) {
    if (head.empty())
      throw PreconditionError("finite join branch needs a nonempty head");
    // Merge graft heads so branch subtrees never start with a graft.
    if (sub.kind() == Kind::Graft) {
      const auto& g = std::get<GraftNode>(sub.node().v);
      norm.emplace_back(concat(head, g.head), g.sub);
    } else {
      norm.emplace_back(std::move(head), std::move(sub));
    }
  }
  std::sort(norm.begin(), norm.end(),
            [](const auto& a, const auto& b) { return a.first[0] < b.first[0]; });
  for (std::size_t i = 1; i < norm.size(); ++i)
    if (norm[i - 1].first[0] == norm[i].first[0])
      throw PreconditionError(
          "finite join branches need distinct first entries");

  if (norm.empty()) return point();
  if (norm.size() == 1) return graft(norm[0].first, norm[0].second);

  bool allFinite = true;
  for (const auto& [head, sub] : norm)
    if (!sub.isFiniteTree()) { allFinite = false; break; }
  if (allFinite) {
    FiniteTree out = FiniteTree::single();
    for (const auto& [head, sub] : norm) {
      out.insertWithPrefixes(head);
      const FiniteTree fin = sub.asFiniteTree();
      for (const Seq& t : fin.nodes()) out.insertWithPrefixes(concat(head, t));
    }
    return explicitTree(std::move(out));
  }
  // Mixed join: a finite branch can arrive either as a long head over a
  // point or as a short head over an explicit tree. Collapse it to its
  // first entry so equal denotations share one representation.
  for (auto& [head, sub] : norm) {
    if (head.size() > 1 && sub.isFiniteTree()) {
      TreeExpr rest = graft(Seq(head.begin() + 1, head.end()), sub);
      head = Seq{head[0]};
      sub = std::move(rest);
    }
  }
  return TreeExpr(detail::makeNode(JoinFiniteNode{std::move(norm)}));
}

inline TreeExpr TreeExpr::joinOmega(TreeFamily family) {
  switch (family.kind) {
    case TreeFamily::Kind::Constant:
      if (family.tail.isEmpty()) return point();
      break;
    case TreeFamily::Kind::PrefixThenConstant: {
      // Drop prefix members that coincide with the tail.
      while (!family.prefix.empty() &&
             family.prefix.back().structuralEquals(family.tail))
        family.prefix.pop_back();
      if (family.tail.isEmpty()) {
        // Only finitely many branches remain.
        std::vector<std::pair<Seq, TreeExpr>> branches;
        for (std::size_t n = 0; n < family.prefix.size(); ++n)
          if (!family.prefix[n].isEmpty())
            branches.emplace_back(Seq{static_cast<int>(n)}, family.prefix[n]);
        return joinFinite(std::move(branches));
      }
      if (family.prefix.empty()) return joinOmega(TreeFamily::constant(family.tail));
      break;
    }
    case TreeFamily::Kind::CanonicalSeq:
      // All members vanish once the stage reaches lambda; only the root
      // survives.
      if (family.stage >= family.lambda) return point();
      break;
  }
  return TreeExpr(detail::makeNode(JoinOmegaNode{std::move(family)}));
}

inline bool TreeExpr::member(const Seq& s) const {
  struct V {
    const Seq& s;
    bool operator()(const PointNode&) const { return s.empty(); }
    bool operator()(const FullConeNode&) const { return true; }
    bool operator()(const ExplicitNode& n) const { return n.tree.contains(s); }
    bool operator()(const GraftNode& n) const {
      if (s.size() <= n.head.size()) return isPrefixOf(s, n.head);
      if (!isPrefixOf(n.head, s)) return false;
      return n.sub.member(suffixAfter(n.head, s));
    }
    bool operator()(const JoinFiniteNode& n) const {
      if (s.empty()) return true;
      for (const auto& [head, sub] : n.branches)
        if (head[0] == s[0]) return graft(head, sub).member(s);
      return false;
    }
    bool operator()(const JoinOmegaNode& n) const {
      if (s.empty()) return true;
      if (s[0] < 0) return false;
      return n.family.member(static_cast<std::uint64_t>(s[0]))
          .member(Seq(s.begin() + 1, s.end()));
    }
  };
  return std::visit(V{s}, p_->v);
}

inline TreeExpr TreeExpr::subtreeAt(const Seq& s) const {
  if (s.empty()) return *this;
  if (!member(s))
    throw PreconditionError("subtree root " + seqToString(s) +
                            " is not in the tree");
  struct V {
    const Seq& s;
    const TreeExpr& self;
    TreeExpr operator()(const PointNode&) const { return self; }
    TreeExpr operator()(const FullConeNode&) const { return fullCone(); }
    TreeExpr operator()(const ExplicitNode& n) const {
      return explicitTree(n.tree.subtreeAt(s));
    }
    TreeExpr operator()(const GraftNode& n) const {
      if (s.size() < n.head.size()) return graft(suffixAfter(s, n.head), n.sub);
      return n.sub.subtreeAt(suffixAfter(n.head, s));
    }
    TreeExpr operator()(const JoinFiniteNode& n) const {
      for (const auto& [head, sub] : n.branches)
        if (head[0] == s[0]) return graft(head, sub).subtreeAt(s);
      throw Error("unreachable: member check passed");
    }
    TreeExpr operator()(const JoinOmegaNode& n) const {
      return n.family.member(static_cast<std::uint64_t>(s[0]))
          .subtreeAt(Seq(s.begin() + 1, s.end()));
    }
  };
  return std::visit(V{s, *this}, p_->v);
}

inline ChildrenProfile TreeExpr::childrenAtRoot() const {
  struct V {
    ChildrenProfile operator()(const PointNode&) const { return {}; }
    ChildrenProfile operator()(const FullConeNode&) const {
      return {ChildrenProfile::Kind::Cofinite, {}};
    }
    ChildrenProfile operator()(const ExplicitNode& n) const {
      return {ChildrenProfile::Kind::Finite, n.tree.childEntries({})};
    }
    ChildrenProfile operator()(const GraftNode& n) const {
      return {ChildrenProfile::Kind::Finite, {n.head[0]}};
    }
    ChildrenProfile operator()(const JoinFiniteNode& n) const {
      std::vector<int> entries;
      for (const auto& [head, sub] : n.branches) entries.push_back(head[0]);
      return {ChildrenProfile::Kind::Finite, entries};
    }
    ChildrenProfile operator()(const JoinOmegaNode& n) const {
      const TreeFamily& f = n.family;
      switch (f.kind) {
        case TreeFamily::Kind::Constant:
          return {ChildrenProfile::Kind::Cofinite, {}};
        case TreeFamily::Kind::PrefixThenConstant: {
          std::vector<int> missing;
          for (std::size_t i = 0; i < f.prefix.size(); ++i)
            if (f.prefix[i].isEmpty()) missing.push_back(static_cast<int>(i));
          return {ChildrenProfile::Kind::Cofinite, missing};
        }
        case TreeFamily::Kind::CanonicalSeq: {
          if (f.stage.isZero()) return {ChildrenProfile::Kind::Cofinite, {}};
          if (!f.stage.isFinite())
            throw PreconditionError(
                "children of this derived family are not cofinite with "
                "finitely many exceptions");
          // Exactly the positions below the stage are missing.
          std::vector<int> missing;
          for (std::uint64_t b = 0; b < f.stage.natValue(); ++b)
            missing.push_back(static_cast<int>(
                f.altEnum ? limitEnumerationAltIndex(f.lambda, Ordinal(b))
                          : limitEnumerationIndex(f.lambda, Ordinal(b))));
          std::sort(missing.begin(), missing.end());
          return {ChildrenProfile::Kind::Cofinite, missing};
        }
      }
      throw Error("unreachable family kind");
    }
  };
  return std::visit(V{}, p_->v);
}

inline std::vector<int> TreeExpr::childEntriesBelow(int width) const {
  std::vector<int> out;
  if (isEmpty()) return out;
  // Families answer per-entry membership cheaply, so probing each entry
  // also covers profiles that are not finitely cofinite.
  if (auto* j = std::get_if<JoinOmegaNode>(&p_->v)) {
    for (int e = 0; e < width; ++e)
      if (j->family.memberNonEmpty(static_cast<std::uint64_t>(e)))
        out.push_back(e);
    return out;
  }
  ChildrenProfile prof = childrenAtRoot();
  if (prof.kind == ChildrenProfile::Kind::Finite) {
    for (int e : prof.entries)
      if (e < width) out.push_back(e);
    std::sort(out.begin(), out.end());
  } else {
    for (int e = 0; e < width; ++e)
      if (std::find(prof.entries.begin(), prof.entries.end(), e) ==
          prof.entries.end())
        out.push_back(e);
  }
  return out;
}

inline FiniteTree TreeExpr::truncate(std::size_t depth, int width) const {
  FiniteTree out;
  if (isEmpty()) return out;
  out.insertWithPrefixes({});
  if (depth == 0) return out;
  for (int e : childEntriesBelow(width)) {
    FiniteTree sub = subtreeAt({e}).truncate(depth - 1, width);
    for (const Seq& t : sub.nodes()) out.insertWithPrefixes(concat(Seq{e}, t));
  }
  return out;
}

inline std::optional<std::size_t> TreeExpr::depthBound() const {
  struct V {
    std::optional<std::size_t> operator()(const PointNode&) const { return 0; }
    std::optional<std::size_t> operator()(const FullConeNode&) const {
      return std::nullopt;
    }
    std::optional<std::size_t> operator()(const ExplicitNode& n) const {
      return n.tree.depth();
    }
    std::optional<std::size_t> operator()(const GraftNode& n) const {
      auto d = n.sub.depthBound();
      if (!d) return std::nullopt;
      return n.head.size() + *d;
    }
    std::optional<std::size_t> operator()(const JoinFiniteNode& n) const {
      std::size_t best = 0;
      for (const auto& [head, sub] : n.branches) {
        auto d = sub.depthBound();
        if (!d) return std::nullopt;
        best = std::max(best, head.size() + *d);
      }
      return best;
    }
    std::optional<std::size_t> operator()(const JoinOmegaNode& n) const {
      const TreeFamily& f = n.family;
      switch (f.kind) {
        case TreeFamily::Kind::Constant: {
          auto d = f.tail.depthBound();
          if (!d) return std::nullopt;
          return 1 + *d;
        }
        case TreeFamily::Kind::PrefixThenConstant: {
          auto d = f.tail.depthBound();
          if (!d) return std::nullopt;
          std::size_t best = 1 + *d;
          for (const TreeExpr& p : f.prefix) {
            auto dp = p.depthBound();
            if (!dp) return std::nullopt;
            best = std::max(best, 1 + *dp);
          }
          return best;
        }
        case TreeFamily::Kind::CanonicalSeq:
          // The enumeration passes through canonical trees of every finite
          // rank, and those have unbounded depth.
          return std::nullopt;
      }
      throw Error("unreachable family kind");
    }
  };
  return std::visit(V{}, p_->v);
}

inline bool TreeExpr::wellFounded() const {
  struct V {
    bool operator()(const PointNode&) const { return true; }
    bool operator()(const FullConeNode&) const { return false; }
    bool operator()(const ExplicitNode&) const { return true; }
    bool operator()(const GraftNode& n) const { return n.sub.wellFounded(); }
    bool operator()(const JoinFiniteNode& n) const {
      for (const auto& [head, sub] : n.branches)
        if (!sub.wellFounded()) return false;
      return true;
    }
    bool operator()(const JoinOmegaNode& n) const {
      const TreeFamily& f = n.family;
      switch (f.kind) {
        case TreeFamily::Kind::Constant:
          return f.tail.wellFounded();
        case TreeFamily::Kind::PrefixThenConstant:
          for (const TreeExpr& p : f.prefix)
            if (!p.wellFounded()) return false;
          return f.tail.wellFounded();
        case TreeFamily::Kind::CanonicalSeq:
          // Canonical trees are well founded at every position, by
          // induction along the ordinal.
          return true;
      }
      throw Error("unreachable family kind");
    }
  };
  return std::visit(V{}, p_->v);
}

inline bool TreeExpr::structuralEquals(const TreeExpr& other) const {
  if (p_ == other.p_) return true;
  if (kind() != other.kind()) return false;
  struct V {
    const Node& b;
    bool operator()(const PointNode&) const { return true; }
    bool operator()(const FullConeNode&) const { return true; }
    bool operator()(const ExplicitNode& n) const {
      return n.tree == std::get<ExplicitNode>(b.v).tree;
    }
    bool operator()(const GraftNode& n) const {
      const auto& o = std::get<GraftNode>(b.v);
      return n.head == o.head && n.sub.structuralEquals(o.sub);
    }
    bool operator()(const JoinFiniteNode& n) const {
      const auto& o = std::get<JoinFiniteNode>(b.v);
      if (n.branches.size() != o.branches.size()) return false;
      for (std::size_t i = 0; i < n.branches.size(); ++i) {
        if (n.branches[i].first != o.branches[i].first) return false;
        if (!n.branches[i].second.structuralEquals(o.branches[i].second))
          return false;
      }
      return true;
    }
    bool operator()(const JoinOmegaNode& n) const {
      const auto& o = std::get<JoinOmegaNode>(b.v);
      if (n.family.kind != o.family.kind) return false;
      switch (n.family.kind) {
        case TreeFamily::Kind::Constant:
          return n.family.tail.structuralEquals(o.family.tail);
        case TreeFamily::Kind::PrefixThenConstant: {
          if (n.family.prefix.size() != o.family.prefix.size()) return false;
          for (std::size_t i = 0; i < n.family.prefix.size(); ++i)
            if (!n.family.prefix[i].structuralEquals(o.family.prefix[i]))
              return false;
          return n.family.tail.structuralEquals(o.family.tail);
        }
        case TreeFamily::Kind::CanonicalSeq:
          return n.family.lambda == o.family.lambda &&
                 n.family.stage == o.family.stage &&
                 n.family.altEnum == o.family.altEnum;
      }
      throw Error("unreachable family kind");
    }
  };
  return std::visit(V{other.node()}, p_->v);
}

// The canonical tree of a given rank: a point at 0, a constant join over
// the previous tree at successors, and the join over the canonical family
// at limits.
inline TreeExpr canonicalTree(const Ordinal& alpha, bool altEnum) {
  if (alpha.isZero()) return TreeExpr::point();
  if (alpha.isSuccessor())
    return TreeExpr::joinOmega(
        TreeFamily::constant(canonicalTree(alpha.predecessor(), altEnum)));
  return TreeExpr::joinOmega(TreeFamily::canonicalSeq(alpha, Ordinal(), altEnum));
}

// The stage-th derivative of the canonical tree at position beta, in
// closed form. It is empty exactly when beta < stage; the rank engine in
// derive.hpp justifies the threshold.
inline TreeExpr derivedCanonicalTree(const Ordinal& beta, const Ordinal& stage,
                                     bool altEnum) {
  if (beta < stage) return TreeExpr::emptyTree();
  if (stage.isZero()) return canonicalTree(beta, altEnum);
  if (beta.isSuccessor())
    return TreeExpr::joinOmega(TreeFamily::constant(
        derivedCanonicalTree(beta.predecessor(), stage, altEnum)));
  // beta is a limit >= stage; stage >= lambda collapses to a point inside
  // joinOmega.
  return TreeExpr::joinOmega(TreeFamily::canonicalSeq(beta, stage, altEnum));
}

// Variant used for the odd/even tower: at even ranks the plain canonical
// tree, at odd ranks a single branch through the given entry.
inline TreeExpr canonicalTreeC(const Ordinal& alpha, int entry = 1) {
  if (alpha.isOdd())
    return TreeExpr::graft(Seq{entry}, canonicalTree(alpha.alphaPrime()));
  return canonicalTree(alpha.alphaPrime());
}

}  // namespace dst
