#pragma once

// Brooms: sets of pairwise incomparable finite sequences built by two
// alternating steps, starting from the one-member set {()}:
//
//   handle step   prepend a fixed nonempty sequence to every member
//   fork step     merge a family of brooms, each pushed below a head of
//                 its own, with pairwise distinct head first entries
//
// The classification assigns each broom the least rank at which these
// steps can produce it: handle steps land on odd ranks, fork steps on
// even ranks, and a fork over members of cofinal smaller ranks lands on
// a limit. Infinite fork families come in two shapes: a uniform tail
// (one sub-broom repeated below the heads (base+n)^word) and a rank
// ladder (members of unbounded rank below a limit target, realized by
// the tower brooms whose prefix closures are the canonical trees).
//
// An extension of a broom B attaches below every member s of B the
// infinite fork { (shift+n)^w : n }, giving the set
//
//   A = { s^(shift+n)^w : s in B, n in omega }.
//
// Members of B are pairwise incomparable, so each one keeps infinitely
// many pairwise incomparable extensions inside cl(A) while everything
// strictly beyond it sits on a finite chain. One incomparable-infinite
// derivative of cl(A) therefore recovers cl(B) exactly; broomDiie
// computes that derivative shape by shape and rankLemmaCheck iterates
// the derivative alphaPrime(rank) more times, after which at most the
// root survives.

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "dst/derive.hpp"
#include "dst/error.hpp"
#include "dst/ordinal.hpp"
#include "dst/seq.hpp"
#include "dst/tree_expr.hpp"

namespace dst {

struct BroomNode;
class BroomExpr;
BroomExpr towerBroom(const Ordinal& beta, const BroomExpr& leaf);

class BroomExpr {
 public:
  enum class Kind { Trivial, Handle, Fork };

  // Default is the trivial broom {()}.
  BroomExpr();

  static BroomExpr trivial();
  static BroomExpr handle(const Seq& head, const BroomExpr& sub);
  static BroomExpr fork(struct BroomFamily family);

  Kind kind() const;
  const BroomNode& node() const { return *p_; }

  bool member(const Seq& s) const;

 private:
  explicit BroomExpr(std::shared_ptr<const BroomNode> p) : p_(std::move(p)) {}
  std::shared_ptr<const BroomNode> p_;
};

struct BroomFamily {
  enum class Kind { FiniteList, UniformTail, RankLadder };

  Kind kind = Kind::FiniteList;

  // FiniteList: all branches. UniformTail: the exceptional branches in
  // front of the tail; their head first entries stay below tailBase.
  std::vector<std::pair<Seq, BroomExpr>> branches;

  // UniformTail: for every n the branch with head (tailBase+n)^tailWord
  // and sub-broom tailSub.
  int tailBase = 0;
  Seq tailWord;
  BroomExpr tailSub;

  // RankLadder: for every n the branch with head (n) and sub-broom
  // towerBroom(limitEnumeration(target, n), leaf). The tower ranks are
  // cofinal in the target, so the fork classifies exactly there.
  Ordinal target;
  BroomExpr ladderLeaf;

  static BroomFamily finiteList(std::vector<std::pair<Seq, BroomExpr>> bs);
  static BroomFamily uniformTail(std::vector<std::pair<Seq, BroomExpr>> prefix,
                                 int tailBase, Seq tailWord, BroomExpr tailSub);
  static BroomFamily rankLadder(Ordinal target, BroomExpr leaf = BroomExpr());

  // The branch whose head starts with entry e, if any.
  std::optional<std::pair<Seq, BroomExpr>> branchAt(int e) const;
};

struct TrivialNode {};
struct HandleNode {
  Seq head;  // nonempty
  BroomExpr sub;
};
struct ForkNode {
  BroomFamily family;
};

struct BroomNode {
  std::variant<TrivialNode, HandleNode, ForkNode> v;
};

namespace detail {

inline std::shared_ptr<const BroomNode> makeBroomNode(
    std::variant<TrivialNode, HandleNode, ForkNode> v) {
  auto n = std::make_shared<BroomNode>();
  n->v = std::move(v);
  return n;
}

inline void checkEntries(const Seq& s, const char* what) {
  for (int e : s)
    if (e < 0)
      throw PreconditionError(std::string(what) + " " + seqToString(s) +
                              " has a negative entry");
}

}  // namespace detail

inline BroomExpr::BroomExpr()
    : p_(detail::makeBroomNode(TrivialNode{})) {}

inline BroomExpr BroomExpr::trivial() { return BroomExpr(); }

inline BroomExpr::Kind BroomExpr::kind() const {
  struct V {
    Kind operator()(const TrivialNode&) const { return Kind::Trivial; }
    Kind operator()(const HandleNode&) const { return Kind::Handle; }
    Kind operator()(const ForkNode&) const { return Kind::Fork; }
  };
  return std::visit(V{}, p_->v);
}

inline BroomExpr BroomExpr::handle(const Seq& head, const BroomExpr& sub) {
  detail::checkEntries(head, "handle");
  if (head.empty()) return sub;
  // Nested handles denote one prepended word, so merge them here; the
  // classification then never pays for two odd steps where one does.
  if (auto* h = std::get_if<HandleNode>(&sub.node().v))
    return handle(concat(head, h->head), h->sub);
  return BroomExpr(detail::makeBroomNode(HandleNode{head, sub}));
}

inline BroomFamily BroomFamily::finiteList(
    std::vector<std::pair<Seq, BroomExpr>> bs) {
  if (bs.empty())
    throw PreconditionError("a fork needs at least one branch");
  for (const auto& [head, sub] : bs) {
    detail::checkEntries(head, "fork head");
    if (head.empty())
      throw PreconditionError("fork heads must be nonempty");
  }
  std::sort(bs.begin(), bs.end(), [](const auto& a, const auto& b) {
    return a.first[0] < b.first[0];
  });
  for (std::size_t i = 1; i < bs.size(); ++i)
    if (bs[i - 1].first[0] == bs[i].first[0])
      throw PreconditionError("fork heads need distinct first entries");
  BroomFamily f;
  f.kind = Kind::FiniteList;
  f.branches = std::move(bs);
  return f;
}

inline BroomFamily BroomFamily::uniformTail(
    std::vector<std::pair<Seq, BroomExpr>> prefix, int tailBase, Seq tailWord,
    BroomExpr tailSub) {
  if (tailBase < 0)
    throw PreconditionError("uniform tail base must be nonnegative");
  detail::checkEntries(tailWord, "tail word");
  for (const auto& [head, sub] : prefix) {
    detail::checkEntries(head, "fork head");
    if (head.empty())
      throw PreconditionError("fork heads must be nonempty");
    if (head[0] >= tailBase)
      throw PreconditionError("prefix head " + seqToString(head) +
                              " collides with the tail heads at entry " +
                              std::to_string(head[0]));
  }
  std::sort(prefix.begin(), prefix.end(), [](const auto& a, const auto& b) {
    return a.first[0] < b.first[0];
  });
  for (std::size_t i = 1; i < prefix.size(); ++i)
    if (prefix[i - 1].first[0] == prefix[i].first[0])
      throw PreconditionError("fork heads need distinct first entries");
  BroomFamily f;
  f.kind = Kind::UniformTail;
  f.branches = std::move(prefix);
  f.tailBase = tailBase;
  f.tailWord = std::move(tailWord);
  f.tailSub = std::move(tailSub);
  return f;
}

inline BroomFamily BroomFamily::rankLadder(Ordinal target, BroomExpr leaf) {
  if (!target.isLimit())
    throw PreconditionError("ladder target must be a limit ordinal, got " +
                            toString(target));
  if (!target.divOmega().isFinite())
    throw PreconditionError(
        "ladder target must be w*k for finite k, got " + toString(target));
  BroomFamily f;
  f.kind = Kind::RankLadder;
  f.target = std::move(target);
  f.ladderLeaf = std::move(leaf);
  return f;
}

inline BroomExpr BroomExpr::fork(BroomFamily family) {
  // A one-branch fork denotes exactly its branch, which the handle step
  // already produces one rank earlier.
  if (family.kind == BroomFamily::Kind::FiniteList &&
      family.branches.size() == 1)
    return handle(family.branches[0].first, family.branches[0].second);
  return BroomExpr(detail::makeBroomNode(ForkNode{std::move(family)}));
}

inline std::optional<std::pair<Seq, BroomExpr>> BroomFamily::branchAt(
    int e) const {
  if (e < 0) return std::nullopt;
  switch (kind) {
    case Kind::FiniteList:
    case Kind::UniformTail:
      for (const auto& b : branches)
        if (b.first[0] == e) return b;
      if (kind == Kind::FiniteList || e < tailBase) return std::nullopt;
      return std::pair<Seq, BroomExpr>{concat(Seq{e}, tailWord), tailSub};
    case Kind::RankLadder:
      return std::pair<Seq, BroomExpr>{
          Seq{e},
          towerBroom(limitEnumeration(target, static_cast<std::uint64_t>(e)),
                     ladderLeaf)};
  }
  throw Error("unreachable family kind");
}

// The broom whose prefix closure is the canonical tree of the given
// rank, with the trivial positions replaced by `leaf`: a leaf at zero,
// a uniform fork over the previous tower at successors, and a ladder at
// limits.
inline BroomExpr towerBroom(const Ordinal& beta, const BroomExpr& leaf) {
  if (beta.isZero()) return leaf;
  if (beta.isSuccessor())
    return BroomExpr::fork(BroomFamily::uniformTail(
        {}, 0, {}, towerBroom(beta.predecessor(), leaf)));
  return BroomExpr::fork(BroomFamily::rankLadder(beta, leaf));
}

inline bool BroomExpr::member(const Seq& s) const {
  struct V {
    const Seq& s;
    bool operator()(const TrivialNode&) const { return s.empty(); }
    bool operator()(const HandleNode& n) const {
      if (s.size() < n.head.size() || !isPrefixOf(n.head, s)) return false;
      return n.sub.member(suffixAfter(n.head, s));
    }
    bool operator()(const ForkNode& n) const {
      if (s.empty()) return false;
      auto b = n.family.branchAt(s[0]);
      if (!b || s.size() < b->first.size() || !isPrefixOf(b->first, s))
        return false;
      return b->second.member(suffixAfter(b->first, s));
    }
  };
  return std::visit(V{s}, p_->v);
}

// Structural node count; doubles as a termination measure for the
// pairwise walks below.
inline std::size_t broomSize(const BroomExpr& b) {
  struct V {
    std::size_t operator()(const TrivialNode&) const { return 1; }
    std::size_t operator()(const HandleNode& n) const {
      return 1 + n.head.size() + broomSize(n.sub);
    }
    std::size_t operator()(const ForkNode& n) const {
      std::size_t total = 1;
      for (const auto& [head, sub] : n.family.branches)
        total += head.size() + broomSize(sub);
      if (n.family.kind == BroomFamily::Kind::UniformTail)
        total += 1 + n.family.tailWord.size() + broomSize(n.family.tailSub);
      if (n.family.kind == BroomFamily::Kind::RankLadder)
        total += 1 + broomSize(n.family.ladderLeaf);
      return total;
    }
  };
  return std::visit(V{}, b.node().v);
}

inline bool broomEquals(const BroomExpr& a, const BroomExpr& b) {
  if (&a.node() == &b.node()) return true;
  if (a.kind() != b.kind()) return false;
  struct V {
    const BroomNode& o;
    bool operator()(const TrivialNode&) const { return true; }
    bool operator()(const HandleNode& n) const {
      const auto& m = std::get<HandleNode>(o.v);
      return n.head == m.head && broomEquals(n.sub, m.sub);
    }
    bool operator()(const ForkNode& n) const {
      const auto& m = std::get<ForkNode>(o.v);
      if (n.family.kind != m.family.kind) return false;
      if (n.family.branches.size() != m.family.branches.size()) return false;
      for (std::size_t i = 0; i < n.family.branches.size(); ++i) {
        if (n.family.branches[i].first != m.family.branches[i].first)
          return false;
        if (!broomEquals(n.family.branches[i].second,
                         m.family.branches[i].second))
          return false;
      }
      switch (n.family.kind) {
        case BroomFamily::Kind::FiniteList:
          return true;
        case BroomFamily::Kind::UniformTail:
          return n.family.tailBase == m.family.tailBase &&
                 n.family.tailWord == m.family.tailWord &&
                 broomEquals(n.family.tailSub, m.family.tailSub);
        case BroomFamily::Kind::RankLadder:
          return n.family.target == m.family.target &&
                 broomEquals(n.family.ladderLeaf, m.family.ladderLeaf);
      }
      throw Error("unreachable family kind");
    }
  };
  return std::visit(V{b.node()}, a.node().v);
}

namespace detail {

using BroomRankMemo = std::map<const BroomNode*, Ordinal>;

inline Ordinal classifyRec(const BroomExpr& b, BroomRankMemo& memo) {
  if (b.kind() == BroomExpr::Kind::Trivial) return Ordinal();
  auto it = memo.find(&b.node());
  if (it != memo.end()) return it->second;
  Ordinal result;
  if (auto* h = std::get_if<HandleNode>(&b.node().v)) {
    // Least odd rank whose step can absorb the sub-broom.
    const Ordinal c = classifyRec(h->sub, memo);
    result = c.isEven() ? c + Ordinal(1) : c + Ordinal(2);
  } else {
    const BroomFamily& f = std::get<ForkNode>(b.node().v).family;
    if (f.kind == BroomFamily::Kind::RankLadder) {
      const Ordinal leafRank = classifyRec(f.ladderLeaf, memo);
      if (!leafRank.isFinite())
        throw PreconditionError("ladder leaves must have finite rank, got " +
                                toString(leafRank));
      // Tower ranks run through finitely many even steps above each
      // enumerated position, so they stay below the target and reach it
      // cofinally; the least even bound is the target itself.
      result = f.target;
    } else {
      // Least even rank strictly above every branch sub-broom.
      Ordinal m;
      for (const auto& [head, sub] : f.branches)
        m = maxOrdinal(m, classifyRec(sub, memo));
      if (f.kind == BroomFamily::Kind::UniformTail)
        m = maxOrdinal(m, classifyRec(f.tailSub, memo));
      result = m.isOdd() ? m + Ordinal(1) : m + Ordinal(2);
    }
  }
  memo.emplace(&b.node(), result);
  return result;
}

}  // namespace detail

inline Ordinal classifyBroom(const BroomExpr& b) {
  detail::BroomRankMemo memo;
  return detail::classifyRec(b, memo);
}

// Longest common prefix of the broom's members.
inline Seq handleOf(const BroomExpr& b) {
  if (auto* h = std::get_if<HandleNode>(&b.node().v))
    return concat(h->head, handleOf(h->sub));
  // Trivial has only the empty member; forks keep at least two branches
  // with distinct first entries after normalization.
  return {};
}

// Prefix closure of the broom, as a symbolic tree.
inline TreeExpr broomClosureTree(const BroomExpr& b) {
  struct V {
    TreeExpr operator()(const TrivialNode&) const { return TreeExpr::point(); }
    TreeExpr operator()(const HandleNode& n) const {
      return TreeExpr::graft(n.head, broomClosureTree(n.sub));
    }
    TreeExpr operator()(const ForkNode& n) const {
      const BroomFamily& f = n.family;
      switch (f.kind) {
        case BroomFamily::Kind::FiniteList: {
          std::vector<std::pair<Seq, TreeExpr>> branches;
          for (const auto& [head, sub] : f.branches)
            branches.emplace_back(head, broomClosureTree(sub));
          return TreeExpr::joinFinite(std::move(branches));
        }
        case BroomFamily::Kind::UniformTail: {
          std::vector<TreeExpr> prefix(
              static_cast<std::size_t>(f.tailBase), TreeExpr::emptyTree());
          for (const auto& [head, sub] : f.branches)
            prefix[static_cast<std::size_t>(head[0])] = TreeExpr::graft(
                Seq(head.begin() + 1, head.end()), broomClosureTree(sub));
          TreeExpr tail =
              TreeExpr::graft(f.tailWord, broomClosureTree(f.tailSub));
          return TreeExpr::joinOmega(
              TreeFamily::prefixThenConstant(std::move(prefix), tail));
        }
        case BroomFamily::Kind::RankLadder: {
          if (f.ladderLeaf.kind() != BroomExpr::Kind::Trivial)
            throw Error(
                "closure of a ladder with replaced leaves is not "
                "representable");
          // The member below entry n is towerBroom at the enumerated
          // position, whose closure is the canonical tree there; the
          // whole fork closes into the canonical family.
          return TreeExpr::joinOmega(TreeFamily::canonicalSeq(f.target));
        }
      }
      throw Error("unreachable family kind");
    }
  };
  return std::visit(V{}, b.node().v);
}

// How a broom gets extended: below every member s, the infinite fork
// with heads (headShift+n) and the constant continuation tailWord.
struct ExtendStrategy {
  int headShift = 0;
  Seq tailWord;
};

class InfBroomExpr {
 public:
  InfBroomExpr(BroomExpr base, ExtendStrategy strategy)
      : base_(std::move(base)), strategy_(std::move(strategy)) {
    if (strategy_.headShift < 0)
      throw PreconditionError("extension head shift must be nonnegative");
    detail::checkEntries(strategy_.tailWord, "extension tail word");
  }

  const BroomExpr& base() const { return base_; }
  int headShift() const { return strategy_.headShift; }
  const Seq& tailWord() const { return strategy_.tailWord; }

  // Membership in { s^(headShift+n)^tailWord : s in base, n in omega }.
  // The tail length pins the split point, so the witness is unique.
  bool member(const Seq& s) const {
    const Seq& w = strategy_.tailWord;
    if (s.size() < 1 + w.size()) return false;
    const std::size_t cut = s.size() - 1 - w.size();
    if (s[cut] < strategy_.headShift) return false;
    for (std::size_t i = 0; i < w.size(); ++i)
      if (s[cut + 1 + i] != w[i]) return false;
    return base_.member(Seq(s.begin(), s.begin() + static_cast<std::ptrdiff_t>(cut)));
  }

 private:
  BroomExpr base_;
  ExtendStrategy strategy_;
};

inline InfBroomExpr extendBroom(const BroomExpr& b,
                                const ExtendStrategy& strategy = {}) {
  return InfBroomExpr(b, strategy);
}

namespace detail {

// The broom of the extension's head stage { s^(shift+n) : s, n }: every
// trivial position becomes a uniform fork over a fresh trivial leaf.
inline BroomExpr replaceLeaves(const BroomExpr& b, int shift) {
  struct V {
    int shift;
    BroomExpr operator()(const TrivialNode&) const {
      return BroomExpr::fork(
          BroomFamily::uniformTail({}, shift, {}, BroomExpr::trivial()));
    }
    BroomExpr operator()(const HandleNode& n) const {
      return BroomExpr::handle(n.head, replaceLeaves(n.sub, shift));
    }
    BroomExpr operator()(const ForkNode& n) const {
      const BroomFamily& f = n.family;
      switch (f.kind) {
        case BroomFamily::Kind::FiniteList: {
          std::vector<std::pair<Seq, BroomExpr>> bs;
          for (const auto& [head, sub] : f.branches)
            bs.emplace_back(head, replaceLeaves(sub, shift));
          return BroomExpr::fork(BroomFamily::finiteList(std::move(bs)));
        }
        case BroomFamily::Kind::UniformTail: {
          std::vector<std::pair<Seq, BroomExpr>> prefix;
          for (const auto& [head, sub] : f.branches)
            prefix.emplace_back(head, replaceLeaves(sub, shift));
          return BroomExpr::fork(BroomFamily::uniformTail(
              std::move(prefix), f.tailBase, f.tailWord,
              replaceLeaves(f.tailSub, shift)));
        }
        case BroomFamily::Kind::RankLadder:
          // Tower members carry the ladder leaf at exactly their trivial
          // positions, so replacing the leaf replaces every member leaf.
          return BroomExpr::fork(BroomFamily::rankLadder(
              f.target, replaceLeaves(f.ladderLeaf, shift)));
      }
      throw Error("unreachable family kind");
    }
  };
  return std::visit(V{shift}, b.node().v);
}

}  // namespace detail

// The head stage of the extension as a broom. Each leaf trades its rank
// 0 for the rank 2 of an infinite fork, which shifts the whole
// classification by two from the left.
inline BroomExpr tildeBroom(const InfBroomExpr& a) {
  return detail::replaceLeaves(a.base(), a.headShift());
}

// Prefix closure of the full extension as a symbolic tree. Ladders are
// out of reach here: their closure members are canonical trees, which
// have no slot for the appended forks.
inline TreeExpr asTreeExpr(const InfBroomExpr& a) {
  struct V {
    int shift;
    const Seq& word;
    TreeExpr leafTree() const {
      std::vector<TreeExpr> prefix(static_cast<std::size_t>(shift),
                                   TreeExpr::emptyTree());
      return TreeExpr::joinOmega(TreeFamily::prefixThenConstant(
          std::move(prefix), TreeExpr::explicitTree(clTr({word}))));
    }
    TreeExpr rec(const BroomExpr& b) const { return std::visit(*this, b.node().v); }
    TreeExpr operator()(const TrivialNode&) const { return leafTree(); }
    TreeExpr operator()(const HandleNode& n) const {
      return TreeExpr::graft(n.head, rec(n.sub));
    }
    TreeExpr operator()(const ForkNode& n) const {
      const BroomFamily& f = n.family;
      switch (f.kind) {
        case BroomFamily::Kind::FiniteList: {
          std::vector<std::pair<Seq, TreeExpr>> branches;
          for (const auto& [head, sub] : f.branches)
            branches.emplace_back(head, rec(sub));
          return TreeExpr::joinFinite(std::move(branches));
        }
        case BroomFamily::Kind::UniformTail: {
          std::vector<TreeExpr> prefix(
              static_cast<std::size_t>(f.tailBase), TreeExpr::emptyTree());
          for (const auto& [head, sub] : f.branches)
            prefix[static_cast<std::size_t>(head[0])] =
                TreeExpr::graft(Seq(head.begin() + 1, head.end()), rec(sub));
          TreeExpr tail = TreeExpr::graft(f.tailWord, rec(f.tailSub));
          return TreeExpr::joinOmega(
              TreeFamily::prefixThenConstant(std::move(prefix), tail));
        }
        case BroomFamily::Kind::RankLadder:
          throw Error("extension closure over a ladder is not representable");
      }
      throw Error("unreachable family kind");
    }
  };
  return std::visit(V{a.headShift(), a.tailWord()}, a.base().node().v);
}

// One incomparable-infinite derivative of the extension's closure. A
// node of cl(A) either lies on a member s of the base, keeping the
// infinitely many pairwise incomparable extensions s^(shift+n)^w below
// it, or sits strictly beyond some s on the finite chain towards one
// such extension. The derivative keeps exactly the first kind, which is
// the closure of the base.
inline TreeExpr broomDiie(const InfBroomExpr& a) {
  struct V {
    TreeExpr rec(const BroomExpr& b) const { return std::visit(*this, b.node().v); }
    TreeExpr operator()(const TrivialNode&) const {
      // The member itself survives through its appended fork; the chain
      // nodes beyond it have finitely many extensions each and vanish.
      return TreeExpr::point();
    }
    TreeExpr operator()(const HandleNode& n) const {
      // Handle nodes lie below every member of the sub-broom's cone.
      return TreeExpr::graft(n.head, rec(n.sub));
    }
    TreeExpr operator()(const ForkNode& n) const {
      const BroomFamily& f = n.family;
      switch (f.kind) {
        case BroomFamily::Kind::FiniteList: {
          std::vector<std::pair<Seq, TreeExpr>> branches;
          for (const auto& [head, sub] : f.branches)
            branches.emplace_back(head, rec(sub));
          return TreeExpr::joinFinite(std::move(branches));
        }
        case BroomFamily::Kind::UniformTail: {
          std::vector<TreeExpr> prefix(
              static_cast<std::size_t>(f.tailBase), TreeExpr::emptyTree());
          for (const auto& [head, sub] : f.branches)
            prefix[static_cast<std::size_t>(head[0])] =
                TreeExpr::graft(Seq(head.begin() + 1, head.end()), rec(sub));
          TreeExpr tail = TreeExpr::graft(f.tailWord, rec(f.tailSub));
          return TreeExpr::joinOmega(
              TreeFamily::prefixThenConstant(std::move(prefix), tail));
        }
        case BroomFamily::Kind::RankLadder: {
          if (f.ladderLeaf.kind() != BroomExpr::Kind::Trivial)
            throw Error(
                "closure of a ladder with replaced leaves is not "
                "representable");
          return TreeExpr::joinOmega(TreeFamily::canonicalSeq(f.target));
        }
      }
      throw Error("unreachable family kind");
    }
  };
  return V{}.rec(a.base());
}

// Iterated derivative outcome for a classified broom: after
// alphaPrime(rank) incomparable-infinite derivatives of the closure,
// a finite tree remains, and for even ranks at most the root.
struct RankLemmaReport {
  Ordinal alpha;               // classification of the broom
  Ordinal prime;               // alphaPrime(alpha): derivative budget
  bool derivedFinite = false;  // iterated derivative is a finite tree
  bool derivedSmall = false;   // its nodes lie within {()}
  std::vector<Seq> survivors;  // nodes of the derived tree when finite
  bool pass = false;
};

namespace detail {

inline RankLemmaReport rankLemmaOn(const TreeExpr& closure,
                                   const Ordinal& alpha) {
  RankLemmaReport r;
  r.alpha = alpha;
  r.prime = alpha.alphaPrime();
  TreeExpr derived =
      iterate(DeriveKind::IncomparableInfinite, closure, r.prime);
  r.derivedFinite = derived.isFiniteTree();
  if (r.derivedFinite) {
    const FiniteTree f = derived.asFiniteTree();
    r.survivors.assign(f.nodes().begin(), f.nodes().end());
    r.derivedSmall = f.size() <= 1;
  }
  r.pass = r.derivedFinite && (!alpha.isEven() || r.derivedSmall);
  return r;
}

}  // namespace detail

inline RankLemmaReport rankLemmaCheck(const BroomExpr& b) {
  return detail::rankLemmaOn(broomClosureTree(b), classifyBroom(b));
}

// Extension version: one extra derivative peels the appended forks off
// first, landing on the closure of the base.
inline RankLemmaReport rankLemmaCheck(const InfBroomExpr& a) {
  return detail::rankLemmaOn(broomDiie(a), classifyBroom(a.base()));
}

namespace detail {

// Does den(p1^r1) meet den(p2^r2)? The pending words hold the parts of
// a branch head not yet matched. Each step either consumes one matched
// entry or unpacks a handle or branch into a pending word, so the pair
// (broomSize(r1)+broomSize(r2), |p1|+|p2|) drops lexicographically.
inline bool densIntersectRec(Seq p1, BroomExpr r1, Seq p2, BroomExpr r2) {
  while (!p1.empty() || !p2.empty()) {
    if (!p1.empty() && !p2.empty()) {
      if (p1[0] != p2[0]) return false;
      p1.erase(p1.begin());
      p2.erase(p2.begin());
      continue;
    }
    if (p1.empty()) {
      std::swap(p1, p2);
      std::swap(r1, r2);
    }
    // p1 demands entry p1[0]; the other side must produce it.
    switch (r2.kind()) {
      case BroomExpr::Kind::Trivial:
        return false;
      case BroomExpr::Kind::Handle: {
        const auto& h = std::get<HandleNode>(r2.node().v);
        const BroomExpr sub = h.sub;
        p2 = h.head;
        r2 = sub;
        break;
      }
      case BroomExpr::Kind::Fork: {
        const BroomFamily& f = std::get<ForkNode>(r2.node().v).family;
        if (f.kind == BroomFamily::Kind::RankLadder)
          throw Error("intersection over ladder brooms is not supported");
        auto b = f.branchAt(p1[0]);
        if (!b) return false;
        const BroomExpr sub = b->second;
        p2 = b->first;
        r2 = sub;
        break;
      }
    }
  }
  // Both pendings consumed: intersect the remaining brooms directly.
  if (r1.kind() == BroomExpr::Kind::Trivial ||
      r2.kind() == BroomExpr::Kind::Trivial)
    // Only the trivial broom contains the empty sequence.
    return r1.kind() == BroomExpr::Kind::Trivial &&
           r2.kind() == BroomExpr::Kind::Trivial;
  if (auto* h = std::get_if<HandleNode>(&r1.node().v))
    return densIntersectRec(h->head, h->sub, {}, r2);
  if (auto* h = std::get_if<HandleNode>(&r2.node().v))
    return densIntersectRec({}, r1, h->head, h->sub);
  const BroomFamily& f1 = std::get<ForkNode>(r1.node().v).family;
  const BroomFamily& f2 = std::get<ForkNode>(r2.node().v).family;
  if (f1.kind == BroomFamily::Kind::RankLadder ||
      f2.kind == BroomFamily::Kind::RankLadder)
    throw Error("intersection over ladder brooms is not supported");
  // Probe the finitely many exceptional entries of either side against
  // the other; two uniform tails additionally overlap on every entry
  // from the larger base on, with the same branch pair each time.
  std::vector<int> entries;
  for (const auto& [head, sub] : f1.branches) entries.push_back(head[0]);
  for (const auto& [head, sub] : f2.branches) entries.push_back(head[0]);
  if (f1.kind == BroomFamily::Kind::UniformTail &&
      f2.kind == BroomFamily::Kind::UniformTail)
    entries.push_back(std::max(f1.tailBase, f2.tailBase));
  for (int e : entries) {
    auto b1 = f1.branchAt(e);
    auto b2 = f2.branchAt(e);
    if (b1 && b2 &&
        densIntersectRec(b1->first, b1->second, b2->first, b2->second))
      return true;
  }
  return false;
}

inline bool densIntersect(const BroomExpr& a, const BroomExpr& b) {
  return densIntersectRec({}, a, {}, b);
}

// Can a member of one extension continue through a member of the other,
// with the longer tail word swallowing the shorter one? That happens
// only when long = u^(x)^short for some entry x.
inline bool tailWordNests(const Seq& shorter, const Seq& longer) {
  if (longer.size() < shorter.size() + 1) return false;
  for (std::size_t i = 0; i < shorter.size(); ++i)
    if (longer[longer.size() - shorter.size() + i] != shorter[i]) return false;
  return true;
}

// Is A1 cap A2 finite? Members split as leaf^(head)^word with the cut
// pinned by the word length. Equal word lengths force equal leaves, and
// members of one broom are pairwise incomparable, so the intersection
// is infinite exactly when the words agree and the leaf sets meet: any
// two head progressions share a cofinite range. Unequal lengths admit
// solutions only when one word nests inside the other; that mixes leaf
// levels and is left undecided.
inline bool intersectionFinite(const InfBroomExpr& a1, const InfBroomExpr& a2) {
  const Seq& w1 = a1.tailWord();
  const Seq& w2 = a2.tailWord();
  if (w1.size() == w2.size())
    return !(w1 == w2 && densIntersect(a1.base(), a2.base()));
  const Seq& shorter = w1.size() < w2.size() ? w1 : w2;
  const Seq& longer = w1.size() < w2.size() ? w2 : w1;
  if (tailWordNests(shorter, longer))
    throw Error("almost-disjointness is undecided for nested tail words");
  return true;
}

}  // namespace detail

struct AdVerdict {
  bool pass = true;
  std::size_t first = 0;   // indices of the offending pair when failing
  std::size_t second = 0;
  std::string reason;
};

// Pairwise finite-intersection check over a family of extensions.
inline AdVerdict almostDisjointCheck(const std::vector<InfBroomExpr>& family) {
  for (std::size_t i = 0; i < family.size(); ++i)
    for (std::size_t j = i + 1; j < family.size(); ++j)
      if (!detail::intersectionFinite(family[i], family[j]))
        return {false, i, j,
                "extensions share a tail word over intersecting bases"};
  return {};
}

// A broom classified exactly at the given rank: handles at odd steps,
// uniform forks at even successors, ladders at limits.
inline BroomExpr witnessBroom(const Ordinal& alpha) {
  if (alpha.isZero()) return BroomExpr::trivial();
  if (alpha.isLimit()) return BroomExpr::fork(BroomFamily::rankLadder(alpha));
  const BroomExpr prev = witnessBroom(alpha.predecessor());
  if (alpha.isOdd()) return BroomExpr::handle(Seq{0}, prev);
  return BroomExpr::fork(BroomFamily::uniformTail({}, 0, {}, prev));
}

inline std::string toString(const BroomExpr& b) {
  struct V {
    std::string operator()(const TrivialNode&) const { return "trivial"; }
    std::string operator()(const HandleNode& n) const {
      return "handle " + seqToString(n.head) + " " + toString(n.sub);
    }
    std::string operator()(const ForkNode& n) const {
      const BroomFamily& f = n.family;
      std::string out = "fork[";
      for (std::size_t i = 0; i < f.branches.size(); ++i) {
        if (i > 0) out += ", ";
        out += seqToString(f.branches[i].first) + " " +
               toString(f.branches[i].second);
      }
      switch (f.kind) {
        case BroomFamily::Kind::FiniteList:
          break;
        case BroomFamily::Kind::UniformTail:
          if (!f.branches.empty()) out += ", ";
          out += "tail base=" + std::to_string(f.tailBase) + " word=" +
                 seqToString(f.tailWord) + " " + toString(f.tailSub);
          break;
        case BroomFamily::Kind::RankLadder:
          out += "ladder target=" + toString(f.target);
          if (f.ladderLeaf.kind() != BroomExpr::Kind::Trivial)
            out += " leaf=" + toString(f.ladderLeaf);
          break;
      }
      return out + "]";
    }
  };
  return std::visit(V{}, b.node().v);
}

inline std::string toString(const InfBroomExpr& a) {
  return "extend shift=" + std::to_string(a.headShift()) + " word=" +
         seqToString(a.tailWord()) + " " + toString(a.base());
}

}  // namespace dst
