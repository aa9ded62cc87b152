#pragma once

// Suslin schemes over a finite universe, together with the tree-indexed
// membership operator they induce.
//
// A scheme assigns a monotonically shrinking set of atoms to each node of a
// finite prefix-closed domain. Values extend to all of omega^{<omega} by a
// fixed convention: past a maximal domain node the value freezes at that
// node's value, while a sequence that leaves the domain anywhere else gets
// the empty set. Every infinite branch therefore stabilizes after finitely
// many steps, which is what makes the classically infinitary operators
// (the Suslin operation, the R-sets indexed by well-founded trees) finitely
// computable here.

#include <algorithm>
#include <cassert>
#include <cstddef>
#include <functional>
#include <map>
#include <optional>
#include <utility>
#include <vector>

#include "dst/derive.hpp"
#include "dst/error.hpp"
#include "dst/leaf_scheme.hpp"
#include "dst/ordinal.hpp"
#include "dst/seq.hpp"
#include "dst/tree_expr.hpp"

namespace dst {

class SuslinScheme {
 public:
  SuslinScheme(Universe u, FiniteTree domain, std::map<Seq, AtomSet> values)
      : universe_(std::move(u)),
        domain_(std::move(domain)),
        values_(std::move(values)) {
    if (domain_.empty())
      throw PreconditionError("Suslin scheme needs a nonempty domain");
    if (values_.size() != domain_.size())
      throw PreconditionError(
          "Suslin scheme values must be keyed by exactly the domain nodes");
    for (const Seq& s : domain_.nodes()) {
      auto it = values_.find(s);
      if (it == values_.end())
        throw PreconditionError("Suslin scheme value missing for domain node " +
                                seqToString(s));
      for (const Atom& a : it->second)
        if (!universe_.contains(a))
          throw PreconditionError(
              "Suslin scheme value uses an atom outside the universe");
      if (!s.empty()) {
        const Seq parent(s.begin(), s.end() - 1);
        if (!isSubset(it->second, values_.at(parent)))
          throw PreconditionError(
              "Suslin scheme values must shrink along extensions");
      }
    }
  }

  static SuslinScheme constant(Universe u, AtomSet value) {
    std::map<Seq, AtomSet> vals;
    vals[Seq{}] = std::move(value);
    return SuslinScheme(std::move(u), FiniteTree::single(), std::move(vals));
  }

  const Universe& universe() const { return universe_; }
  const FiniteTree& domain() const { return domain_; }
  const std::map<Seq, AtomSet>& values() const { return values_; }

  // Longest prefix of s that lies in the domain.
  Seq anchor(const Seq& s) const {
    Seq best;
    Seq cur;
    for (int e : s) {
      cur.push_back(e);
      if (domain_.contains(cur)) best = cur;
    }
    return best;
  }

  // Value of the scheme at an arbitrary sequence, via the extension
  // convention described at the top of the file.
  AtomSet at(const Seq& s) const {
    if (domain_.contains(s)) return values_.at(s);
    const Seq p = anchor(s);
    if (domain_.isLeaf(p)) return values_.at(p);
    return AtomSet{};
  }

 private:
  Universe universe_;
  FiniteTree domain_;
  std::map<Seq, AtomSet> values_;
};

// Result of applying the Suslin operation to the scheme: the union over
// branches of the stable tail values, which under the extension convention
// is the union of the values at the maximal domain nodes.
inline AtomSet suslinOperation(const SuslinScheme& c) {
  AtomSet out;
  for (const Seq& l : c.domain().leaves())
    out = setUnion(out, c.values().at(l));
  return out;
}

// A length-respecting monotone map from a finite tree into omega^{<omega}:
// images extend along extensions, and the image of a node has length equal
// to the sum of the node's entries. (The length law forces the extension to
// be strict exactly when the child entry is nonzero.)
struct AdmissibleMap {
  FiniteTree tree;
  std::map<Seq, Seq> images;

  AdmissibleMap(FiniteTree t, std::map<Seq, Seq> im)
      : tree(std::move(t)), images(std::move(im)) {
    if (images.size() != tree.size())
      throw PreconditionError(
          "admissible map must be defined on exactly the tree's nodes");
    for (const Seq& s : tree.nodes()) {
      auto it = images.find(s);
      if (it == images.end())
        throw PreconditionError("admissible map missing node " +
                                seqToString(s));
      std::size_t want = 0;
      for (int e : s) want += static_cast<std::size_t>(e);
      if (it->second.size() != want)
        throw PreconditionError(
            "admissible map image length must equal the entry sum of " +
            seqToString(s));
      if (!s.empty()) {
        const Seq parent(s.begin(), s.end() - 1);
        if (!isPrefixOf(images.at(parent), it->second))
          throw PreconditionError(
              "admissible map images must extend along the tree");
      }
    }
  }
};

namespace detail {

inline void enumerateWords(int length, int alphabetBound, Seq& cur,
                           std::vector<Seq>& out) {
  if (length == 0) {
    out.push_back(cur);
    return;
  }
  for (int v = 0; v < alphabetBound; ++v) {
    cur.push_back(v);
    enumerateWords(length - 1, alphabetBound, cur, out);
    cur.pop_back();
  }
}

// All admissible assignments on t with image entries below alphabetBound,
// built by choosing, per child m of the root, a length-m word and an
// admissible assignment on the subtree, then prepending.
inline std::vector<std::map<Seq, Seq>> enumerateImages(const FiniteTree& t,
                                                       int alphabetBound) {
  std::vector<std::map<Seq, Seq>> acc;
  acc.push_back({{Seq{}, Seq{}}});
  for (int m : t.childEntries({})) {
    const FiniteTree sub = t.subtreeAt(Seq{m});
    const std::vector<std::map<Seq, Seq>> subImages =
        enumerateImages(sub, alphabetBound);
    std::vector<Seq> words;
    Seq scratch;
    enumerateWords(m, alphabetBound, scratch, words);
    std::vector<std::map<Seq, Seq>> next;
    for (const auto& base : acc)
      for (const Seq& w : words)
        for (const auto& subMap : subImages) {
          std::map<Seq, Seq> merged = base;
          for (const auto& [node, image] : subMap)
            merged[concat(Seq{m}, node)] = concat(w, image);
          next.push_back(std::move(merged));
        }
    acc = std::move(next);
  }
  return acc;
}

}  // namespace detail

// Every admissible map on t whose image sequences use entries below
// alphabetBound. The empty tree has exactly one (empty) map.
inline std::vector<AdmissibleMap> enumerateAdmissible(const FiniteTree& t,
                                                      int alphabetBound) {
  std::vector<AdmissibleMap> out;
  if (t.empty()) {
    out.emplace_back(t, std::map<Seq, Seq>{});
    return out;
  }
  for (auto& images : detail::enumerateImages(t, alphabetBound))
    out.emplace_back(t, std::move(images));
  return out;
}

namespace detail {

// Membership engine for the tree-indexed operator
//   R^h_T(C) = { x : some admissible map on T keeps x in every C(h + image) }.
// It satisfies the recursion R^h_T = intersection over root children m of
// union over length-m words s of R^{h+s}_{T at m}, with R^h at a single
// node equal to C(h).
//
// Once the prefix has passed a maximal domain node, every further value of
// the scheme equals that node's value, so R collapses to one membership
// test; a prefix that left the domain sideways makes everything false. The
// recursion below therefore only ever tracks an in-domain cursor. The
// infinite unions shrink to finitely many representatives (the domain nodes
// reachable in exactly m steps, plus one stand-in per maximal node passed
// on the way), and the infinite intersection at an omega-join stabilizes
// once m exceeds the domain depth left below the cursor, with stable term
// "some maximal node at or below the cursor keeps x".
struct RtContext {
  const SuslinScheme& c;
  const Atom& x;
  std::map<std::pair<const void*, Seq>, bool> memo;
  std::vector<TreeExpr> keepAlive;  // pins memo-key nodes in memory
};

inline bool rtTail(const RtContext& ctx, const Seq& d) {
  for (const Seq& l : ctx.c.domain().leaves())
    if (isPrefixOf(d, l) && ctx.c.values().at(l).count(ctx.x) > 0) return true;
  return false;
}

inline std::size_t depthBelow(const FiniteTree& domain, const Seq& d) {
  std::size_t best = 0;
  for (const Seq& e : domain.nodes())
    if (isPrefixOf(d, e)) best = std::max(best, e.size() - d.size());
  return best;
}

inline bool rtRec(RtContext& ctx, const TreeExpr& t, const Seq& d);

// Does some length-m word s make R^{d+s} on sub contain x? Words landing in
// the domain are tried node by node; words passing a maximal domain node
// freeze the scheme there, so they reduce to a value test; words leaving
// the domain sideways are always false.
inline bool rtExists(RtContext& ctx, const TreeExpr& sub, const Seq& d,
                     std::size_t m) {
  if (m == 0) return rtRec(ctx, sub, d);
  const FiniteTree& dom = ctx.c.domain();
  for (const Seq& e : dom.nodes()) {
    if (!isPrefixOf(d, e)) continue;
    const std::size_t len = e.size() - d.size();
    if (len == m) {
      if (rtRec(ctx, sub, e)) return true;
    } else if (len < m && dom.isLeaf(e)) {
      if (ctx.c.values().at(e).count(ctx.x) > 0) return true;
    }
  }
  return false;
}

inline bool rtRec(RtContext& ctx, const TreeExpr& t, const Seq& d) {
  const std::pair<const void*, Seq> key(&t.node(), d);
  auto hit = ctx.memo.find(key);
  if (hit != ctx.memo.end()) return hit->second;
  bool result = false;
  switch (t.kind()) {
    case TreeExpr::Kind::Point:
      result = ctx.c.values().at(d).count(ctx.x) > 0;
      break;
    case TreeExpr::Kind::FullCone:
      // The full cone contains branches with unbounded entry sums, so the
      // witness values chase an infinite branch of the scheme; the best
      // stable value is the best maximal node below the cursor.
      result = rtTail(ctx, d);
      break;
    case TreeExpr::Kind::Explicit:
    case TreeExpr::Kind::Graft:
    case TreeExpr::Kind::JoinFinite: {
      const ChildrenProfile prof = t.childrenAtRoot();
      assert(prof.kind == ChildrenProfile::Kind::Finite);
      result = true;
      for (int m : prof.entries) {
        ctx.keepAlive.push_back(t.subtreeAt(Seq{m}));
        const TreeExpr sub = ctx.keepAlive.back();
        if (!rtExists(ctx, sub, d, static_cast<std::size_t>(m))) {
          result = false;
          break;
        }
      }
      break;
    }
    case TreeExpr::Kind::JoinOmega: {
      const TreeFamily& fam = std::get<JoinOmegaNode>(t.node().v).family;
      const std::size_t stable = depthBelow(ctx.c.domain(), d) + 1;
      result = true;
      for (std::size_t n = 0; n < stable; ++n) {
        if (!fam.memberNonEmpty(n)) continue;
        ctx.keepAlive.push_back(fam.member(n));
        const TreeExpr sub = ctx.keepAlive.back();
        if (!rtExists(ctx, sub, d, n)) {
          result = false;
          break;
        }
      }
      // Every family in use has arbitrarily late nonempty members, so the
      // stabilized term contributes exactly once.
      if (result) result = rtTail(ctx, d);
      break;
    }
  }
  ctx.memo.emplace(key, result);
  return result;
}

}  // namespace detail

// Membership of x in R^h_T(C) for a tree expression t. The empty tree only
// retains the outer constraint x in C(root).
inline bool rtMember(const SuslinScheme& c, const TreeExpr& t, const Atom& x,
                     const Seq& h) {
  if (!c.universe().contains(x))
    throw PreconditionError("rtMember needs a point of the scheme's universe");
  if (t.isEmpty()) return c.values().at(Seq{}).count(x) > 0;
  if (c.domain().contains(h)) {
    detail::RtContext ctx{c, x, {}, {}};
    return detail::rtRec(ctx, t, h);
  }
  const Seq p = c.anchor(h);
  if (c.domain().isLeaf(p)) return c.values().at(p).count(x) > 0;
  return false;
}

// Brute-force membership for a finite index tree: try every admissible map
// over a sufficient alphabet. Entries at least maxEntry(domain)+1 behave
// identically for the scheme, so one spare letter beyond the domain's
// entries is enough for completeness.
inline bool rtMemberByEnumeration(const SuslinScheme& c, const FiniteTree& t,
                                  const Atom& x, const Seq& h) {
  if (!c.universe().contains(x))
    throw PreconditionError("rtMember needs a point of the scheme's universe");
  if (t.empty()) return c.values().at(Seq{}).count(x) > 0;
  const int bound = std::max(0, c.domain().maxEntry()) + 2;
  for (const AdmissibleMap& phi : enumerateAdmissible(t, bound)) {
    bool ok = true;
    for (const auto& [node, image] : phi.images)
      if (c.at(concat(h, image)).count(x) == 0) {
        ok = false;
        break;
      }
    if (ok) return true;
  }
  return false;
}

// The alpha-th stage of the antitone chain R_alpha = R over the canonical
// tree of rank alpha, starting from R_0 = C(root).
inline AtomSet rAlpha(const SuslinScheme& c, const Ordinal& alpha) {
  const TreeExpr t = canonicalTreeC(alpha);
  AtomSet out;
  for (const Atom& a : c.universe().atoms)
    if (rtMember(c, t, a, Seq{})) out.insert(a);
  return out;
}

// Check that f is a rank-comparison embedding of t into s: defined on all
// of t with images in s, strictly extending along t, and never shrinking
// entry sums. Such a map yields R_s(C) inside R_t(C) for every scheme C.
inline bool embedCheck(const std::map<Seq, Seq>& f, const FiniteTree& t,
                       const FiniteTree& s) {
  for (const Seq& node : t.nodes()) {
    auto it = f.find(node);
    if (it == f.end())
      throw PreconditionError(
          "embedding must be defined on every node of the source tree");
    if (!s.contains(it->second))
      throw PreconditionError(
          "embedding image must be a node of the target tree");
  }
  for (const Seq& node : t.nodes()) {
    const Seq& image = f.at(node);
    if (!node.empty()) {
      const Seq parent(node.begin(), node.end() - 1);
      if (!isProperPrefixOf(f.at(parent), image)) return false;
    }
    long long sumNode = 0;
    for (int e : node) sumNode += e;
    long long sumImage = 0;
    for (int e : image) sumImage += e;
    if (sumImage < sumNode) return false;
  }
  return true;
}

// A closure operator on atom sets: extensive, monotone, idempotent. The
// identity works for discrete situations; the finite-topology module
// supplies topological ones.
using ClosureOperator = std::function<AtomSet(const AtomSet&)>;

inline ClosureOperator identityClosure() {
  return [](const AtomSet& a) { return a; };
}

namespace detail {

inline TreeExpr sTreeAt(const SuslinScheme& c, const ClosureOperator& cl,
                        const Atom& y, const Seq& d) {
  if (c.domain().isLeaf(d)) return TreeExpr::fullCone();
  std::vector<std::pair<Seq, TreeExpr>> branches;
  for (int m : c.domain().childEntries(d)) {
    Seq child = d;
    child.push_back(m);
    if (cl(c.values().at(child)).count(y) > 0)
      branches.emplace_back(Seq{m}, sTreeAt(c, cl, y, child));
  }
  if (branches.empty()) return TreeExpr::point();
  return TreeExpr::joinFinite(std::move(branches));
}

}  // namespace detail

// The tree of sequences whose (closed) scheme value still touches y:
// { s : y in closure(C(s)) }. Monotonicity of the scheme and of the closure
// makes this prefix-closed. Past a surviving maximal domain node every
// extension survives, hence the full cones; y survives to the Suslin
// operation of the closed scheme exactly when the result is ill-founded.
inline TreeExpr sTree(const SuslinScheme& c, const ClosureOperator& cl,
                      const Atom& y) {
  if (!c.universe().contains(y))
    throw PreconditionError("sTree needs a point of the scheme's universe");
  if (cl(AtomSet{}).count(y) > 0) return TreeExpr::fullCone();
  if (cl(c.values().at(Seq{})).count(y) == 0) return TreeExpr::emptyTree();
  return detail::sTreeAt(c, cl, y, Seq{});
}

struct FaPointVerdict {
  Atom point;
  bool pass = false;
  bool derivedEmpty = false;
  // For odd alpha: least i with the derived tree inside omega^{<=i}, when
  // one exists.
  std::optional<std::size_t> lengthBound;
};

struct FaVerdict {
  bool overall = true;
  std::optional<std::size_t> uniformLengthBound;
  std::vector<FaPointVerdict> points;
};

// Sufficiency test for the scheme to witness x at additive rank alpha: the
// Suslin operation of the closed scheme must give exactly x, and for every
// point y outside x the alphaPrime-fold incomparable-extension derivative
// of sTree(y) must be empty (alpha even), or contained in a fixed finite
// set of levels (alpha odd; containment in {root} is the bound-0 case).
inline FaVerdict faSufficiencyCheck(const SuslinScheme& c,
                                    const ClosureOperator& cl,
                                    const AtomSet& x, const Ordinal& alpha) {
  AtomSet attained;
  for (const Seq& l : c.domain().leaves())
    attained = setUnion(attained, cl(c.values().at(l)));
  if (attained != x)
    throw PreconditionError(
        "faSufficiencyCheck needs the Suslin operation of the closed scheme "
        "to equal the candidate set");
  const Ordinal ap = alpha.alphaPrime();
  const bool evenAlpha = alpha.isEven();
  FaVerdict out;
  bool allBounded = true;
  std::size_t maxBound = 0;
  for (const Atom& y : c.universe().atoms) {
    if (x.count(y) > 0) continue;
    const TreeExpr derived =
        iterate(DeriveKind::IncomparableInfinite, sTree(c, cl, y), ap);
    FaPointVerdict v;
    v.point = y;
    v.derivedEmpty = derived.isEmpty();
    if (evenAlpha) {
      v.pass = v.derivedEmpty;
    } else {
      if (derived.isEmpty())
        v.lengthBound = 0;
      else
        v.lengthBound = derived.depthBound();
      v.pass = v.lengthBound.has_value();
    }
    if (!v.pass) out.overall = false;
    if (v.lengthBound)
      maxBound = std::max(maxBound, *v.lengthBound);
    else
      allBounded = false;
    out.points.push_back(std::move(v));
  }
  if (!evenAlpha && allBounded && out.overall) out.uniformLengthBound = maxBound;
  return out;
}

}  // namespace dst
