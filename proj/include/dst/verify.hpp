#pragma once

// Named property suites over the whole library: each one draws randomized
// instances from a seed, checks a lemma's statement explicitly, and stops
// at the first violation with a re-runnable JSON counterexample. The
// acceptance runner and the command-line `verify` subcommand both
// dispatch into runSuite.

#include <algorithm>
#include <cstdint>
#include <map>
#include <random>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "dst/derive.hpp"
#include "dst/fintop.hpp"
#include "dst/json_io.hpp"
#include "dst/reindex.hpp"

namespace dst {

struct VerifyReport {
  std::string suite;
  bool pass = true;
  int casesRun = 0;
  std::string detail;   // summary, or the first failure's description
  Json counterexample;  // re-runnable inputs of the first failure
};

inline Json toJson(const VerifyReport& r) {
  Json out = {{"suite", r.suite},
              {"pass", r.pass},
              {"cases", r.casesRun},
              {"detail", r.detail}};
  if (!r.pass) out["counterexample"] = r.counterexample;
  return out;
}

namespace detail {

inline void reportFailure(VerifyReport& r, const std::string& what, Json ce) {
  r.pass = false;
  r.detail = what;
  r.counterexample = std::move(ce);
}

inline AtomSet randomSubset(std::mt19937_64& rng, const Universe& u) {
  std::uniform_int_distribution<int> coin(0, 1);
  AtomSet out;
  for (const Atom& a : u.atoms)
    if (coin(rng)) out.insert(a);
  return out;
}

inline Universe randomUniverse(std::mt19937_64& rng, int maxAtoms) {
  const int n = std::uniform_int_distribution<int>(1, maxAtoms)(rng);
  std::vector<Atom> atoms;
  for (int i = 0; i < n; ++i)
    atoms.push_back(std::string(1, static_cast<char>('a' + i)));
  return Universe(std::move(atoms));
}

// Monotone scheme on a random prefix-closed domain: child values are
// subsets of their parent's.
inline SuslinScheme randomScheme(std::mt19937_64& rng, const Universe& u,
                                 int maxEntry, int maxLen, int maxNodes) {
  std::uniform_int_distribution<int> entry(0, maxEntry);
  std::uniform_int_distribution<int> len(0, maxLen);
  std::uniform_int_distribution<int> nodeCount(0, maxNodes);
  FiniteTree dom = FiniteTree::single();
  const int extra = nodeCount(rng);
  for (int i = 0; i < extra; ++i) {
    Seq s;
    const int l = len(rng);
    for (int j = 0; j < l; ++j) s.push_back(entry(rng));
    dom.insertWithPrefixes(s);
  }
  std::uniform_int_distribution<int> coin(0, 1);
  std::map<Seq, AtomSet> vals;
  for (const Seq& s : dom.nodes()) {
    const AtomSet* pool = nullptr;
    if (!s.empty()) {
      const Seq parent(s.begin(), s.end() - 1);
      pool = &vals.at(parent);
    }
    AtomSet v;
    if (pool == nullptr) {
      for (const Atom& a : u.atoms)
        if (coin(rng)) v.insert(a);
    } else {
      for (const Atom& a : *pool)
        if (coin(rng)) v.insert(a);
    }
    vals[s] = std::move(v);
  }
  return SuslinScheme(u, dom, vals);
}

// Index tree with a bounded total entry sum, keeping the brute-force
// admissible enumeration (alphabet^sum words) tractable.
inline FiniteTree randomIndexTree(std::mt19937_64& rng, int maxNodes) {
  std::uniform_int_distribution<int> entry(0, 2);
  std::uniform_int_distribution<int> len(0, 2);
  std::uniform_int_distribution<int> nodeCount(0, maxNodes);
  FiniteTree t = FiniteTree::single();
  const auto totalSum = [](const FiniteTree& tree) {
    int total = 0;
    for (const Seq& node : tree.nodes())
      for (int e : node) total += e;
    return total;
  };
  const int extra = nodeCount(rng);
  for (int i = 0; i < extra && static_cast<int>(t.size()) < maxNodes; ++i) {
    Seq s;
    const int l = len(rng);
    for (int j = 0; j < l; ++j) s.push_back(entry(rng));
    FiniteTree candidate = t;
    candidate.insertWithPrefixes(s);
    if (totalSum(candidate) > 7) continue;
    t = std::move(candidate);
  }
  return t;
}

inline Seq randomPrefix(std::mt19937_64& rng) {
  std::uniform_int_distribution<int> entry(0, 4);
  std::uniform_int_distribution<int> len(0, 2);
  Seq h;
  const int l = len(rng);
  for (int j = 0; j < l; ++j) h.push_back(entry(rng));
  return h;
}

inline SetExpr randomOddExpr(std::mt19937_64& rng, const Universe& u,
                             int budget, int fanout);

// Expression of even alternation class within the budget: a base set or
// an intersection of odd-class pieces.
inline SetExpr randomEvenExpr(std::mt19937_64& rng, const Universe& u,
                              int budget, int fanout) {
  std::uniform_int_distribution<int> shape(0, 3);
  if (budget < 2 || shape(rng) == 0)
    return SetExpr::makeBase(randomSubset(rng, u));
  std::uniform_int_distribution<int> count(0, fanout);
  std::vector<SetExpr> items;
  const int n = count(rng);
  for (int i = 0; i < n; ++i)
    items.push_back(randomOddExpr(rng, u, budget - 1, fanout));
  return SetExpr::makeInter(std::move(items));
}

inline SetExpr randomOddExpr(std::mt19937_64& rng, const Universe& u,
                             int budget, int fanout) {
  std::uniform_int_distribution<int> shape(0, 3);
  if (budget < 1 || shape(rng) == 0)
    return SetExpr::makeBase(randomSubset(rng, u));
  std::uniform_int_distribution<int> count(0, fanout);
  std::vector<SetExpr> items;
  const int n = count(rng);
  for (int i = 0; i < n; ++i)
    items.push_back(randomEvenExpr(rng, u, budget - 1, fanout));
  return SetExpr::makeUnion(std::move(items));
}

inline SetExpr randomExprOfClass(std::mt19937_64& rng, const Universe& u,
                                 int budget, int fanout) {
  return budget % 2 == 0 ? randomEvenExpr(rng, u, budget, fanout)
                         : randomOddExpr(rng, u, budget, fanout);
}

// Free-form expression with at most two operands per node, so every
// width in {2,3,5} can hold it after normalization.
inline SetExpr randomAnyExpr(std::mt19937_64& rng, const Universe& u,
                             int depth) {
  const int pick =
      std::uniform_int_distribution<int>(0, depth > 0 ? 2 : 0)(rng);
  if (pick == 0) return SetExpr::makeBase(randomSubset(rng, u));
  std::vector<SetExpr> items;
  const int count = std::uniform_int_distribution<int>(0, 2)(rng);
  for (int i = 0; i < count; ++i)
    items.push_back(randomAnyExpr(rng, u, depth - 1));
  return pick == 1 ? SetExpr::makeUnion(std::move(items))
                   : SetExpr::makeInter(std::move(items));
}

inline std::size_t maxFanout(const SetExpr& e) {
  std::size_t out = e.items.size();
  for (const SetExpr& item : e.items) out = std::max(out, maxFanout(item));
  return out;
}

inline std::vector<Seq> randomGradedStack(std::mt19937_64& rng,
                                          std::size_t m) {
  std::uniform_int_distribution<int> entry(0, 3);
  std::vector<Seq> svec;
  for (std::size_t j = 0; j < m; ++j) {
    Seq layer;
    for (std::size_t i = 0; i < j + 2; ++i) layer.push_back(entry(rng));
    svec.push_back(layer);
  }
  return svec;
}

inline Seq randomHead(std::mt19937_64& rng) {
  std::uniform_int_distribution<int> len(1, 2);
  std::uniform_int_distribution<int> entry(0, 3);
  Seq h;
  const int l = len(rng);
  for (int i = 0; i < l; ++i) h.push_back(entry(rng));
  return h;
}

// Broom classified exactly at the given rank, with randomized handle
// words, fork shapes and side branches of strictly smaller rank.
inline BroomExpr randomBroom(std::mt19937_64& rng, const Ordinal& alpha) {
  if (alpha.isZero()) return BroomExpr::trivial();
  if (alpha.isLimit()) return BroomExpr::fork(BroomFamily::rankLadder(alpha));
  const Ordinal prev = alpha.predecessor();
  if (alpha.isOdd())
    return BroomExpr::handle(randomHead(rng), randomBroom(rng, prev));
  std::uniform_int_distribution<int> coin(0, 1);
  std::uniform_int_distribution<int> small(0, 1);
  std::uniform_int_distribution<int> extraCount(0, 2);
  const BroomExpr dominant = randomBroom(rng, prev);
  if (coin(rng) == 0) {
    std::vector<std::pair<Seq, BroomExpr>> prefix;
    const int extras = extraCount(rng);
    for (int i = 0; i < extras; ++i) {
      Seq h = randomHead(rng);
      h[0] = i;
      prefix.emplace_back(
          h, randomBroom(
                 rng, Ordinal(static_cast<std::uint64_t>(small(rng)))));
    }
    Seq word;
    if (coin(rng) == 0) word = randomHead(rng);
    return BroomExpr::fork(
        BroomFamily::uniformTail(std::move(prefix), extras, word, dominant));
  }
  std::vector<std::pair<Seq, BroomExpr>> branches;
  const int extras = extraCount(rng) + 1;
  for (int i = 0; i < extras; ++i) {
    Seq h = randomHead(rng);
    h[0] = i;
    branches.emplace_back(
        h, randomBroom(rng, Ordinal(static_cast<std::uint64_t>(small(rng)))));
  }
  Seq h = randomHead(rng);
  h[0] = extras;
  branches.emplace_back(h, dominant);
  return BroomExpr::fork(BroomFamily::finiteList(std::move(branches)));
}

// The quasi-components, each the intersection of the clopen sets around
// a point: always a clopen family covering the space.
inline std::vector<PointSet> quasiComponentFamily(const FinSpace& x) {
  std::vector<PointSet> family;
  for (int p = 0; p < x.pointCount(); ++p) {
    PointSet comp = x.all();
    for (PointSet u : x.opens())
      if (x.isClopen(u) && (u >> p & 1u)) comp &= u;
    if (std::find(family.begin(), family.end(), comp) == family.end())
      family.push_back(comp);
  }
  return family;
}

// Explicit trace-operator law check, mirroring wOperatorLawsCheck but
// reporting the offending law instead of asserting.
inline std::string wLawsExplicit(const FinSpace& q, PointSet p) {
  p &= q.all();
  std::map<PointSet, PointSet> wOf;
  for (PointSet u : q.opens()) {
    auto [it, fresh] = wOf.emplace(u & p, u);
    if (!fresh) it->second |= u;
  }
  const bool dense = q.isDense(p);
  for (const auto& [g, w] : wOf) {
    if (!q.isOpen(w)) return "W of trace " + pointSetToString(g) + " is not open";
    if ((w & p) != g)
      return "W of trace " + pointSetToString(g) + " has the wrong trace";
    if (dense && (w & ~q.interior(q.closure(g))) != 0)
      return "W of trace " + pointSetToString(g) +
             " escapes the interior of its closure";
  }
  for (const auto& [g, w] : wOf)
    for (const auto& [g2, w2] : wOf) {
      if ((g & ~g2) == 0 && (w & ~w2) != 0)
        return "W is not monotone between traces " + pointSetToString(g) +
               " and " + pointSetToString(g2);
      if (wOf.at(g & g2) != (w & w2))
        return "W does not distribute over the intersection of " +
               pointSetToString(g) + " and " + pointSetToString(g2);
    }
  for (PointSet u : q.opens()) {
    const PointSet c = q.all() & ~u;
    if (c & ~p) continue;
    if (wOf.at(p & u) != u)
      return "complement law fails at the closed set " + pointSetToString(c);
  }
  return "";
}

// Zoom postconditions checked from outside: base opens expand to opens,
// expansion respects the set algebra, opens project to opens, and any
// selector of one point per block recovers the base space.
inline std::string zoomExplicit(const FinSpace& y,
                                const std::map<int, FinSpace>& xs) {
  const ZoomSpace z = zoomSpace(y, xs);
  for (PointSet u : y.opens()) {
    if (!z.space.isOpen(z.expand(u)))
      return "expanded open " + pointSetToString(u) + " is not open";
    for (PointSet v : y.opens()) {
      if (z.expand(u | v) != (z.expand(u) | z.expand(v)))
        return "expansion misses a union";
      if (z.expand(u & v) != (z.expand(u) & z.expand(v)))
        return "expansion misses an intersection";
    }
  }
  for (PointSet w : z.space.opens()) {
    PointSet img = 0;
    for (int p = 0; p < y.pointCount(); ++p)
      if (w & z.blockMask(p)) img |= PointSet{1} << p;
    if (!y.isOpen(img))
      return "projection of the open " + pointSetToString(w) + " is not open";
  }
  PointSet selector = 0;
  for (int start : z.blockStart) selector |= PointSet{1} << start;
  if (!(z.space.subspace(selector) == y))
    return "the block-start selector does not recover the base space";
  for (const auto& [i, piece] : xs) {
    const PointSet block = z.blockMask(i);
    if (!z.space.isOpen(block))
      return "the piece at point " + std::to_string(i) + " is not open";
    if (z.space.isClosed(block) != y.isClosed(PointSet{1} << i))
      return "the piece at point " + std::to_string(i) +
             " disagrees with the point on closedness";
  }
  return "";
}

// Amalgamation postconditions checked from outside: trivial extensions
// reproduce the base, pieces are clopen, and the basis is closed under
// pairwise intersections.
inline std::string amalgamExplicit(const FinSpace& x,
                                   const std::vector<PointSet>& family,
                                   const std::map<std::size_t, SpaceExtension>& exts) {
  const Amalgam trivial = amalgamate(x, family, {});
  if (!(trivial.space == x))
    return "the amalgam over trivial extensions is not the base space";
  const Amalgam am = amalgamate(x, family, exts);
  for (std::size_t i = 0; i < am.pieces.size(); ++i)
    if (!am.space.isClopen(am.pieces[i]))
      return "piece " + std::to_string(i) + " is not clopen in the amalgam";
  const std::set<PointSet> basis(am.basis.begin(), am.basis.end());
  for (PointSet b1 : basis)
    for (PointSet b2 : basis)
      if (basis.count(b1 & b2) == 0)
        return "the basis misses the intersection of " + pointSetToString(b1) +
               " and " + pointSetToString(b2);
  return "";
}

// The one-point extension used on randomized amalgams: a new point whose
// only neighborhood is the whole extension, attached to a family member
// that meets no other member.
inline std::map<std::size_t, SpaceExtension> cofinitePointExtension(
    const FinSpace& x, const std::vector<PointSet>& family) {
  std::map<std::size_t, SpaceExtension> exts;
  for (std::size_t i = 0; i < family.size(); ++i) {
    bool touches = false;
    for (std::size_t j = 0; j < family.size(); ++j)
      if (j != i && (family[i] & family[j])) touches = true;
    if (touches) continue;
    std::vector<int> pts;
    const FinSpace member = x.subspace(family[i], &pts);
    const int k = member.pointCount();
    if (k + 1 > FinSpace::maxPoints) continue;
    std::vector<PointSet> grown = member.opens();
    grown.push_back(member.all() | (PointSet{1} << k));
    SpaceExtension e;
    e.space = FinSpace::fromOpens(k + 1, grown);
    e.labels = pts;
    e.labels.push_back(100 + static_cast<int>(i));
    exts.emplace(i, e);
    break;
  }
  return exts;
}

}  // namespace detail

// Both derivative kinds assign every canonical tree its construction
// ordinal as rank.
inline VerifyReport verifyCanonicalRank(std::uint64_t, int) {
  VerifyReport r;
  r.suite = "canonical-rank";
  const std::vector<Ordinal> alphas = {
      Ordinal(0),          Ordinal(1),
      Ordinal(2),          Ordinal(3),
      Ordinal(5),          Ordinal::omega(),
      Ordinal::omega() + Ordinal(1),
      Ordinal::omegaPower(1, 2),
      Ordinal::omegaPower(2, 1),
      Ordinal::omegaPower(2, 1) + Ordinal::omega() + Ordinal(3)};
  for (const Ordinal& alpha : alphas) {
    const TreeExpr t = canonicalTree(alpha);
    for (DeriveKind kind : {DeriveKind::Leaf, DeriveKind::Infinite}) {
      const Rank got = rank(kind, t);
      ++r.casesRun;
      if (got == Rank::of(alpha)) continue;
      detail::reportFailure(
          r,
          "canonical tree of " + toString(alpha) + " ranked " +
              toString(got) + " under kind " +
              (kind == DeriveKind::Leaf ? "l" : "i"),
          Json{{"alpha", toJson(alpha)},
               {"kind", kind == DeriveKind::Leaf ? "l" : "i"},
               {"got", toJson(got)}});
      return r;
    }
  }
  r.detail = "every canonical tree ranks at its construction ordinal";
  return r;
}

// Recursive membership over explicit index trees agrees with brute-force
// enumeration of all admissible mappings.
inline VerifyReport verifyRtOracle(std::uint64_t seed, int cases) {
  VerifyReport r;
  r.suite = "rt-oracle";
  std::mt19937_64 rng(seed);
  for (int i = 0; i < cases; ++i) {
    const Universe u = detail::randomUniverse(rng, 8);
    const SuslinScheme c = detail::randomScheme(rng, u, 3, 3, 6);
    const FiniteTree t = detail::randomIndexTree(rng, 6);
    const Seq h = detail::randomPrefix(rng);
    std::uniform_int_distribution<std::size_t> pickAtom(0, u.atoms.size() - 1);
    const Atom x = u.atoms[pickAtom(rng)];
    const bool viaRec = rtMember(c, TreeExpr::explicitTree(t), x, h);
    const bool viaEnum = rtMemberByEnumeration(c, t, x, h);
    ++r.casesRun;
    if (viaRec == viaEnum) continue;
    detail::reportFailure(
        r,
        "membership of " + x + " at " + seqToString(h) +
            " disagrees with the enumeration oracle",
        Json{{"scheme", toJson(c)},
             {"tree", toJson(t)},
             {"point", x},
             {"prefix", toJson(h)},
             {"recursive", viaRec},
             {"enumeration", viaEnum}});
    return r;
  }
  r.detail = "recursive membership matches the enumeration oracle";
  return r;
}

// Compiled regular representations recover the expression value at their
// target stage.
inline VerifyReport verifyRegularCompiler(std::uint64_t seed, int cases) {
  VerifyReport r;
  r.suite = "regular-compiler";
  std::mt19937_64 rng(seed);
  for (int i = 0; i < cases; ++i) {
    const int alpha = i % 5;
    const int width = alpha >= 3 ? 2 : 3;
    const Universe u = detail::randomUniverse(rng, 12);
    std::uniform_int_distribution<int> classPick(0, alpha);
    const SetExpr e = detail::randomExprOfClass(rng, u, classPick(rng), width);
    const AtomSet want = evalExpr(e, u);
    const SuslinScheme c = compileRegular(e, u, Ordinal(alpha), width);
    const AtomSet got = rAlpha(c, Ordinal(alpha));
    ++r.casesRun;
    if (got == want && c.values().at({}) == want) continue;
    detail::reportFailure(
        r, "stage-" + std::to_string(alpha) + " value differs from eval",
        Json{{"expr", toJson(e)},
             {"universe", toJson(u)},
             {"alpha", toJson(Ordinal(alpha))},
             {"width", width},
             {"expected", toJson(want)},
             {"actual", toJson(got)}});
    return r;
  }
  r.detail = "compiled schemes recover their expression values";
  return r;
}

// The diagonal/column split and the graded code: lengths add up, the
// code round-trips, prefixes transport, and extensions keep diagonals
// while growing columns.
inline VerifyReport verifyReindexLaws(std::uint64_t seed, int cases) {
  VerifyReport r;
  r.suite = "reindex-laws";
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<std::size_t> depth(0, 6);
  for (int i = 0; i < cases; ++i) {
    const std::size_t m = depth(rng);
    const std::vector<Seq> svec = detail::randomGradedStack(rng, m);
    Json stackJson = Json::array();
    for (const Seq& layer : svec) stackJson.push_back(toJson(layer));
    const auto fail = [&](const std::string& law, const std::string& what) {
      detail::reportFailure(r, what,
                            Json{{"stack", stackJson}, {"law", law}});
    };

    const DeltaXi dx = deltaXi(svec);
    for (std::size_t k = 0; k <= m; ++k)
      if (dx.deltas[k].size() + dx.xis[k].size() != m) {
        fail("a", "diagonal and column lengths do not add up at level " +
                      std::to_string(k));
        return r;
      }

    const Seq code = rhoCode(svec);
    if (code.size() != m || rhoDecode(code) != svec) {
      fail("b", "the graded code does not round-trip");
      return r;
    }

    for (std::size_t j = 0; j <= m; ++j) {
      const Seq head(code.begin(), code.begin() + static_cast<long>(j));
      const std::vector<Seq> front(svec.begin(),
                                   svec.begin() + static_cast<long>(j));
      if (rhoDecode(head) != front || rhoCode(front) != head) {
        fail("c", "code prefixes and stack prefixes do not transport");
        return r;
      }
    }

    std::uniform_int_distribution<int> more(1, 2);
    std::uniform_int_distribution<int> entry(0, 3);
    std::vector<Seq> longer = svec;
    const std::size_t m2 = m + static_cast<std::size_t>(more(rng));
    for (std::size_t j = m; j < m2; ++j) {
      Seq layer;
      for (std::size_t k = 0; k < j + 2; ++k) layer.push_back(entry(rng));
      longer.push_back(layer);
    }
    const DeltaXi dx2 = deltaXi(longer);
    bool ok = isPrefixOf(code, rhoCode(longer));
    for (std::size_t k = 0; ok && k <= m; ++k)
      ok = dx2.deltas[k] == dx.deltas[k] && isPrefixOf(dx.xis[k], dx2.xis[k]);
    if (!ok) {
      fail("d", "extending the stack moved a diagonal or cut a column");
      return r;
    }
    ++r.casesRun;
  }
  r.detail = "split lengths, code bijection, prefix transport and stability hold";
  return r;
}

// Rank-exact brooms satisfy the derivative bounds of their parity, their
// extensions still satisfy them, and one structural derivative of an
// extension recovers the closure of its base.
inline VerifyReport verifyBroomRank(std::uint64_t seed, int cases) {
  VerifyReport r;
  r.suite = "broom-rank";
  std::mt19937_64 rng(seed);
  std::vector<Ordinal> ranks;
  for (std::uint64_t k = 0; k <= 6; ++k) ranks.push_back(Ordinal(k));
  ranks.push_back(Ordinal::omega());
  ranks.push_back(Ordinal::omega() + Ordinal(2));
  std::uniform_int_distribution<int> shift(0, 2);
  std::uniform_int_distribution<int> coin(0, 1);
  for (int i = 0; i < cases; ++i) {
    const Ordinal& rk = ranks[static_cast<std::size_t>(i) % ranks.size()];
    const BroomExpr b = detail::randomBroom(rng, rk);
    const RankLemmaReport base = rankLemmaCheck(b);
    Seq word;
    if (coin(rng) == 1) word = detail::randomHead(rng);
    const InfBroomExpr a = extendBroom(b, {shift(rng), word});
    const auto fail = [&](const std::string& what, const char* stage) {
      detail::reportFailure(r, what,
                            Json{{"broom", toJson(b)},
                                 {"extension", toJson(a)},
                                 {"rank", toJson(rk)},
                                 {"stage", stage}});
    };
    if (base.alpha != rk || !base.pass) {
      fail("the broom misses its rank bounds at " + toString(rk),
           "rank-lemma");
      return r;
    }
    if (!rankLemmaCheck(a).pass) {
      fail("the extension misses its rank bounds at " + toString(rk),
           "extension-lemma");
      return r;
    }
    if (!broomDiie(a).structuralEquals(broomClosureTree(b))) {
      fail("one derivative of the extension is not the base closure",
           "derivative");
      return r;
    }
    ++r.casesRun;
  }
  r.detail = "rank bounds and the extension derivative identity hold";
  return r;
}

// Extending and closing off a broom raises its classification by exactly
// two.
inline VerifyReport verifyBroomTilde(std::uint64_t seed, int cases) {
  VerifyReport r;
  r.suite = "broom-tilde";
  std::mt19937_64 rng(seed);
  const std::vector<Ordinal> bases = {Ordinal(0), Ordinal(1), Ordinal(2),
                                      Ordinal(3), Ordinal::omega()};
  std::uniform_int_distribution<int> shift(0, 2);
  std::uniform_int_distribution<int> coin(0, 1);
  for (int i = 0; i < cases; ++i) {
    const Ordinal& alpha = bases[static_cast<std::size_t>(i) % bases.size()];
    const BroomExpr b = detail::randomBroom(rng, alpha);
    Seq word;
    if (coin(rng) == 1) word = detail::randomHead(rng);
    const InfBroomExpr a = extendBroom(b, {shift(rng), word});
    const Ordinal got = classifyBroom(tildeBroom(a));
    const Ordinal want = Ordinal(2) + alpha;
    ++r.casesRun;
    if (got == want) continue;
    detail::reportFailure(
        r, "the closed-off extension classifies at " + toString(got) +
               " instead of " + toString(want),
        Json{{"extension", toJson(a)},
             {"expected", toJson(want)},
             {"actual", toJson(got)}});
    return r;
  }
  r.detail = "closed-off extensions classify two above their bases";
  return r;
}

// Grid compilation preserves expression values at every admissible rank,
// and schemes shrink toward their value without changing it.
inline VerifyReport verifySimpleCompiler(std::uint64_t seed, int cases) {
  VerifyReport r;
  r.suite = "simple-compiler";
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> coinDist(0, 1);
  for (int i = 0; i < cases; ++i) {
    const Universe u = detail::randomUniverse(rng, 6);
    const SetExpr e = detail::randomAnyExpr(rng, u, 3);
    const std::uint64_t cls = exprClass(normalizeExpr(e));
    const std::size_t fanout = detail::maxFanout(normalizeExpr(e));
    int width = 2;
    for (int w : {2, 3, 5})
      if (static_cast<std::size_t>(w) >= fanout) {
        width = w;
        break;
      }
    std::uniform_int_distribution<std::uint64_t> alphaPick(cls, 4);
    const Ordinal alpha(alphaPick(rng));
    const AtomSet want = evalExpr(e, u);
    const LeafScheme h = compileSimple(e, u, alpha, width);
    const auto fail = [&](const std::string& what, const char* stage,
                          const LeafScheme& scheme) {
      detail::reportFailure(r, what,
                            Json{{"expr", toJson(e)},
                                 {"universe", toJson(u)},
                                 {"alpha", toJson(alpha)},
                                 {"width", width},
                                 {"stage", stage},
                                 {"scheme", toJson(scheme)}});
    };
    if (evalScheme(h) != want) {
      fail("the compiled scheme misses the expression value", "compile", h);
      return r;
    }

    std::map<Seq, AtomSet> cut;
    for (const auto& [leaf, value] : h.assign())
      cut[leaf] = setInter(value, want);
    LeafScheme h2(h.tree(), std::move(cut));
    if (!shrinkScheme(h, want, h2) || evalScheme(h2) != want) {
      fail("cutting every leaf to the value broke the shrink relation",
           "shrink-cut", h2);
      return r;
    }
    std::map<Seq, AtomSet> mid;
    for (const auto& [leaf, value] : h.assign()) {
      AtomSet v = setInter(value, want);
      for (const Atom& a : value)
        if (coinDist(rng)) v.insert(a);
      mid[leaf] = std::move(v);
    }
    LeafScheme h3(h.tree(), std::move(mid));
    if (shrinkScheme(h, want, h3) && evalScheme(h3) != want) {
      fail("a shrunken scheme changed the value", "shrink-mid", h3);
      return r;
    }
    ++r.casesRun;
  }
  r.detail = "compilation and shrinking preserve expression values";
  return r;
}

// Trace operators, zooms and amalgamations over every small space and a
// sample of larger randomized ones.
inline VerifyReport verifyTopoLaws(std::uint64_t seed, int cases) {
  VerifyReport r;
  r.suite = "topo-laws";
  std::mt19937_64 rng(seed);

  const auto zoomPieces = [](const FinSpace& x) {
    std::map<int, FinSpace> xs;
    int parity = 0;
    for (int i = 0; i < x.pointCount(); ++i) {
      if (!x.isIsolated(i)) continue;
      xs.emplace(i, parity % 2 == 0 ? FinSpace::discrete(2)
                                    : FinSpace::fromOpens(2, {0u, 2u, 3u}));
      ++parity;
    }
    return xs;
  };

  const auto checkSpace = [&](const FinSpace& x, bool everySubspace) {
    std::vector<PointSet> ps;
    if (everySubspace) {
      for (PointSet p = 0; p <= x.all(); ++p) ps.push_back(p);
    } else {
      std::uniform_int_distribution<PointSet> pick(0, x.all());
      for (int k = 0; k < 20; ++k) ps.push_back(pick(rng) & pick(rng));
      ps.push_back(x.all());
    }
    for (PointSet p : ps) {
      const std::string what = detail::wLawsExplicit(x, p);
      if (!what.empty())
        return std::pair<std::string, Json>(
            what, Json{{"space", toJson(x)},
                       {"subspace", toJson(p, x.pointCount())},
                       {"stage", "w-laws"}});
    }
    const std::string zoomWhat = detail::zoomExplicit(x, zoomPieces(x));
    if (!zoomWhat.empty())
      return std::pair<std::string, Json>(
          zoomWhat, Json{{"space", toJson(x)}, {"stage", "zoom"}});
    const std::vector<PointSet> family = detail::quasiComponentFamily(x);
    if (!family.empty()) {
      const std::string amWhat = detail::amalgamExplicit(
          x, family, detail::cofinitePointExtension(x, family));
      if (!amWhat.empty()) {
        Json fam = Json::array();
        for (PointSet m : family) fam.push_back(toJson(m, x.pointCount()));
        return std::pair<std::string, Json>(
            amWhat, Json{{"space", toJson(x)},
                         {"family", std::move(fam)},
                         {"stage", "amalgam"}});
      }
    }
    return std::pair<std::string, Json>("", Json());
  };

  for (int n = 0; n <= 5; ++n)
    for (const FinSpace& x : allSpaces(n)) {
      auto [what, ce] = checkSpace(x, true);
      ++r.casesRun;
      if (what.empty()) continue;
      detail::reportFailure(r, what, std::move(ce));
      return r;
    }
  std::uniform_int_distribution<int> sizePick(6, 8);
  for (int i = 0; i < cases; ++i) {
    const FinSpace x = randomSpace(rng, sizePick(rng));
    auto [what, ce] = checkSpace(x, false);
    ++r.casesRun;
    if (what.empty()) continue;
    detail::reportFailure(r, what, std::move(ce));
    return r;
  }
  r.detail = "trace, zoom and amalgamation laws hold on every space checked";
  return r;
}

// The stage sets shrink along the stage order and never drop below the
// Suslin kernel.
inline VerifyReport verifyAntitone(std::uint64_t seed, int cases) {
  VerifyReport r;
  r.suite = "antitone";
  std::mt19937_64 rng(seed);
  for (int i = 0; i < cases; ++i) {
    const Universe u = detail::randomUniverse(rng, 8);
    const SuslinScheme c = detail::randomScheme(rng, u, 3, 3, 6);
    const AtomSet kernel = suslinOperation(c);
    AtomSet prev = u.all();
    for (std::uint64_t alpha = 0; alpha <= 4; ++alpha) {
      const AtomSet cur = rAlpha(c, Ordinal(alpha));
      const auto fail = [&](const std::string& what) {
        detail::reportFailure(r, what,
                              Json{{"scheme", toJson(c)},
                                   {"alpha", toJson(Ordinal(alpha))},
                                   {"previous", toJson(prev)},
                                   {"current", toJson(cur)},
                                   {"kernel", toJson(kernel)}});
      };
      if (!isSubset(cur, prev)) {
        fail("the stage set grew between consecutive stages");
        return r;
      }
      if (!isSubset(kernel, cur)) {
        fail("the stage set dropped below the Suslin kernel");
        return r;
      }
      prev = cur;
    }
    ++r.casesRun;
  }
  r.detail = "stage sets are antitone and contain the Suslin kernel";
  return r;
}

inline const std::vector<std::string>& suiteNames() {
  static const std::vector<std::string> names = {
      "canonical-rank", "rt-oracle",       "regular-compiler",
      "reindex-laws",   "broom-rank",      "broom-tilde",
      "simple-compiler", "topo-laws",      "antitone"};
  return names;
}

inline VerifyReport runSuite(const std::string& suite, std::uint64_t seed,
                             int cases) {
  if (suite == "canonical-rank") return verifyCanonicalRank(seed, cases);
  if (suite == "rt-oracle") return verifyRtOracle(seed, cases);
  if (suite == "regular-compiler") return verifyRegularCompiler(seed, cases);
  if (suite == "reindex-laws") return verifyReindexLaws(seed, cases);
  if (suite == "broom-rank") return verifyBroomRank(seed, cases);
  if (suite == "broom-tilde") return verifyBroomTilde(seed, cases);
  if (suite == "simple-compiler") return verifySimpleCompiler(seed, cases);
  if (suite == "topo-laws") return verifyTopoLaws(seed, cases);
  if (suite == "antitone") return verifyAntitone(seed, cases);
  std::string known;
  for (const std::string& name : suiteNames())
    known += (known.empty() ? "" : ", ") + name;
  throw ParseError("unknown suite \"" + suite + "\"; available: " + known);
}

}  // namespace dst
