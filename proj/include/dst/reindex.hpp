#pragma once

// Tuple coders and the regular-representation compiler.
//
// piK ranks the k-tuples of naturals by coordinate total and then
// lexicographically inside one total, so the all-zero tuple of every arity
// codes to 0 and sparse tuples get small codes. rhoCode packs a graded
// stack of tuples, one per depth with the arity growing along the
// diagonal, into a single integer sequence; deltaXi splits such a stack
// into the diagonal of newest coordinates and the column below each
// coordinate slot.
//
// compileRegular turns a union/intersection expression into a Suslin
// scheme whose rank-alpha membership set recovers the expression's value:
// at odd ranks the expression's unions spread over the first entries one
// rank lower, at even ranks each conjunct occupies its own tree level and
// drives a sub-scheme along its own coordinate column, with branch choices
// made on the diagonal. pairRefine zips two schemes over a shared universe
// into one whose values refine both factors entrywise.

#include <algorithm>
#include <cassert>
#include <cstdint>
#include <limits>
#include <map>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "dst/error.hpp"
#include "dst/leaf_scheme.hpp"
#include "dst/ordinal.hpp"
#include "dst/seq.hpp"
#include "dst/suslin.hpp"

namespace dst {

struct PairCoder {
  static std::uint64_t binom(std::uint64_t n, std::uint64_t r) {
    if (r > n) return 0;
    if (n - r < r) r = n - r;
    std::uint64_t out = 1;
    for (std::uint64_t i = 1; i <= r; ++i) {
      const std::uint64_t factor = n - r + i;
      if (out > std::numeric_limits<std::uint64_t>::max() / factor)
        throw Error("binomial coefficient overflow");
      out = out * factor / i;  // exact: out*factor is C(n-r+i, i) * i!
    }
    return out;
  }

  // Rank of a tuple among all tuples of its arity, ordered by coordinate
  // total first and lexicographically within one total. Bijective per
  // arity, with the identity at arity 1.
  static std::uint64_t piK(const Seq& s) {
    std::uint64_t total = 0;
    for (int v : s) {
      if (v < 0)
        throw PreconditionError("tuple coder needs nonnegative entries");
      total += static_cast<std::uint64_t>(v);
    }
    const std::size_t k = s.size();
    if (k == 0) return 0;
    std::uint64_t code = binom(total + k - 1, k);  // tuples of smaller total
    std::uint64_t rem = total;
    for (std::size_t i = 0; i + 1 < k; ++i) {
      // Tuples agreeing before position i with a smaller value there: the
      // free positions behind i make up the rest of the total.
      const std::uint64_t free = k - i - 1;
      for (std::uint64_t v = 0; v < static_cast<std::uint64_t>(s[i]); ++v)
        code += binom(rem - v + free - 1, free - 1);
      rem -= static_cast<std::uint64_t>(s[i]);
    }
    return code;
  }

  static Seq piKInv(std::uint64_t code, std::size_t k) {
    if (k == 0) {
      if (code != 0)
        throw PreconditionError("only 0 codes the empty tuple");
      return {};
    }
    std::uint64_t total = 0;
    while (binom(total + k, k) <= code) ++total;
    if (total > static_cast<std::uint64_t>(std::numeric_limits<int>::max()))
      throw Error("decoded entry exceeds the int range");
    std::uint64_t rank = code - binom(total + k - 1, k);
    Seq out;
    std::uint64_t rem = total;
    for (std::size_t i = 0; i + 1 < k; ++i) {
      const std::uint64_t free = k - i - 1;
      std::uint64_t v = 0;
      while (true) {
        const std::uint64_t below = binom(rem - v + free - 1, free - 1);
        if (rank < below) break;
        rank -= below;
        ++v;
      }
      out.push_back(static_cast<int>(v));
      rem -= v;
    }
    out.push_back(static_cast<int>(rem));
    return out;
  }

  static int toEntry(std::uint64_t code) {
    if (code > static_cast<std::uint64_t>(std::numeric_limits<int>::max()))
      throw Error("coded entry exceeds the int range");
    return static_cast<int>(code);
  }

  static int pair(int a, int b) { return toEntry(piK(Seq{a, b})); }

  static std::pair<int, int> unpair(int code) {
    if (code < 0) throw PreconditionError("pair codes are nonnegative");
    const Seq s = piKInv(static_cast<std::uint64_t>(code), 2);
    return {s[0], s[1]};
  }
};

// Entrywise pairing of two equal-length sequences into one.
inline Seq pairSeqs(const Seq& s, const Seq& t) {
  if (s.size() != t.size())
    throw PreconditionError("pairSeqs needs sequences of equal length");
  Seq out;
  for (std::size_t i = 0; i < s.size(); ++i)
    out.push_back(PairCoder::pair(s[i], t[i]));
  return out;
}

inline std::pair<Seq, Seq> unpairSeqs(const Seq& u) {
  Seq s, t;
  for (int code : u) {
    const auto [a, b] = PairCoder::unpair(code);
    s.push_back(a);
    t.push_back(b);
  }
  return {s, t};
}

namespace detail {

// A graded stack has layers of lengths 2, 3, 4, ...: layer j carries one
// coordinate per level up to j plus the new diagonal coordinate.
inline void checkGraded(const std::vector<Seq>& svec) {
  for (std::size_t j = 0; j < svec.size(); ++j) {
    if (svec[j].size() != j + 2)
      throw PreconditionError("graded layer " + std::to_string(j + 1) +
                              " must have length " + std::to_string(j + 2));
    for (int v : svec[j])
      if (v < 0)
        throw PreconditionError("graded layers need nonnegative entries");
  }
}

}  // namespace detail

inline Seq rhoCode(const std::vector<Seq>& svec) {
  detail::checkGraded(svec);
  Seq out;
  for (const Seq& layer : svec)
    out.push_back(PairCoder::toEntry(PairCoder::piK(layer)));
  return out;
}

inline std::vector<Seq> rhoDecode(const Seq& code) {
  std::vector<Seq> out;
  for (std::size_t j = 0; j < code.size(); ++j) {
    if (code[j] < 0)
      throw PreconditionError("layer codes are nonnegative");
    out.push_back(
        PairCoder::piKInv(static_cast<std::uint64_t>(code[j]), j + 2));
  }
  return out;
}

struct DeltaXi {
  Seq rho;                  // per-layer codes, one entry per layer
  std::vector<Seq> deltas;  // deltas[k]: newest coordinate of layers 1..k
  std::vector<Seq> xis;     // xis[k]: coordinate k of layers k+1 onward
};

// Splits a graded stack at every cut k = 0..m into the diagonal read off
// so far and the column still growing below slot k. The two pieces always
// rejoin to the stack's length, and extending the stack never changes a
// diagonal while it extends every column.
inline DeltaXi deltaXi(const std::vector<Seq>& svec) {
  detail::checkGraded(svec);
  const std::size_t m = svec.size();
  DeltaXi out;
  out.rho = rhoCode(svec);
  for (std::size_t k = 0; k <= m; ++k) {
    Seq delta, xi;
    for (std::size_t j = 0; j < k; ++j) delta.push_back(svec[j][j + 1]);
    for (std::size_t j = k; j < m; ++j) xi.push_back(svec[j][k]);
    out.deltas.push_back(std::move(delta));
    out.xis.push_back(std::move(xi));
  }
  return out;
}

namespace detail {

inline void checkUnionFanouts(const SetExpr& e, int width) {
  if (e.kind == SetExpr::Kind::Union &&
      e.items.size() > static_cast<std::size_t>(width))
    throw PreconditionError("union of " + std::to_string(e.items.size()) +
                            " operands exceeds width " +
                            std::to_string(width));
  for (const SetExpr& item : e.items) checkUnionFanouts(item, width);
}

inline SuslinScheme compileConj(const std::vector<SetExpr>& conj,
                                const Universe& u, const Ordinal& alpha);

// Node budget for a compiled domain; hitting it means the input expression
// is far outside the intended small-width, small-depth regime.
constexpr std::size_t compileNodeBudget = 200000;

// Odd rank: distribute the conjunction over its unions. Every way of
// picking one branch from each conjunct becomes a child subtree compiled
// one rank lower; the first entry names the pick.
inline SuslinScheme compileOdd(const std::vector<SetExpr>& conj,
                               const Universe& u, const Ordinal& alpha) {
  AtomSet target = u.all();
  for (const SetExpr& e : conj) target = setInter(target, evalExpr(e, u));

  std::vector<std::vector<SetExpr>> choices;
  for (const SetExpr& e : conj)
    choices.push_back(e.kind == SetExpr::Kind::Union
                          ? e.items
                          : std::vector<SetExpr>{e});
  std::set<Seq> nodes{Seq{}};
  std::map<Seq, AtomSet> values{{Seq{}, target}};
  bool anyEmpty = false;
  for (const auto& c : choices)
    if (c.empty()) anyEmpty = true;
  if (!anyEmpty) {
    std::vector<std::size_t> idx(choices.size(), 0);
    int branch = 0;
    while (true) {
      std::vector<SetExpr> picked;
      for (std::size_t i = 0; i < choices.size(); ++i)
        picked.push_back(choices[i][idx[i]]);
      const SuslinScheme sub = compileConj(picked, u, alpha.predecessor());
      for (const Seq& t : sub.domain().nodes()) {
        const Seq shifted = concat(Seq{branch}, t);
        nodes.insert(shifted);
        values[shifted] = setInter(target, sub.values().at(t));
      }
      ++branch;
      std::size_t i = 0;
      while (i < choices.size() && ++idx[i] == choices[i].size()) {
        idx[i] = 0;
        ++i;
      }
      if (i == choices.size()) break;
    }
  }
  return SuslinScheme(u, FiniteTree::fromNodes(nodes), std::move(values));
}

// Even rank: every conjunct gets its own tree level. Walking down the
// domain, the entry at depth d codes one coordinate per level: the new
// diagonal coordinate picks a branch for the level just reached, and the
// column coordinate of each earlier level advances that level's sub-scheme
// by one step (or pads with 0 once the sub-scheme is pinned to a leaf).
// Values intersect the conjunction's value with every running sub-value,
// so a branch survives exactly when all conjuncts keep witnessing it.
inline SuslinScheme compileEven(const std::vector<SetExpr>& conj,
                                const Universe& u, const Ordinal& alpha) {
  AtomSet target = u.all();
  for (const SetExpr& e : conj) target = setInter(target, evalExpr(e, u));

  // Flatten intersections one level, then wrap each conjunct in a unit:
  // unions offer their items as branch choices, anything else is a
  // single-branch unit.
  struct LevelUnit {
    std::vector<SetExpr> family;
    Ordinal beta;  // even rank the branches are compiled at
  };
  std::vector<SetExpr> flat;
  for (const SetExpr& e : conj) {
    if (e.kind == SetExpr::Kind::Inter)
      flat.insert(flat.end(), e.items.begin(), e.items.end());
    else
      flat.push_back(e);
  }
  std::vector<LevelUnit> units;
  for (const SetExpr& e : flat) {
    LevelUnit unit;
    unit.family = e.kind == SetExpr::Kind::Union ? e.items
                                                 : std::vector<SetExpr>{e};
    std::uint64_t worst = 0;
    for (const SetExpr& g : unit.family)
      worst = std::max(worst, exprClass(g));
    unit.beta = Ordinal(worst + worst % 2);  // round up to an even rank
    units.push_back(std::move(unit));
  }
  std::stable_sort(units.begin(), units.end(),
                   [](const LevelUnit& a, const LevelUnit& b) {
                     return a.beta < b.beta;
                   });

  // Place the units on levels 1, 2, ... At a successor rank every level
  // offers the same capacity; at a limit rank the capacities run through
  // the canonical enumeration, so each unit takes the first level able to
  // afford its branches and the skipped levels stay trivial.
  std::vector<std::size_t> pos(units.size());
  if (alpha.isLimit()) {
    const Ordinal aPrime = alpha.alphaPrime();
    std::size_t m = 1;
    for (std::size_t i = 0; i < units.size(); ++i) {
      while (limitEnumeration(aPrime, m) < units[i].beta.alphaPrime()) ++m;
      pos[i] = m++;
    }
  } else {
    const Ordinal capacity = alpha.predecessor().predecessor();
    for (std::size_t i = 0; i < units.size(); ++i) {
      assert(units[i].beta <= capacity);
      pos[i] = i + 1;
    }
  }
  const std::size_t depthGoal = units.empty() ? 0 : pos.back();
  std::map<std::size_t, std::size_t> unitAt;
  for (std::size_t i = 0; i < units.size(); ++i) unitAt[pos[i]] = i;

  std::vector<std::vector<SuslinScheme>> subs;
  for (const LevelUnit& unit : units) {
    std::vector<SuslinScheme> per;
    for (const SetExpr& g : unit.family)
      per.push_back(compileConj({g}, u, unit.beta));
    subs.push_back(std::move(per));
  }

  struct BfsState {
    std::vector<int> pick;     // -1 until the level's branch is chosen
    std::vector<Seq> col;      // position inside the picked sub-domain
    std::vector<char> beyond;  // column padded past a sub-leaf
  };
  const auto settled = [&](const BfsState& st, std::size_t i) {
    return st.pick[i] >= 0 &&
           (st.beyond[i] ||
            subs[i][static_cast<std::size_t>(st.pick[i])].domain().isLeaf(
                st.col[i]));
  };

  std::set<Seq> nodes{Seq{}};
  std::map<Seq, AtomSet> values{{Seq{}, target}};
  std::map<Seq, BfsState> frontier;
  frontier[{}] = BfsState{std::vector<int>(units.size(), -1),
                          std::vector<Seq>(units.size()),
                          std::vector<char>(units.size(), 0)};

  for (std::size_t depth = 0; !frontier.empty(); ++depth) {
    std::map<Seq, BfsState> next;
    for (const auto& [node, st] : frontier) {
      bool done = depth >= depthGoal;
      for (std::size_t i = 0; done && i < units.size(); ++i)
        done = settled(st, i);
      if (done) continue;  // leaf: every conjunct pinned to a sub-leaf

      const std::size_t childDepth = depth + 1;
      const std::size_t arity = std::min(childDepth, depthGoal) + 1;
      std::vector<std::vector<int>> options(arity, std::vector<int>{0});
      for (std::size_t l = 0; l < arity; ++l) {
        const auto it = unitAt.find(l);
        if (it == unitAt.end()) continue;  // trivial level, forced 0
        const std::size_t i = it->second;
        if (l == childDepth) {
          // Diagonal coordinate: choose the unit's branch. An empty
          // family (an empty union) leaves the node childless.
          std::vector<int> picks;
          for (std::size_t j = 0; j < units[i].family.size(); ++j)
            picks.push_back(static_cast<int>(j));
          options[l] = std::move(picks);
        } else {
          assert(st.pick[i] >= 0);
          if (!settled(st, i))
            options[l] =
                subs[i][static_cast<std::size_t>(st.pick[i])].domain()
                    .childEntries(st.col[i]);
        }
      }
      bool blocked = false;
      for (const auto& opt : options)
        if (opt.empty()) blocked = true;
      if (blocked) continue;

      std::vector<std::size_t> idx(arity, 0);
      while (true) {
        Seq combo;
        for (std::size_t l = 0; l < arity; ++l)
          combo.push_back(options[l][idx[l]]);
        BfsState child = st;
        for (std::size_t l = 0; l < arity; ++l) {
          const auto it = unitAt.find(l);
          if (it == unitAt.end()) continue;
          const std::size_t i = it->second;
          if (l == childDepth) {
            child.pick[i] = combo[l];
            child.col[i] = {};
            child.beyond[i] = 0;
          } else if (settled(st, i)) {
            child.beyond[i] = 1;
          } else {
            child.col[i] = concat(st.col[i], combo[l]);
          }
        }
        AtomSet value = target;
        for (std::size_t i = 0; i < units.size(); ++i)
          if (child.pick[i] >= 0)
            value = setInter(
                value, subs[i][static_cast<std::size_t>(child.pick[i])]
                           .values()
                           .at(child.col[i]));
        const Seq childNode =
            concat(node, PairCoder::toEntry(PairCoder::piK(combo)));
        nodes.insert(childNode);
        values[childNode] = std::move(value);
        next[childNode] = std::move(child);

        std::size_t l = 0;
        while (l < arity && ++idx[l] == options[l].size()) {
          idx[l] = 0;
          ++l;
        }
        if (l == arity) break;
      }
    }
    if (nodes.size() > compileNodeBudget)
      throw Error("compiled scheme grew past the node budget");
    frontier = std::move(next);
  }
  return SuslinScheme(u, FiniteTree::fromNodes(nodes), std::move(values));
}

inline SuslinScheme compileConj(const std::vector<SetExpr>& conj,
                                const Universe& u, const Ordinal& alpha) {
  if (alpha.isZero()) {
    AtomSet target = u.all();
    for (const SetExpr& e : conj) {
      assert(exprClass(e) == 0);
      target = setInter(target, evalExpr(e, u));
    }
    return SuslinScheme::constant(u, std::move(target));
  }
  return alpha.isOdd() ? compileOdd(conj, u, alpha)
                       : compileEven(conj, u, alpha);
}

}  // namespace detail

// Compile a set expression into a Suslin scheme whose rank-alpha
// membership set equals the expression's value. The expression's
// alternation class must fit the rank and unions must fan out within the
// width bound; the root value is always the expression's value and the
// kernel of the compiled scheme recovers it as well.
inline SuslinScheme compileRegular(const SetExpr& e, const Universe& u,
                                   const Ordinal& alpha, int width) {
  if (width < 1) throw PreconditionError("width must be positive");
  const SetExpr norm = normalizeExpr(e);
  const std::uint64_t cls = exprClass(norm);
  if (alpha < Ordinal(cls))
    throw PreconditionError("expression of alternation class " +
                            std::to_string(cls) + " does not fit rank " +
                            toString(alpha));
  detail::checkUnionFanouts(norm, width);
  return detail::compileConj({norm}, u, alpha);
}

// Zip two schemes over one universe into a single scheme: each entry
// pairs one step of each factor, padding with 0 once a factor is pinned
// to a leaf, and each value is the intersection of the factor values. The
// result refines both inputs entrywise under the pair projections.
inline SuslinScheme pairRefine(const SuslinScheme& c, const SuslinScheme& r) {
  if (c.universe().atoms != r.universe().atoms)
    throw PreconditionError("pairRefine needs schemes over one universe");
  struct PairState {
    Seq left, right;
    char leftBeyond = 0, rightBeyond = 0;
  };
  const auto leftDone = [&](const PairState& st) {
    return st.leftBeyond != 0 || c.domain().isLeaf(st.left);
  };
  const auto rightDone = [&](const PairState& st) {
    return st.rightBeyond != 0 || r.domain().isLeaf(st.right);
  };

  std::set<Seq> nodes{Seq{}};
  std::map<Seq, AtomSet> values{
      {Seq{}, setInter(c.values().at({}), r.values().at({}))}};
  std::map<Seq, PairState> frontier{{Seq{}, PairState{}}};
  while (!frontier.empty()) {
    std::map<Seq, PairState> next;
    for (const auto& [node, st] : frontier) {
      const bool doneL = leftDone(st);
      const bool doneR = rightDone(st);
      if (doneL && doneR) continue;  // leaf: both factors pinned
      const std::vector<int> pad{0};
      const std::vector<int> ls =
          doneL ? pad : c.domain().childEntries(st.left);
      const std::vector<int> rs =
          doneR ? pad : r.domain().childEntries(st.right);
      for (int a : ls)
        for (int b : rs) {
          PairState child = st;
          if (doneL)
            child.leftBeyond = 1;
          else
            child.left = concat(st.left, a);
          if (doneR)
            child.rightBeyond = 1;
          else
            child.right = concat(st.right, b);
          const Seq childNode = concat(node, PairCoder::pair(a, b));
          nodes.insert(childNode);
          values[childNode] = setInter(c.values().at(child.left),
                                       r.values().at(child.right));
          next[childNode] = child;
        }
    }
    frontier = std::move(next);
  }
  return SuslinScheme(c.universe(), FiniteTree::fromNodes(nodes),
                      std::move(values));
}

}  // namespace dst
