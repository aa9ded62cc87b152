#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <map>
#include <random>
#include <set>
#include <vector>

#include "dst/broom.hpp"
#include "dst/fintop.hpp"
#include "dst/ordinal.hpp"
#include "dst/seq.hpp"

namespace {

using dst::FinSpace;
using dst::PointSet;

// Closes a family under pairwise union and intersection by repeated
// passes, the definition the generated topology has to match.
std::set<PointSet> bruteTopology(int n, const std::vector<PointSet>& basis) {
  std::set<PointSet> fam(basis.begin(), basis.end());
  fam.insert(0);
  fam.insert(n == 0 ? 0 : (PointSet{1} << n) - 1);
  for (bool grew = true; grew;) {
    grew = false;
    std::vector<PointSet> sets(fam.begin(), fam.end());
    for (PointSet a : sets)
      for (PointSet b : sets) {
        grew = fam.insert(a | b).second || grew;
        grew = fam.insert(a & b).second || grew;
      }
  }
  return fam;
}

// The three-point space 0 -> 1 -> 2 whose opens are the upper tails.
FinSpace chainSpace() { return FinSpace::fromOpens(3, {0u, 4u, 6u, 7u}); }

// Two points with one open singleton: opens are {}, {1}, {0,1}.
FinSpace sierpinski() { return FinSpace::fromOpens(2, {0u, 2u, 3u}); }

dst::BroomExpr randomFiniteBroom(std::mt19937_64& rng, int depth) {
  using dst::BroomExpr;
  std::uniform_int_distribution<int> shape(0, depth <= 0 ? 1 : 3);
  std::uniform_int_distribution<int> entry(0, 3);
  std::uniform_int_distribution<int> len(1, 2);
  const int pick = shape(rng);
  if (pick == 0) return BroomExpr::trivial();
  if (pick == 1) {
    dst::Seq head;
    for (int i = 0; i < len(rng); ++i) head.push_back(entry(rng));
    return BroomExpr::handle(head, depth <= 0 ? BroomExpr::trivial()
                                              : randomFiniteBroom(rng, depth - 1));
  }
  std::uniform_int_distribution<int> count(1, 3);
  std::vector<std::pair<dst::Seq, BroomExpr>> branches;
  std::set<int> used;
  const int m = count(rng);
  for (int i = 0; i < m; ++i) {
    const int first = entry(rng) + 4 * i;  // distinct first entries
    if (!used.insert(first).second) continue;
    dst::Seq word{first};
    if (len(rng) == 2) word.push_back(entry(rng));
    branches.emplace_back(word, randomFiniteBroom(rng, depth - 1));
  }
  return BroomExpr::fork(dst::BroomFamily::finiteList(branches));
}

}  // namespace

TEST_CASE("open families validate as topologies") {
  const FinSpace s = sierpinski();
  CHECK(s.pointCount() == 2);
  CHECK(s.opens() == std::vector<PointSet>{0u, 2u, 3u});
  CHECK(s.isOpen(2u));
  CHECK_FALSE(s.isOpen(1u));
  CHECK(s.isClosed(1u));
  CHECK_FALSE(s.isClopen(2u));
  CHECK(s.minOpen(0) == 3u);
  CHECK(s.minOpen(1) == 2u);
  CHECK(s.interior(1u) == 0u);
  CHECK(s.closure(2u) == 3u);
  CHECK(s.isolatedPoints() == 2u);
  CHECK(s.isDense(2u));
  CHECK_FALSE(s.isDense(1u));

  CHECK_THROWS_AS(FinSpace::fromOpens(2, {2u, 3u}), dst::PreconditionError);
  CHECK_THROWS_AS(FinSpace::fromOpens(2, {0u, 2u}), dst::PreconditionError);
  // union of {0} and {1} missing
  CHECK_THROWS_AS(FinSpace::fromOpens(3, {0u, 1u, 2u, 7u}),
                  dst::PreconditionError);
  // intersection of {0,1} and {1,2} missing
  CHECK_THROWS_AS(FinSpace::fromOpens(3, {0u, 3u, 6u, 7u}),
                  dst::PreconditionError);
  CHECK_THROWS_AS(FinSpace::fromOpens(2, {0u, 4u, 3u}), dst::PreconditionError);

  CHECK(FinSpace::discrete(3).opens().size() == 8);
  CHECK(FinSpace::indiscrete(3).opens().size() == 2);
  CHECK(FinSpace::discrete(0) == FinSpace());

  const FinSpace chain = chainSpace();
  CHECK(chain.minOpen(0) == 7u);
  CHECK(chain.closure(4u) == 7u);
  CHECK(chain.subspaceOpens(5u) == std::vector<PointSet>{0u, 4u, 5u});
  std::vector<int> old;
  const FinSpace sub = chain.subspace(5u, &old);
  CHECK(old == std::vector<int>{0, 2});
  CHECK(sub == sierpinski());
}

TEST_CASE("specialization rows round-trip and are validated") {
  const FinSpace chain = chainSpace();
  const auto rows = chain.specialization();
  CHECK(rows == std::vector<PointSet>{7u, 6u, 4u});
  CHECK(FinSpace::fromSpecialization(3, rows) == chain);
  CHECK_THROWS_AS(FinSpace::fromSpecialization(2, {2u, 2u}),
                  dst::PreconditionError);  // first row not reflexive
  CHECK_THROWS_AS(FinSpace::fromSpecialization(3, {3u, 6u, 4u}),
                  dst::PreconditionError);  // 0 reaches 1 but not 2
}

TEST_CASE("generated topologies match the brute-force closure") {
  std::mt19937_64 rng(4401);
  for (int round = 0; round < 120; ++round) {
    std::uniform_int_distribution<int> size(0, 8);
    const int n = size(rng);
    const PointSet full = n == 0 ? 0 : (PointSet{1} << n) - 1;
    std::uniform_int_distribution<int> count(0, 5);
    std::vector<PointSet> basis;
    for (int i = count(rng); i > 0; --i)
      basis.push_back(static_cast<PointSet>(rng()) & full);
    const FinSpace space = FinSpace::fromBasis(n, basis);
    const auto brute = bruteTopology(n, basis);
    CHECK(space.opens() == std::vector<PointSet>(brute.begin(), brute.end()));
    CHECK(FinSpace::fromOpens(n, space.opens()) == space);
  }
}

TEST_CASE("the space generators enumerate and sample correctly") {
  CHECK(dst::allSpaces(0).size() == 1);
  CHECK(dst::allSpaces(1).size() == 1);
  CHECK(dst::allSpaces(2).size() == 4);
  CHECK(dst::allSpaces(3).size() == 29);
  CHECK(dst::allSpaces(4).size() == 355);
  CHECK(dst::allSpaces(5).size() == 6942);
  CHECK_THROWS_AS(dst::allSpaces(6), dst::PreconditionError);

  const auto threes = dst::allSpaces(3);
  std::set<std::vector<PointSet>> distinct;
  for (const FinSpace& s : threes) distinct.insert(s.opens());
  CHECK(distinct.size() == threes.size());

  std::mt19937_64 rng(77);
  for (int round = 0; round < 60; ++round) {
    const FinSpace s = dst::randomSpace(rng, 1 + round % 8);
    CHECK(FinSpace::fromOpens(s.pointCount(), s.opens()) == s);
  }
}

TEST_CASE("zooming a space through its isolated points") {
  // Both points replaced by singletons: nothing changes.
  const FinSpace twoDiscrete = FinSpace::discrete(2);
  const dst::ZoomSpace same = dst::zoomSpace(
      twoDiscrete, {{0, FinSpace::discrete(1)}, {1, FinSpace::discrete(1)}});
  CHECK(same.space == twoDiscrete);
  CHECK(same.toBase == std::vector<int>{0, 1});

  // The isolated point of the two-point space with one open singleton,
  // replaced by two discrete points: both copies stay open, and the
  // non-isolated point keeps the whole space as its only neighborhood.
  const dst::ZoomSpace z = dst::zoomSpace(sierpinski(), {{1, FinSpace::discrete(2)}});
  CHECK(z.space.pointCount() == 3);
  CHECK(z.space.opens() == std::vector<PointSet>{0u, 2u, 4u, 6u, 7u});
  CHECK(z.space.minOpen(0) == 7u);
  CHECK(z.blockMask(1) == 6u);
  CHECK(z.toBase == std::vector<int>{0, 1, 1});

  CHECK_THROWS_AS(dst::zoomSpace(sierpinski(), {{0, FinSpace::discrete(2)}}),
                  dst::PreconditionError);
  CHECK_THROWS_AS(dst::zoomSpace(twoDiscrete, {{0, FinSpace()}}),
                  dst::PreconditionError);
}

TEST_CASE("zoom basic sets respect the set algebra and selectors") {
  std::mt19937_64 rng(90210);
  for (int round = 0; round < 40; ++round) {
    const FinSpace y = dst::randomSpace(rng, 4);
    std::map<int, FinSpace> xs;
    std::uniform_int_distribution<int> size(1, 2);
    for (int p = 0; p < 4; ++p)
      if (y.isIsolated(p)) {
        const int k = size(rng);
        xs.emplace(p, rng() % 2 ? FinSpace::discrete(k) : FinSpace::indiscrete(k));
      }
    const dst::ZoomSpace z = dst::zoomSpace(y, xs);
    for (PointSet u : y.opens())
      for (PointSet v : y.opens()) {
        CHECK(z.expand(u & v) == (z.expand(u) & z.expand(v)));
        CHECK(z.expand(u | v) == (z.expand(u) | z.expand(v)));
      }
    // Every choice of one point per replaced block gives back the base
    // space as a subspace, through the identity on block order.
    for (int code = 0; code < 16; ++code) {
      PointSet picks = 0;
      bool valid = true;
      for (int p = 0; p < 4; ++p) {
        const int c = code >> p & 1;
        if (c >= z.blockLen[static_cast<std::size_t>(p)]) {
          valid = false;
          break;
        }
        picks |= PointSet{1} << (z.blockStart[static_cast<std::size_t>(p)] + c);
      }
      if (!valid) continue;
      CHECK(z.space.subspace(picks) == y);
    }
  }
}

TEST_CASE("the largest open set with a given trace") {
  const FinSpace s = sierpinski();
  // A dense subspace traces the whole space onto itself.
  CHECK(dst::wOperator(s, 2u, 2u) == 3u);
  // The empty trace collects the opens missing the subspace.
  CHECK(dst::wOperator(s, 2u, 0u) == 0u);
  CHECK(dst::wOperator(s, 1u, 0u) == 2u);
  CHECK(dst::wOperator(FinSpace::discrete(3), 3u, 1u) == 5u);

  const FinSpace chain = chainSpace();
  CHECK_THROWS_AS(dst::wOperator(chain, 5u, 1u), dst::PreconditionError);
  CHECK_THROWS_AS(dst::wOperator(chain, 1u, 2u), dst::PreconditionError);

  for (int n = 0; n <= 4; ++n)
    for (const FinSpace& q : dst::allSpaces(n))
      for (PointSet p = 0; p <= q.all(); ++p) {
        dst::wOperatorLawsCheck(q, p);
        if (q.all() == 0) break;
      }
  std::mt19937_64 rng(1123);
  for (int round = 0; round < 150; ++round) {
    const FinSpace q = dst::randomSpace(rng, 5 + round % 2);
    dst::wOperatorLawsCheck(q, static_cast<PointSet>(rng()) & q.all());
  }
}

TEST_CASE("the clopen family axioms report their finite-scale verdicts") {
  // Disjoint clopen members leaving one point over: everything passes,
  // though no proper subfamily can absorb the rest.
  const auto disjoint = dst::checkAxiomsA(FinSpace::discrete(4), {1u, 2u, 4u});
  CHECK(disjoint.pass);
  CHECK(disjoint.membersClopen);
  CHECK(disjoint.intersectionsCompact);
  CHECK(disjoint.leftoverCompact);
  CHECK_FALSE(disjoint.compactnessNote.empty());
  CHECK(disjoint.leftover == 8u);
  CHECK(disjoint.escape);
  CHECK_FALSE(disjoint.properEscape);
  CHECK(disjoint.escapeSize == 3);
  CHECK(disjoint.witnessCover == std::vector<PointSet>{8u});

  // A member that is not clopen.
  const auto bad = dst::checkAxiomsA(sierpinski(), {2u});
  CHECK_FALSE(bad.pass);
  CHECK_FALSE(bad.membersClopen);
  CHECK(bad.notClopen == std::vector<std::size_t>{0});

  // Five points, two separate members: the least-neighborhood cover of
  // the leftover is reported as the witness that only the full family
  // absorbs itself.
  const auto wide = dst::checkAxiomsA(FinSpace::discrete(5), {3u, 12u});
  CHECK(wide.pass);
  CHECK_FALSE(wide.properEscape);
  CHECK(wide.escapeSize == 2);
  CHECK(wide.witnessCover == std::vector<PointSet>{16u});

  // Overlapping members can escape properly: keeping the pair absorbs
  // both singletons without help from the cover.
  const auto overlap = dst::checkAxiomsA(FinSpace::discrete(3), {3u, 1u, 2u});
  CHECK(overlap.pass);
  CHECK(overlap.properEscape);
  CHECK(overlap.escapeSize == 1);

  // Nothing left over: no cover constrains anything.
  const auto covered = dst::checkAxiomsA(FinSpace::discrete(2), {1u, 2u});
  CHECK(covered.pass);
  CHECK(covered.properEscape);
  CHECK(covered.escapeSize == 0);
  CHECK(covered.witnessCover.empty());
}

TEST_CASE("amalgamation over trivial extensions returns the base") {
  for (const FinSpace& x : dst::allSpaces(3)) {
    // The quasi-components, each the intersection of the clopen sets
    // around a point, always form a clopen family covering the space.
    std::vector<PointSet> family;
    for (int p = 0; p < 3; ++p) {
      PointSet comp = x.all();
      for (PointSet u : x.opens())
        if (x.isClopen(u) && (u >> p & 1u)) comp &= u;
      if (std::find(family.begin(), family.end(), comp) == family.end())
        family.push_back(comp);
    }
    const dst::Amalgam am = dst::amalgamate(x, family, {});
    CHECK(am.space == x);
    CHECK(am.baseMask == x.all());
    for (std::size_t i = 0; i < family.size(); ++i)
      CHECK(am.pieces[i] == family[i]);
  }
}

TEST_CASE("amalgamation attaches a dense point to one member") {
  const FinSpace x = FinSpace::discrete(3);
  // Extend {1,2} by one point whose neighborhoods are cofinite there.
  dst::SpaceExtension ext;
  ext.space = FinSpace::fromOpens(3, {0u, 1u, 2u, 3u, 7u});
  ext.labels = {1, 2, 3};
  const dst::Amalgam am = dst::amalgamate(x, {1u, 6u}, {{1, ext}});
  CHECK(am.space.pointCount() == 4);
  CHECK(am.pointIds == std::vector<int>{0, 1, 2, 3});
  CHECK(am.space.opens().size() == 10);
  CHECK(am.space.minOpen(3) == 14u);
  CHECK(am.pieces == std::vector<PointSet>{1u, 14u});
  CHECK(am.space.isClopen(14u));
  CHECK(am.space.subspace(am.baseMask) == x);
}

TEST_CASE("amalgamation glues overlapping members through shared closed sets") {
  const FinSpace x = FinSpace::discrete(3);
  const std::vector<PointSet> family{3u, 6u};
  // The new point of the first extension avoids the shared point 1, so
  // the intersection {1} stays closed there.
  dst::SpaceExtension ext;
  ext.space = FinSpace::fromOpens(3, {0u, 1u, 2u, 3u, 5u, 7u});
  ext.labels = {0, 1, 9};
  const dst::Amalgam am = dst::amalgamate(x, family, {{0, ext}});
  CHECK(am.space.pointCount() == 4);
  CHECK(am.pointIds == std::vector<int>{0, 1, 2, 9});
  CHECK(am.space.opens().size() == 12);
  CHECK(am.space.minOpen(3) == 9u);
  CHECK(am.pieces == std::vector<PointSet>{11u, 6u});
  CHECK(am.space.subspace(am.baseMask) == x);
}

TEST_CASE("amalgamation rejects malformed extensions with the offender") {
  const FinSpace x = FinSpace::discrete(3);

  // Family member that is not clopen.
  CHECK_THROWS_AS(dst::amalgamate(sierpinski(), {2u, 1u}, {}),
                  dst::PreconditionError);

  // Wrong base set under the labels.
  dst::SpaceExtension wrongBase;
  wrongBase.space = FinSpace::discrete(1);
  wrongBase.labels = {1};
  CHECK_THROWS_WITH(dst::amalgamate(x, {1u, 6u}, {{0, wrongBase}}),
                    Catch::Matchers::ContainsSubstring("restricts to"));

  // New point isolated, so the member is not dense.
  dst::SpaceExtension sparse;
  sparse.space = FinSpace::discrete(2);
  sparse.labels = {0, 9};
  CHECK_THROWS_WITH(dst::amalgamate(x, {1u, 6u}, {{0, sparse}}),
                    Catch::Matchers::ContainsSubstring("not dense"));

  // Extension changing the subspace topology of its member.
  dst::SpaceExtension coarser;
  coarser.space = FinSpace::fromOpens(3, {0u, 3u, 7u});
  coarser.labels = {1, 2, 9};
  CHECK_THROWS_WITH(dst::amalgamate(x, {1u, 6u}, {{1, coarser}}),
                    Catch::Matchers::ContainsSubstring("changes the topology"));

  // Two extensions sharing a new point their members do not share.
  dst::SpaceExtension left;
  left.space = FinSpace::fromOpens(2, {0u, 1u, 3u});
  left.labels = {0, 9};
  dst::SpaceExtension right;
  right.space = FinSpace::fromOpens(3, {0u, 1u, 2u, 3u, 7u});
  right.labels = {1, 2, 9};
  CHECK_THROWS_WITH(dst::amalgamate(x, {1u, 6u}, {{0, left}, {1, right}}),
                    Catch::Matchers::ContainsSubstring("overlap outside"));

  // Overlapping members whose shared part is not closed in one
  // extension: the dense new point touches the shared point 1.
  dst::SpaceExtension touching;
  touching.space = FinSpace::fromOpens(3, {0u, 1u, 2u, 3u, 7u});
  touching.labels = {0, 1, 9};
  CHECK_THROWS_WITH(dst::amalgamate(x, {3u, 6u}, {{0, touching}}),
                    Catch::Matchers::ContainsSubstring("not closed in extension"));
}

TEST_CASE("amalgamation postconditions hold on randomized instances") {
  std::mt19937_64 rng(5150);
  int built = 0;
  for (int round = 0; round < 200; ++round) {
    const FinSpace x = dst::randomSpace(rng, 4);
    // Clopen least-neighborhood hulls make a family; skip rounds where
    // none besides the whole space shows up.
    std::vector<PointSet> family;
    for (int p = 0; p < 4; ++p) {
      PointSet comp = x.all();
      for (PointSet u : x.opens())
        if (x.isClopen(u) && (u >> p & 1u)) comp &= u;
      if (comp != x.all() &&
          std::find(family.begin(), family.end(), comp) == family.end())
        family.push_back(comp);
    }
    if (family.empty()) continue;
    std::map<std::size_t, dst::SpaceExtension> exts;
    // Extend one disjoint-from-the-rest member by a cofinite point.
    for (std::size_t i = 0; i < family.size(); ++i) {
      bool touches = false;
      for (std::size_t j = 0; j < family.size(); ++j)
        if (j != i && (family[i] & family[j])) touches = true;
      if (touches) continue;
      std::vector<int> pts;
      const FinSpace member = x.subspace(family[i], &pts);
      const int k = member.pointCount();
      // The only neighborhood of the new point is the whole extension.
      std::vector<PointSet> grown = member.opens();
      grown.push_back(member.all() | (PointSet{1} << k));
      dst::SpaceExtension e;
      e.space = FinSpace::fromOpens(k + 1, grown);
      e.labels = pts;
      e.labels.push_back(10 + static_cast<int>(i));
      exts.emplace(i, e);
      break;
    }
    const dst::Amalgam am = dst::amalgamate(x, family, exts);
    ++built;
    // Base and pieces keep their topologies; the internal postcondition
    // asserts cover basis intersection-closure and clopen pieces.
    CHECK(am.space.subspaceOpens(am.baseMask) == x.opens());
    if (exts.empty()) CHECK(am.space == x);
  }
  CHECK(built > 50);
}

TEST_CASE("finite spaces provide checked closure operators") {
  const auto cl = dst::closureOperatorOf(sierpinski(), {"a", "b"});
  CHECK(cl(dst::AtomSet{}) == dst::AtomSet{});
  CHECK(cl({"a"}) == dst::AtomSet{"a"});
  CHECK(cl({"b"}) == dst::AtomSet{"a", "b"});
  CHECK_THROWS_AS(cl({"c"}), dst::PreconditionError);
  CHECK_THROWS_AS(dst::closureOperatorOf(sierpinski(), {"a"}),
                  dst::PreconditionError);
  CHECK_THROWS_AS(dst::closureOperatorOf(sierpinski(), {"a", "a"}),
                  dst::PreconditionError);

  // The operator slots into the scheme-tree machinery, and closing the
  // sets changes what it sees: the closed point touches the open one.
  const dst::Universe u({"a", "b"});
  const auto scheme = dst::SuslinScheme::constant(u, {"b"});
  CHECK(dst::sTree(scheme, cl, "a").structuralEquals(dst::TreeExpr::fullCone()));
  CHECK(dst::sTree(scheme, dst::identityClosure(), "a")
            .structuralEquals(dst::TreeExpr::emptyTree()));
}

TEST_CASE("handle cuts happen at the first prefix of small rank") {
  using dst::BroomExpr;
  using dst::BroomFamily;
  using dst::Ordinal;
  using dst::Seq;

  const BroomExpr flat = BroomExpr::fork(BroomFamily::finiteList(
      {{Seq{0}, BroomExpr::trivial()}, {Seq{5, 1}, BroomExpr::trivial()}}));
  CHECK(dst::gammaHandles(dst::extendBroom(flat), Ordinal(2)) ==
        std::set<Seq>{{0}, {5}});
  CHECK(dst::gammaHandles(dst::extendBroom(flat), Ordinal(3)) ==
        std::set<Seq>{Seq{}});

  // A handle above the fork moves every cut below its word.
  const BroomExpr lifted = BroomExpr::handle(Seq{2, 3}, flat);
  CHECK(dst::gammaHandles(dst::extendBroom(lifted), Ordinal(2)) ==
        std::set<Seq>{{2, 3, 0}, {2, 3, 5}});

  // Branches of unequal rank cut at different depths.
  const BroomExpr inner = BroomExpr::fork(BroomFamily::finiteList(
      {{Seq{2}, BroomExpr::trivial()}, {Seq{3}, BroomExpr::trivial()}}));
  const BroomExpr mixed = BroomExpr::fork(BroomFamily::finiteList(
      {{Seq{0}, BroomExpr::trivial()}, {Seq{1}, inner}}));
  CHECK(dst::classifyBroom(mixed) == Ordinal(4));
  CHECK(dst::gammaHandles(dst::extendBroom(mixed), Ordinal(3)) ==
        std::set<Seq>{{0}, {1, 2}, {1, 3}});
  CHECK(dst::gammaHandles(dst::extendBroom(mixed), Ordinal(4)) ==
        std::set<Seq>{{0}, {1}});
  CHECK(dst::gammaHandles(dst::extendBroom(mixed), Ordinal(5)) ==
        std::set<Seq>{Seq{}});

  // The extension strategy never moves the cuts.
  CHECK(dst::gammaHandles(dst::extendBroom(mixed, {7, Seq{1, 1}}), Ordinal(3)) ==
        dst::gammaHandles(dst::extendBroom(mixed), Ordinal(3)));

  CHECK_THROWS_AS(dst::gammaHandles(dst::extendBroom(flat), Ordinal(1)),
                  dst::PreconditionError);
  // Uniform tails repeat one branch shape forever, so cutting inside
  // them never yields a finite handle set.
  CHECK_THROWS_AS(dst::gammaHandles(
                      dst::extendBroom(dst::witnessBroom(Ordinal(2))), Ordinal(2)),
                  dst::Error);
  CHECK_THROWS_AS(dst::gammaHandles(
                      dst::extendBroom(dst::witnessBroom(dst::Ordinal::omega())),
                      Ordinal(2)),
                  dst::Error);
  // Above the rank the whole broom is one cone, tails and all.
  CHECK(dst::gammaHandles(dst::extendBroom(dst::witnessBroom(Ordinal(2))),
                          Ordinal(4)) == std::set<Seq>{Seq{}});
}

TEST_CASE("handle cuts partition sampled members on random brooms") {
  std::mt19937_64 rng(31415);
  for (int round = 0; round < 80; ++round) {
    const dst::BroomExpr b = randomFiniteBroom(rng, 2);
    for (int g = 2; g <= 4; ++g) {
      const auto handles =
          dst::gammaHandles(dst::extendBroom(b), dst::Ordinal(g));
      CHECK(!handles.empty());
      for (const auto& x : handles)
        for (const auto& y : handles)
          CHECK((x == y || !dst::comparable(x, y)));
    }
  }
}
