#include <catch2/catch_amalgamated.hpp>

#include <random>
#include <set>

#include "dst/ordinal.hpp"
#include "dst/seq.hpp"
#include "dst/tree_expr.hpp"

using dst::clTr;
using dst::FiniteTree;
using dst::Ordinal;
using dst::Seq;
using dst::TreeExpr;
using dst::TreeFamily;

namespace {

// Direct membership recursion for canonical trees, used as an oracle for
// the symbolic implementation.
bool canonicalMember(const Ordinal& alpha, const Seq& s, std::size_t from = 0) {
  if (from == s.size()) return true;
  if (alpha.isZero()) return false;
  if (alpha.isSuccessor())
    return canonicalMember(alpha.predecessor(), s, from + 1);
  return canonicalMember(
      dst::limitEnumeration(alpha, static_cast<std::uint64_t>(s[from])), s,
      from + 1);
}

std::vector<Seq> gridSeqs(std::size_t depth, int width) {
  std::vector<Seq> out{Seq{}};
  std::size_t start = 0;
  for (std::size_t d = 0; d < depth; ++d) {
    std::size_t end = out.size();
    for (std::size_t i = start; i < end; ++i)
      for (int e = 0; e < width; ++e) out.push_back(dst::concat(out[i], e));
    start = end;
  }
  return out;
}

}  // namespace

TEST_CASE("prefix closure and finite tree basics") {
  FiniteTree t = clTr({{0, 1}, {2}});
  std::set<Seq> expect = {{}, {0}, {0, 1}, {2}};
  CHECK(t.nodes() == expect);
  CHECK(t.depth() == 2);
  CHECK(t.maxEntry() == 2);
  CHECK(t.childEntries({}) == std::vector<int>{0, 2});
  CHECK(t.childEntries({0}) == std::vector<int>{1});
  CHECK(t.isLeaf({0, 1}));
  CHECK(!t.isLeaf({0}));

  CHECK_THROWS_AS(FiniteTree::fromNodes({{0, 1}}), dst::PreconditionError);
  CHECK(FiniteTree::fromNodes({{}, {0}, {0, 1}}).size() == 3);

  FiniteTree sub = t.subtreeAt({0});
  std::set<Seq> expectSub = {{}, {1}};
  CHECK(sub.nodes() == expectSub);
  CHECK(t.subtreeAt({5}).empty());

  CHECK(t.truncate(1, 10).nodes() == std::set<Seq>{{}, {0}, {2}});
  CHECK(t.truncate(2, 1).nodes() == std::set<Seq>{{}, {0}});
}

TEST_CASE("sequence helpers") {
  CHECK(dst::isPrefixOf({}, {1, 2}));
  CHECK(dst::isPrefixOf({1}, {1, 2}));
  CHECK(!dst::isPrefixOf({2}, {1, 2}));
  CHECK(dst::isProperPrefixOf({1}, {1, 2}));
  CHECK(!dst::isProperPrefixOf({1, 2}, {1, 2}));
  CHECK(dst::comparable({1}, {1, 2}));
  CHECK(!dst::comparable({1, 3}, {1, 2}));
  CHECK(dst::concat(Seq{1}, Seq{2, 3}) == Seq{1, 2, 3});
  CHECK(dst::suffixAfter({1}, {1, 2, 3}) == Seq{2, 3});
  CHECK(dst::seqToString({}) == "()");
  CHECK(dst::seqToString({0, 3, 1}) == "(0,3,1)");
  CHECK(dst::gridTree(2, 2).size() == 7);
}

TEST_CASE("tree expression normalization") {
  const TreeExpr pt = TreeExpr::point();
  CHECK(pt.kind() == TreeExpr::Kind::Point);
  CHECK(TreeExpr::explicitTree(FiniteTree::single()).kind() ==
        TreeExpr::Kind::Point);
  CHECK(TreeExpr::emptyTree().isEmpty());
  CHECK(!pt.isEmpty());

  // Grafting onto finite trees collapses to explicit form.
  TreeExpr g = TreeExpr::graft({1, 0}, pt);
  CHECK(g.kind() == TreeExpr::Kind::Explicit);
  CHECK(g.asFiniteTree() == clTr({{1, 0}}));

  TreeExpr g2 = TreeExpr::graft({2}, TreeExpr::explicitTree(clTr({{0, 1}})));
  CHECK(g2.asFiniteTree() == clTr({{2, 0, 1}}));

  // Nested grafts merge their heads.
  TreeExpr inf = TreeExpr::joinOmega(TreeFamily::constant(pt));
  TreeExpr nested = TreeExpr::graft({1}, TreeExpr::graft({2}, inf));
  REQUIRE(nested.kind() == TreeExpr::Kind::Graft);
  CHECK(std::get<dst::GraftNode>(nested.node().v).head == Seq{1, 2});

  // Degenerate joins collapse.
  CHECK(TreeExpr::joinFinite({}).kind() == TreeExpr::Kind::Point);
  CHECK(TreeExpr::joinOmega(TreeFamily::constant(TreeExpr::emptyTree()))
            .kind() == TreeExpr::Kind::Point);

  // A finite join of finite branches is explicit.
  TreeExpr jf = TreeExpr::joinFinite(
      {{Seq{0}, pt}, {Seq{2, 1}, TreeExpr::emptyTree()}});
  CHECK(jf.kind() == TreeExpr::Kind::Explicit);
  CHECK(jf.asFiniteTree() == clTr({{0}, {2, 1}}));

  // A single branch is a graft.
  TreeExpr single = TreeExpr::joinFinite({{Seq{3}, inf}});
  CHECK(single.kind() == TreeExpr::Kind::Graft);

  CHECK_THROWS_AS(TreeExpr::joinFinite({{Seq{}, pt}}), dst::PreconditionError);
  CHECK_THROWS_AS(TreeExpr::joinFinite({{Seq{1}, inf}, {Seq{1, 2}, inf}}),
                  dst::PreconditionError);

  // Prefix members equal to the tail are dropped.
  TreeExpr ptc = TreeExpr::joinOmega(
      TreeFamily::prefixThenConstant({inf, pt, pt}, pt));
  REQUIRE(ptc.kind() == TreeExpr::Kind::JoinOmega);
  const auto& fam = std::get<dst::JoinOmegaNode>(ptc.node().v).family;
  CHECK(fam.kind == TreeFamily::Kind::PrefixThenConstant);
  CHECK(fam.prefix.size() == 1);

  // An all-prefix family with empty tail is a finite join.
  TreeExpr fin = TreeExpr::joinOmega(
      TreeFamily::prefixThenConstant({pt, inf}, TreeExpr::emptyTree()));
  CHECK(fin.kind() == TreeExpr::Kind::JoinFinite);
}

TEST_CASE("membership and truncation agree on explicit trees") {
  FiniteTree f = clTr({{0, 1, 2}, {0, 3}, {4}});
  TreeExpr t = TreeExpr::explicitTree(f);
  for (const Seq& s : gridSeqs(3, 5))
    REQUIRE(t.member(s) == f.contains(s));
  CHECK(t.truncate(3, 5) == f);
  CHECK(t.truncate(1, 5) == f.truncate(1, 5));
}

TEST_CASE("full cone membership and truncation") {
  TreeExpr c = TreeExpr::fullCone();
  CHECK(c.member({}));
  CHECK(c.member({9, 9, 9}));
  CHECK(!c.wellFounded());
  CHECK(!c.depthBound());
  CHECK(c.truncate(2, 2) == dst::gridTree(2, 2));
  CHECK(c.subtreeAt({5, 1}).kind() == TreeExpr::Kind::FullCone);
}

TEST_CASE("canonical trees match the direct membership recursion") {
  std::vector<Ordinal> alphas = {
      Ordinal(0),
      Ordinal(1),
      Ordinal(3),
      Ordinal::omega(),
      Ordinal::omega() + Ordinal(1),
      Ordinal::omegaTimes(Ordinal(2)),
      Ordinal::omegaPower(2),
      Ordinal::omegaPower(2) + Ordinal::omega() + Ordinal(3),
  };
  for (const Ordinal& alpha : alphas) {
    TreeExpr t = dst::canonicalTree(alpha);
    for (const Seq& s : gridSeqs(3, 4))
      REQUIRE(t.member(s) == canonicalMember(alpha, s));
    REQUIRE(t.wellFounded());
  }
}

TEST_CASE("canonical tree truncations have the expected shape") {
  CHECK(dst::canonicalTree(Ordinal(0)).kind() == TreeExpr::Kind::Point);
  CHECK(dst::canonicalTree(Ordinal(1)).truncate(2, 3).nodes() ==
        std::set<Seq>{{}, {0}, {1}, {2}});
  // In T_w the subtree under (n) is T_n.
  TreeExpr tw = dst::canonicalTree(Ordinal::omega());
  for (int n = 0; n < 4; ++n) {
    TreeExpr sub = tw.subtreeAt({n});
    TreeExpr direct = dst::canonicalTree(Ordinal(static_cast<std::uint64_t>(n)));
    REQUIRE(sub.truncate(3, 3) == direct.truncate(3, 3));
  }
  CHECK(!tw.depthBound());
  CHECK(*dst::canonicalTree(Ordinal(2)).depthBound() == 2);
}

TEST_CASE("subtrees of joins select family members") {
  TreeExpr pt = TreeExpr::point();
  TreeExpr t1 = TreeExpr::joinOmega(TreeFamily::constant(pt));
  TreeExpr t2 = TreeExpr::joinOmega(TreeFamily::constant(t1));
  CHECK(t2.subtreeAt({7}).structuralEquals(t1));
  CHECK(t2.subtreeAt({7, 3}).structuralEquals(pt));
  CHECK_THROWS_AS(pt.subtreeAt({0}), dst::PreconditionError);

  TreeExpr jf = TreeExpr::joinFinite({{Seq{0, 5}, t1}, {Seq{1}, t2}});
  CHECK(jf.subtreeAt({0}).member({5, 0}));
  CHECK(jf.subtreeAt({0, 5}).structuralEquals(t1));
  CHECK(jf.subtreeAt({1}).structuralEquals(t2));
}

TEST_CASE("children profiles") {
  TreeExpr pt = TreeExpr::point();
  CHECK(pt.childrenAtRoot().kind == dst::ChildrenProfile::Kind::Finite);
  CHECK(pt.childrenAtRoot().entries.empty());

  TreeExpr ex = TreeExpr::explicitTree(clTr({{1}, {4}}));
  CHECK(ex.childrenAtRoot().entries == std::vector<int>{1, 4});

  TreeExpr inf = TreeExpr::joinOmega(TreeFamily::constant(pt));
  auto prof = inf.childrenAtRoot();
  CHECK(prof.kind == dst::ChildrenProfile::Kind::Cofinite);
  CHECK(prof.entries.empty());

  TreeExpr ptc = TreeExpr::joinOmega(TreeFamily::prefixThenConstant(
      {TreeExpr::emptyTree(), pt, TreeExpr::emptyTree()}, inf));
  auto prof2 = ptc.childrenAtRoot();
  CHECK(prof2.kind == dst::ChildrenProfile::Kind::Cofinite);
  CHECK(prof2.entries == std::vector<int>{0, 2});
  CHECK(ptc.childEntriesBelow(4) == std::vector<int>{1, 3});

  // Stage-2 derivative of T_w: exactly the positions of 0 and 1 are missing.
  TreeExpr staged = dst::derivedCanonicalTree(Ordinal::omega(), Ordinal(2));
  auto prof3 = staged.childrenAtRoot();
  CHECK(prof3.kind == dst::ChildrenProfile::Kind::Cofinite);
  CHECK(prof3.entries == std::vector<int>{0, 1});
}

TEST_CASE("derived canonical trees in closed form") {
  const Ordinal w = Ordinal::omega();
  CHECK(dst::derivedCanonicalTree(Ordinal(3), Ordinal())
            .structuralEquals(dst::canonicalTree(Ordinal(3))));
  CHECK(dst::derivedCanonicalTree(Ordinal(2), Ordinal(3)).isEmpty());
  CHECK(dst::derivedCanonicalTree(Ordinal(3), Ordinal(3)).denotesPoint());
  CHECK(dst::derivedCanonicalTree(w, w).denotesPoint());
  // D^1(T_2) = T_1 in shape: the constant family drops one level.
  TreeExpr d = dst::derivedCanonicalTree(Ordinal(2), Ordinal(1));
  TreeExpr t1 = dst::canonicalTree(Ordinal(1));
  CHECK(d.truncate(3, 3) == t1.truncate(3, 3));
}

TEST_CASE("canonical variant trees follow the parity rule") {
  const Ordinal w = Ordinal::omega();
  CHECK(dst::canonicalTreeC(Ordinal(0)).denotesPoint());
  // Odd rank: one branch through the chosen entry into the halved tree.
  TreeExpr c1 = dst::canonicalTreeC(Ordinal(1));
  CHECK(c1.kind() == TreeExpr::Kind::Explicit);
  CHECK(c1.asFiniteTree() == clTr({{1}}));
  TreeExpr c2 = dst::canonicalTreeC(Ordinal(2));
  CHECK(c2.truncate(2, 2) == dst::canonicalTree(Ordinal(1)).truncate(2, 2));
  TreeExpr c3 = dst::canonicalTreeC(Ordinal(3));
  REQUIRE(c3.kind() == TreeExpr::Kind::Graft);
  CHECK(c3.subtreeAt({1}).truncate(2, 2) ==
        dst::canonicalTree(Ordinal(1)).truncate(2, 2));
  CHECK(dst::canonicalTreeC(w).structuralEquals(dst::canonicalTree(w)));
  CHECK(dst::canonicalTreeC(w + Ordinal(1)).kind() == TreeExpr::Kind::Graft);
}

TEST_CASE("structural equality distinguishes constructions") {
  TreeExpr a = dst::canonicalTree(Ordinal::omega());
  TreeExpr b = dst::canonicalTree(Ordinal::omega());
  TreeExpr c = dst::canonicalTree(Ordinal::omega(), true);
  CHECK(a.structuralEquals(b));
  CHECK(!a.structuralEquals(c));
  CHECK(!a.structuralEquals(TreeExpr::point()));
}

TEST_CASE("well-foundedness of composite trees") {
  TreeExpr cone = TreeExpr::fullCone();
  TreeExpr mixed = TreeExpr::joinFinite(
      {{Seq{0}, dst::canonicalTree(Ordinal(2))}, {Seq{1}, cone}});
  CHECK(!mixed.wellFounded());
  TreeExpr g = TreeExpr::graft({4, 4}, cone);
  CHECK(!g.wellFounded());
  CHECK(dst::canonicalTree(Ordinal::omegaPower(2)).wellFounded());
  TreeExpr ptc = TreeExpr::joinOmega(TreeFamily::prefixThenConstant(
      {cone}, TreeExpr::point()));
  CHECK(!ptc.wellFounded());
}
