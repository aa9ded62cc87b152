#include <catch2/catch_amalgamated.hpp>

#include <random>
#include <vector>

#include "dst/derive.hpp"
#include "dst/ordinal.hpp"
#include "dst/tree_expr.hpp"

using dst::DeriveKind;
using dst::FiniteTree;
using dst::Ordinal;
using dst::Rank;
using dst::Seq;
using dst::TreeExpr;
using dst::TreeFamily;

namespace {

const std::vector<DeriveKind> kAllKinds = {
    DeriveKind::Leaf, DeriveKind::Infinite, DeriveKind::IncomparableInfinite};

FiniteTree randomFiniteTree(std::mt19937_64& rng, int maxNodes) {
  std::set<Seq> seqs;
  std::uniform_int_distribution<int> len(0, 4), entry(0, 3);
  const int count = std::uniform_int_distribution<int>(1, maxNodes)(rng);
  for (int i = 0; i < count; ++i) {
    Seq s;
    const int l = len(rng);
    for (int j = 0; j < l; ++j) s.push_back(entry(rng));
    seqs.insert(s);
  }
  return dst::clTr(seqs);
}

// Random symbolic trees with small entries and shallow handles, so that a
// width-50 truncation faithfully reflects which subtrees are infinite.
TreeExpr randomTree(std::mt19937_64& rng, int depth) {
  std::uniform_int_distribution<int> pick(0, depth > 0 ? 5 : 1);
  std::uniform_int_distribution<int> entry(0, 3);
  switch (pick(rng)) {
    case 0:
      return TreeExpr::point();
    case 1:
      return TreeExpr::explicitTree(randomFiniteTree(rng, 8));
    case 2: {
      Seq head;
      const int l = std::uniform_int_distribution<int>(1, 2)(rng);
      for (int j = 0; j < l; ++j) head.push_back(entry(rng));
      return TreeExpr::graft(head, randomTree(rng, depth - 1));
    }
    case 3: {
      std::vector<std::pair<Seq, TreeExpr>> branches;
      std::set<int> used;
      const int count = std::uniform_int_distribution<int>(1, 3)(rng);
      for (int j = 0; j < count; ++j) {
        int e = entry(rng);
        if (!used.insert(e).second) continue;
        Seq head{e};
        if (std::uniform_int_distribution<int>(0, 1)(rng)) head.push_back(entry(rng));
        branches.emplace_back(head, randomTree(rng, depth - 1));
      }
      return TreeExpr::joinFinite(std::move(branches));
    }
    case 4:
      return TreeExpr::joinOmega(TreeFamily::constant(randomTree(rng, depth - 1)));
    default: {
      std::vector<TreeExpr> prefix;
      const int count = std::uniform_int_distribution<int>(0, 2)(rng);
      for (int j = 0; j < count; ++j) prefix.push_back(randomTree(rng, depth - 1));
      TreeExpr tail = randomTree(rng, depth - 1);
      return TreeExpr::joinOmega(
          TreeFamily::prefixThenConstant(std::move(prefix), tail));
    }
  }
}

bool sameTruncation(const TreeExpr& a, const TreeExpr& b, std::size_t d, int w) {
  return a.truncate(d, w) == b.truncate(d, w);
}

}  // namespace

TEST_CASE("rank of canonical trees equals the defining ordinal") {
  const Ordinal w = Ordinal::omega();
  std::vector<Ordinal> alphas = {
      Ordinal(0),  Ordinal(1),        Ordinal(2),
      Ordinal(5),  w,                 w + Ordinal(1),
      Ordinal::omegaTimes(Ordinal(2)), Ordinal::omegaPower(2),
      Ordinal::omegaPower(2) + w + Ordinal(3)};
  for (const Ordinal& alpha : alphas) {
    TreeExpr t = dst::canonicalTree(alpha);
    for (DeriveKind k : kAllKinds) {
      Rank r = dst::rank(k, t);
      REQUIRE(!r.emptyTree);
      REQUIRE(r.value == alpha);
    }
  }
}

TEST_CASE("rank basics and the empty marker") {
  CHECK(dst::rank(DeriveKind::Leaf, TreeExpr::point()) == Rank::of(Ordinal()));
  Rank e = dst::rank(DeriveKind::Leaf, TreeExpr::emptyTree());
  CHECK(e.emptyTree);
  CHECK(dst::toString(e) == "-1");
  CHECK(e < Rank::of(Ordinal()));
  CHECK(Rank::of(Ordinal()) < Rank::of(Ordinal::omega()));

  // Finite trees have incomparable-rank 0: one derivative step empties them.
  TreeExpr fin = TreeExpr::explicitTree(dst::clTr({{0, 1}, {0, 2}}));
  CHECK(dst::rank(DeriveKind::IncomparableInfinite, fin) ==
        Rank::of(Ordinal()));
  CHECK(dst::rank(DeriveKind::Infinite, fin) == Rank::of(Ordinal()));
  CHECK(dst::rank(DeriveKind::Leaf, fin) == Rank::of(Ordinal(2)));
}

TEST_CASE("leaf rank of finite trees equals the stripping oracle") {
  std::mt19937_64 rng(42);
  for (int trial = 0; trial < 300; ++trial) {
    FiniteTree f = randomFiniteTree(rng, 20);
    TreeExpr t = TreeExpr::explicitTree(f);
    const Ordinal r = dst::rank(DeriveKind::Leaf, t).value;
    REQUIRE(r == Ordinal(dst::detail::leafStripSteps(f)));
    REQUIRE(r == Ordinal(static_cast<std::uint64_t>(f.depth())));
  }
}

TEST_CASE("single derivative steps match the documented examples") {
  // Leaf derivative removes exactly the leaves.
  TreeExpr t = TreeExpr::explicitTree(dst::clTr({{0, 1}}));
  CHECK(dst::deriveL(t).asFiniteTree() == dst::clTr({{0}}));

  // Infinite derivative of any finite tree is empty.
  CHECK(dst::deriveI(t).isEmpty());
  CHECK(dst::deriveIie(t).isEmpty());
  CHECK(dst::deriveI(TreeExpr::point()).isEmpty());

  // Incomparable derivative of T_2 is T_1.
  TreeExpr t2 = dst::canonicalTree(Ordinal(2));
  TreeExpr d = dst::deriveIie(t2);
  CHECK(d.structuralEquals(dst::canonicalTree(Ordinal(1))));
}

TEST_CASE("iterated derivatives at and beyond the rank") {
  const Ordinal w = Ordinal::omega();
  CHECK(dst::iterate(DeriveKind::Leaf, dst::canonicalTree(Ordinal(3)), Ordinal(3))
            .denotesPoint());
  CHECK(dst::iterate(DeriveKind::Leaf, dst::canonicalTree(Ordinal(3)), Ordinal(4))
            .isEmpty());
  TreeExpr tw = dst::canonicalTree(w);
  CHECK(dst::iterate(DeriveKind::IncomparableInfinite, tw, w).denotesPoint());
  CHECK(dst::iterate(DeriveKind::IncomparableInfinite, tw, w + Ordinal(1))
            .isEmpty());
  for (DeriveKind k : kAllKinds)
    CHECK(dst::iterate(k, TreeExpr::emptyTree(), Ordinal(5)).isEmpty());

  // Rank is the largest stage with a nonempty iterate.
  std::vector<Ordinal> alphas = {Ordinal(2), w, Ordinal::omegaTimes(Ordinal(2))};
  for (const Ordinal& alpha : alphas) {
    TreeExpr t = dst::canonicalTree(alpha);
    for (DeriveKind k : kAllKinds) {
      CHECK(!dst::iterate(k, t, alpha).isEmpty());
      CHECK(dst::iterate(k, t, alpha + 1).isEmpty());
    }
  }
}

TEST_CASE("derivative results are subtrees and iteration is antitone") {
  std::mt19937_64 rng(2024);
  for (int trial = 0; trial < 60; ++trial) {
    TreeExpr t = randomTree(rng, 3);
    for (DeriveKind k : kAllKinds) {
      TreeExpr d1 = dst::iterate(k, t, Ordinal(1));
      TreeExpr d2 = dst::iterate(k, t, Ordinal(2));
      FiniteTree g0 = t.truncate(4, 6);
      FiniteTree g1 = d1.truncate(4, 6);
      FiniteTree g2 = d2.truncate(4, 6);
      for (const Seq& s : g1.nodes()) REQUIRE(g0.contains(s));
      for (const Seq& s : g2.nodes()) REQUIRE(g1.contains(s));
    }
  }
}

TEST_CASE("iteration composes along ordinal addition") {
  std::mt19937_64 rng(77);
  std::vector<Ordinal> steps = {Ordinal(1), Ordinal(2), Ordinal::omega()};
  for (int trial = 0; trial < 40; ++trial) {
    TreeExpr t = randomTree(rng, 3);
    for (DeriveKind k : kAllKinds)
      for (const Ordinal& a : steps)
        for (const Ordinal& b : steps) {
          TreeExpr two = dst::iterate(k, dst::iterate(k, t, a), b);
          TreeExpr one = dst::iterate(k, t, a + b);
          REQUIRE(sameTruncation(two, one, 4, 6));
        }
  }
}

TEST_CASE("canonical trees also compose under mixed-kind iteration") {
  // On canonical trees all three derivatives agree node by node, so stages
  // may be accumulated across kinds.
  const Ordinal w = Ordinal::omega();
  TreeExpr t = dst::canonicalTree(Ordinal::omegaTimes(Ordinal(2)));
  TreeExpr a = dst::iterate(DeriveKind::Leaf, t, Ordinal(2));
  TreeExpr b = dst::iterate(DeriveKind::IncomparableInfinite, a, w);
  TreeExpr direct = dst::iterate(DeriveKind::Infinite, t, Ordinal(2) + w);
  CHECK(sameTruncation(b, direct, 3, 5));
  CHECK(dst::rank(DeriveKind::Leaf, b).value ==
        Ordinal::leftSubtract(w, Ordinal::omegaTimes(Ordinal(2))));
}

TEST_CASE("derivative membership is confirmed by truncation evidence") {
  // The random trees use entries < 4 and short handles, so a width-50
  // truncation of depth 6 sees enough of every infinite subtree: an
  // infinite subtree always stems from an omega-join or full cone within
  // a few levels, contributing at least 45 children there.
  std::mt19937_64 rng(13);
  int checkedIn = 0, checkedOut = 0;
  for (int trial = 0; trial < 50; ++trial) {
    TreeExpr t = randomTree(rng, 3);
    FiniteTree probe = t.truncate(2, 4);
    TreeExpr dl = dst::deriveL(t);
    TreeExpr di = dst::deriveI(t);
    for (const Seq& s : probe.nodes()) {
      const FiniteTree below = t.subtreeAt(s).truncate(6, 50);
      if (dl.member(s)) {
        REQUIRE(below.size() > 1);
        ++checkedIn;
      } else {
        REQUIRE(below.size() <= 1);
        ++checkedOut;
      }
      if (di.member(s)) {
        REQUIRE(below.size() >= 45);
      } else {
        REQUIRE(below.size() < 45);
      }
    }
  }
  CHECK(checkedIn > 100);
  CHECK(checkedOut > 20);
}

TEST_CASE("infinite and incomparable derivatives coincide on these trees") {
  std::mt19937_64 rng(31337);
  for (int trial = 0; trial < 80; ++trial) {
    TreeExpr t = randomTree(rng, 3);
    REQUIRE(sameTruncation(dst::deriveI(t), dst::deriveIie(t), 4, 8));
    if (t.wellFounded())
      REQUIRE(dst::rank(DeriveKind::Infinite, t) ==
              dst::rank(DeriveKind::IncomparableInfinite, t));
  }
}

TEST_CASE("canonical family members obey the stage tower law") {
  const Ordinal w = Ordinal::omega();
  struct Probe {
    Ordinal lambda;
    Ordinal stage;
  };
  std::vector<Probe> probes = {
      {w, Ordinal(0)},
      {w, Ordinal(3)},
      {Ordinal::omegaTimes(Ordinal(2)), w},
      {Ordinal::omegaPower(2), Ordinal(1)},
      {Ordinal::omegaPower(2), w + Ordinal(2)},
  };
  for (const auto& p : probes) {
    TreeFamily fam = TreeFamily::canonicalSeq(p.lambda, p.stage);
    for (std::uint64_t n = 0; n < 25; ++n) {
      const Ordinal beta = fam.memberPosition(n);
      TreeExpr m = fam.member(n);
      if (beta < p.stage) {
        REQUIRE(m.isEmpty());
        continue;
      }
      const Ordinal expect = Ordinal::leftSubtract(p.stage, beta);
      for (DeriveKind k : kAllKinds)
        REQUIRE(dst::rank(k, m) == Rank::of(expect));
    }
  }
}

TEST_CASE("rank does not depend on the limit enumeration used") {
  std::vector<Ordinal> lambdas = {Ordinal::omega(),
                                  Ordinal::omegaTimes(Ordinal(2)),
                                  Ordinal::omegaPower(2)};
  for (const Ordinal& lambda : lambdas) {
    TreeExpr standard = dst::canonicalTree(lambda);
    TreeExpr alt = dst::canonicalTree(lambda, true);
    CHECK(!standard.structuralEquals(alt));
    for (DeriveKind k : kAllKinds)
      REQUIRE(dst::rank(k, standard) == dst::rank(k, alt));
  }
}

TEST_CASE("ill-founded trees are rejected by rank but not by iterate") {
  TreeExpr cone = TreeExpr::fullCone();
  TreeExpr g = TreeExpr::graft({0}, cone);
  for (DeriveKind k : kAllKinds) {
    CHECK_THROWS_AS(dst::rank(k, cone), dst::IllFoundedError);
    CHECK_THROWS_AS(dst::rank(k, g), dst::IllFoundedError);
    CHECK(dst::iterate(k, cone, Ordinal::omega())
              .structuralEquals(cone));
    CHECK(sameTruncation(dst::iterate(k, g, Ordinal::omega() + Ordinal(2)), g,
                         3, 4));
  }
  // A well-founded part next to a cone is still filtered out by rank.
  TreeExpr mixed = TreeExpr::joinFinite(
      {{Seq{0}, dst::canonicalTree(Ordinal(2))}, {Seq{1}, cone}});
  TreeExpr it = dst::iterate(DeriveKind::Leaf, mixed, Ordinal(5));
  CHECK(!it.member({0}));
  CHECK(it.member({1, 7, 7}));
}

TEST_CASE("parsing and printing derivative kinds") {
  CHECK(dst::parseDeriveKind("l") == DeriveKind::Leaf);
  CHECK(dst::parseDeriveKind("i") == DeriveKind::Infinite);
  CHECK(dst::parseDeriveKind("iie") == DeriveKind::IncomparableInfinite);
  CHECK(dst::toString(DeriveKind::Leaf) == "l");
  CHECK_THROWS_AS(dst::parseDeriveKind("x"), dst::ParseError);
}
