#pragma once

// JSON serialization for every value the command line moves around.
// Expression-like types use tagged unions keyed by "kind"; ordinals
// travel as their text form; maps keyed by sequences become sorted
// arrays of pairs so output is deterministic and diffable. Loaders
// throw ParseError on schema violations and let the constructed types
// run their own validation.

#include <json.hpp>

#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "dst/broom.hpp"
#include "dst/derive.hpp"
#include "dst/error.hpp"
#include "dst/fintop.hpp"
#include "dst/leaf_scheme.hpp"
#include "dst/ordinal.hpp"
#include "dst/seq.hpp"
#include "dst/suslin.hpp"
#include "dst/tree_expr.hpp"

namespace dst {

using Json = nlohmann::json;

namespace detail {

inline const Json& jsonField(const Json& j, const char* key) {
  if (!j.is_object() || !j.contains(key))
    throw ParseError("expected an object with field \"" + std::string(key) +
                     "\", got " + j.dump());
  return j.at(key);
}

inline std::string jsonKind(const Json& j) {
  const Json& k = jsonField(j, "kind");
  if (!k.is_string()) throw ParseError("field \"kind\" must be a string");
  return k.get<std::string>();
}

inline int jsonInt(const Json& j, const char* what) {
  if (!j.is_number_integer())
    throw ParseError(std::string(what) + " must be an integer, got " + j.dump());
  return j.get<int>();
}

}  // namespace detail

inline Json toJson(const Ordinal& a) { return toString(a); }

inline Ordinal ordinalFromJson(const Json& j) {
  if (!j.is_string())
    throw ParseError("ordinals are encoded as strings, got " + j.dump());
  return parseOrdinal(j.get<std::string>());
}

inline Json toJson(const Seq& s) { return Json(s); }

inline Seq seqFromJson(const Json& j) {
  if (!j.is_array())
    throw ParseError("sequences are encoded as arrays, got " + j.dump());
  Seq out;
  for (const Json& e : j) out.push_back(detail::jsonInt(e, "sequence entry"));
  return out;
}

inline Json toJson(const AtomSet& s) { return Json(s); }

inline AtomSet atomSetFromJson(const Json& j) {
  if (!j.is_array())
    throw ParseError("atom sets are encoded as arrays, got " + j.dump());
  AtomSet out;
  for (const Json& e : j) {
    if (!e.is_string()) throw ParseError("atoms must be strings");
    out.insert(e.get<std::string>());
  }
  return out;
}

// Finite trees list their nodes; loading closes the list under
// prefixes, so hand-written files may mention only the leaves.
inline Json toJson(const FiniteTree& t) {
  Json out = Json::array();
  for (const Seq& s : t.nodes()) out.push_back(toJson(s));
  return out;
}

inline FiniteTree finiteTreeFromJson(const Json& j) {
  if (!j.is_array())
    throw ParseError("finite trees are encoded as node arrays, got " + j.dump());
  std::set<Seq> nodes;
  for (const Json& e : j) nodes.insert(seqFromJson(e));
  return FiniteTree::closureOf(nodes);
}

inline Json toJson(const TreeExpr& t);

inline Json toJson(const TreeFamily& f) {
  Json out;
  switch (f.kind) {
    case TreeFamily::Kind::Constant:
      out["kind"] = "constant";
      out["tail"] = toJson(f.tail);
      return out;
    case TreeFamily::Kind::PrefixThenConstant: {
      out["kind"] = "prefixThenConstant";
      Json prefix = Json::array();
      for (const TreeExpr& t : f.prefix) prefix.push_back(toJson(t));
      out["prefix"] = std::move(prefix);
      out["tail"] = toJson(f.tail);
      return out;
    }
    case TreeFamily::Kind::CanonicalSeq:
      out["kind"] = "canonicalSeq";
      out["lambda"] = toJson(f.lambda);
      out["stage"] = toJson(f.stage);
      if (f.altEnum) out["altEnum"] = true;
      return out;
  }
  throw Error("unreachable family kind");
}

inline Json toJson(const TreeExpr& t) {
  struct V {
    Json operator()(const PointNode&) const { return {{"kind", "point"}}; }
    Json operator()(const FullConeNode&) const { return {{"kind", "fullCone"}}; }
    Json operator()(const ExplicitNode& n) const {
      return {{"kind", "explicit"}, {"nodes", toJson(n.tree)}};
    }
    Json operator()(const GraftNode& n) const {
      return {{"kind", "graft"}, {"head", toJson(n.head)}, {"sub", toJson(n.sub)}};
    }
    Json operator()(const JoinFiniteNode& n) const {
      Json branches = Json::array();
      for (const auto& [head, sub] : n.branches)
        branches.push_back({{"head", toJson(head)}, {"sub", toJson(sub)}});
      return {{"kind", "joinFinite"}, {"branches", std::move(branches)}};
    }
    Json operator()(const JoinOmegaNode& n) const {
      return {{"kind", "joinOmega"}, {"family", toJson(n.family)}};
    }
  };
  return std::visit(V{}, t.node().v);
}

inline TreeExpr treeExprFromJson(const Json& j);

inline TreeFamily treeFamilyFromJson(const Json& j) {
  const std::string kind = detail::jsonKind(j);
  if (kind == "constant")
    return TreeFamily::constant(treeExprFromJson(detail::jsonField(j, "tail")));
  if (kind == "prefixThenConstant") {
    const Json& p = detail::jsonField(j, "prefix");
    if (!p.is_array()) throw ParseError("family prefix must be an array");
    std::vector<TreeExpr> prefix;
    for (const Json& e : p) prefix.push_back(treeExprFromJson(e));
    return TreeFamily::prefixThenConstant(
        std::move(prefix), treeExprFromJson(detail::jsonField(j, "tail")));
  }
  if (kind == "canonicalSeq") {
    const Ordinal stage = j.contains("stage")
                              ? ordinalFromJson(j.at("stage"))
                              : Ordinal();
    const bool alt = j.contains("altEnum") && j.at("altEnum").is_boolean() &&
                     j.at("altEnum").get<bool>();
    return TreeFamily::canonicalSeq(
        ordinalFromJson(detail::jsonField(j, "lambda")), stage, alt);
  }
  throw ParseError("unknown tree family kind \"" + kind + "\"");
}

inline TreeExpr treeExprFromJson(const Json& j) {
  const std::string kind = detail::jsonKind(j);
  if (kind == "point") return TreeExpr::point();
  if (kind == "fullCone") return TreeExpr::fullCone();
  if (kind == "explicit")
    return TreeExpr::explicitTree(
        finiteTreeFromJson(detail::jsonField(j, "nodes")));
  if (kind == "graft")
    return TreeExpr::graft(seqFromJson(detail::jsonField(j, "head")),
                           treeExprFromJson(detail::jsonField(j, "sub")));
  if (kind == "joinFinite") {
    const Json& bs = detail::jsonField(j, "branches");
    if (!bs.is_array()) throw ParseError("join branches must be an array");
    std::vector<std::pair<Seq, TreeExpr>> branches;
    for (const Json& b : bs)
      branches.emplace_back(seqFromJson(detail::jsonField(b, "head")),
                            treeExprFromJson(detail::jsonField(b, "sub")));
    return TreeExpr::joinFinite(std::move(branches));
  }
  if (kind == "joinOmega")
    return TreeExpr::joinOmega(
        treeFamilyFromJson(detail::jsonField(j, "family")));
  throw ParseError("unknown tree expression kind \"" + kind + "\"");
}

inline Json toJson(const Rank& r) {
  Json out;
  out["rank"] = toString(r);
  return out;
}

inline Json toJson(const SetExpr& e) {
  switch (e.kind) {
    case SetExpr::Kind::Base:
      return {{"kind", "base"}, {"set", toJson(e.base)}};
    case SetExpr::Kind::Union:
    case SetExpr::Kind::Inter: {
      Json items = Json::array();
      for (const SetExpr& item : e.items) items.push_back(toJson(item));
      return {{"kind", e.kind == SetExpr::Kind::Union ? "union" : "inter"},
              {"items", std::move(items)}};
    }
  }
  throw Error("unreachable expression kind");
}

inline SetExpr setExprFromJson(const Json& j) {
  const std::string kind = detail::jsonKind(j);
  if (kind == "base")
    return SetExpr::makeBase(atomSetFromJson(detail::jsonField(j, "set")));
  if (kind == "union" || kind == "inter") {
    const Json& is = detail::jsonField(j, "items");
    if (!is.is_array()) throw ParseError("expression items must be an array");
    std::vector<SetExpr> items;
    for (const Json& e : is) items.push_back(setExprFromJson(e));
    return kind == "union" ? SetExpr::makeUnion(std::move(items))
                           : SetExpr::makeInter(std::move(items));
  }
  throw ParseError("unknown set expression kind \"" + kind + "\"");
}

inline Json toJson(const LeafScheme& h) {
  Json assign = Json::array();
  for (const auto& [leaf, value] : h.assign())
    assign.push_back({{"leaf", toJson(leaf)}, {"set", toJson(value)}});
  return {{"tree", toJson(h.tree())}, {"assign", std::move(assign)}};
}

inline LeafScheme leafSchemeFromJson(const Json& j) {
  const Json& as = detail::jsonField(j, "assign");
  if (!as.is_array()) throw ParseError("scheme assignment must be an array");
  std::map<Seq, AtomSet> assign;
  for (const Json& e : as)
    assign.emplace(seqFromJson(detail::jsonField(e, "leaf")),
                   atomSetFromJson(detail::jsonField(e, "set")));
  return LeafScheme(finiteTreeFromJson(detail::jsonField(j, "tree")),
                    std::move(assign));
}

inline Json toJson(const Universe& u) { return Json(u.atoms); }

inline Universe universeFromJson(const Json& j) {
  if (!j.is_array()) throw ParseError("universes are encoded as atom arrays");
  std::vector<Atom> atoms;
  for (const Json& e : j) {
    if (!e.is_string()) throw ParseError("atoms must be strings");
    atoms.push_back(e.get<std::string>());
  }
  return Universe(std::move(atoms));
}

inline Json toJson(const SuslinScheme& c) {
  Json values = Json::array();
  for (const auto& [node, value] : c.values())
    values.push_back({{"node", toJson(node)}, {"set", toJson(value)}});
  return {{"universe", toJson(c.universe())},
          {"domain", toJson(c.domain())},
          {"values", std::move(values)}};
}

inline SuslinScheme suslinSchemeFromJson(const Json& j) {
  const Json& vs = detail::jsonField(j, "values");
  if (!vs.is_array()) throw ParseError("scheme values must be an array");
  std::map<Seq, AtomSet> values;
  for (const Json& e : vs)
    values.emplace(seqFromJson(detail::jsonField(e, "node")),
                   atomSetFromJson(detail::jsonField(e, "set")));
  return SuslinScheme(universeFromJson(detail::jsonField(j, "universe")),
                      finiteTreeFromJson(detail::jsonField(j, "domain")),
                      std::move(values));
}

inline Json toJson(const BroomExpr& b);

inline Json toJson(const BroomFamily& f) {
  auto branchArray = [](const std::vector<std::pair<Seq, BroomExpr>>& bs) {
    Json out = Json::array();
    for (const auto& [head, sub] : bs)
      out.push_back({{"head", toJson(head)}, {"sub", toJson(sub)}});
    return out;
  };
  switch (f.kind) {
    case BroomFamily::Kind::FiniteList:
      return {{"kind", "finiteList"}, {"branches", branchArray(f.branches)}};
    case BroomFamily::Kind::UniformTail:
      return {{"kind", "uniformTail"},
              {"prefix", branchArray(f.branches)},
              {"tailBase", f.tailBase},
              {"tailWord", toJson(f.tailWord)},
              {"tailSub", toJson(f.tailSub)}};
    case BroomFamily::Kind::RankLadder:
      return {{"kind", "rankLadder"},
              {"target", toJson(f.target)},
              {"leaf", toJson(f.ladderLeaf)}};
  }
  throw Error("unreachable family kind");
}

inline BroomExpr broomExprFromJson(const Json& j);

inline BroomFamily broomFamilyFromJson(const Json& j) {
  auto branchesFrom = [](const Json& a) {
    if (!a.is_array()) throw ParseError("fork branches must be an array");
    std::vector<std::pair<Seq, BroomExpr>> out;
    for (const Json& b : a)
      out.emplace_back(seqFromJson(detail::jsonField(b, "head")),
                       broomExprFromJson(detail::jsonField(b, "sub")));
    return out;
  };
  const std::string kind = detail::jsonKind(j);
  if (kind == "finiteList")
    return BroomFamily::finiteList(branchesFrom(detail::jsonField(j, "branches")));
  if (kind == "uniformTail")
    return BroomFamily::uniformTail(
        j.contains("prefix") ? branchesFrom(j.at("prefix"))
                             : std::vector<std::pair<Seq, BroomExpr>>{},
        detail::jsonInt(detail::jsonField(j, "tailBase"), "tailBase"),
        seqFromJson(detail::jsonField(j, "tailWord")),
        broomExprFromJson(detail::jsonField(j, "tailSub")));
  if (kind == "rankLadder")
    return BroomFamily::rankLadder(
        ordinalFromJson(detail::jsonField(j, "target")),
        j.contains("leaf") ? broomExprFromJson(j.at("leaf")) : BroomExpr());
  throw ParseError("unknown broom family kind \"" + kind + "\"");
}

inline Json toJson(const BroomExpr& b) {
  struct V {
    Json operator()(const TrivialNode&) const { return {{"kind", "trivial"}}; }
    Json operator()(const HandleNode& n) const {
      return {{"kind", "handle"}, {"head", toJson(n.head)}, {"sub", toJson(n.sub)}};
    }
    Json operator()(const ForkNode& n) const {
      return {{"kind", "fork"}, {"family", toJson(n.family)}};
    }
  };
  return std::visit(V{}, b.node().v);
}

inline BroomExpr broomExprFromJson(const Json& j) {
  const std::string kind = detail::jsonKind(j);
  if (kind == "trivial") return BroomExpr::trivial();
  if (kind == "handle")
    return BroomExpr::handle(seqFromJson(detail::jsonField(j, "head")),
                             broomExprFromJson(detail::jsonField(j, "sub")));
  if (kind == "fork")
    return BroomExpr::fork(broomFamilyFromJson(detail::jsonField(j, "family")));
  throw ParseError("unknown broom kind \"" + kind + "\"");
}

inline Json toJson(const InfBroomExpr& a) {
  return {{"base", toJson(a.base())},
          {"headShift", a.headShift()},
          {"tailWord", toJson(a.tailWord())}};
}

inline InfBroomExpr infBroomExprFromJson(const Json& j) {
  ExtendStrategy s;
  s.headShift = detail::jsonInt(detail::jsonField(j, "headShift"), "headShift");
  s.tailWord = seqFromJson(detail::jsonField(j, "tailWord"));
  return InfBroomExpr(broomExprFromJson(detail::jsonField(j, "base")), s);
}

inline Json toJson(PointSet s, int points) {
  Json out = Json::array();
  for (int p = 0; p < points; ++p)
    if (s >> p & 1u) out.push_back(p);
  return out;
}

inline PointSet pointSetFromJson(const Json& j, int points) {
  if (!j.is_array())
    throw ParseError("point sets are encoded as arrays, got " + j.dump());
  PointSet out = 0;
  for (const Json& e : j) {
    const int p = detail::jsonInt(e, "point");
    if (p < 0 || p >= points)
      throw ParseError("point " + std::to_string(p) + " is outside 0.." +
                       std::to_string(points - 1));
    out |= PointSet{1} << p;
  }
  return out;
}

// Spaces are written with their open families; files may instead give
// the specialization preorder as per-point reachability rows.
inline Json toJson(const FinSpace& x) {
  Json opens = Json::array();
  for (PointSet u : x.opens()) opens.push_back(toJson(u, x.pointCount()));
  return {{"points", x.pointCount()}, {"opens", std::move(opens)}};
}

inline FinSpace finSpaceFromJson(const Json& j) {
  const int n = detail::jsonInt(detail::jsonField(j, "points"), "points");
  if (n < 0 || n > FinSpace::maxPoints)
    throw ParseError("point count " + std::to_string(n) + " is outside 0.." +
                     std::to_string(FinSpace::maxPoints));
  if (j.contains("opens")) {
    const Json& os = j.at("opens");
    if (!os.is_array()) throw ParseError("opens must be an array of point sets");
    std::vector<PointSet> opens;
    for (const Json& u : os) opens.push_back(pointSetFromJson(u, n));
    return FinSpace::fromOpens(n, std::move(opens));
  }
  if (j.contains("specialization")) {
    const Json& rows = j.at("specialization");
    if (!rows.is_array() || rows.size() != static_cast<std::size_t>(n))
      throw ParseError("specialization needs one row per point");
    std::vector<PointSet> r;
    for (const Json& row : rows) r.push_back(pointSetFromJson(row, n));
    return FinSpace::fromSpecialization(n, r);
  }
  throw ParseError("a space needs either \"opens\" or \"specialization\"");
}

inline Json toJson(const ZoomSpace& z) {
  Json blocks = Json::array();
  for (std::size_t p = 0; p < z.blockStart.size(); ++p)
    blocks.push_back(
        {{"base", static_cast<int>(p)},
         {"points", toJson(z.blockMask(static_cast<int>(p)),
                           z.space.pointCount())}});
  return {{"space", toJson(z.space)}, {"blocks", std::move(blocks)}};
}

inline Json toJson(const AxiomsAReport& r, int points) {
  Json cover = Json::array();
  for (PointSet u : r.witnessCover) cover.push_back(toJson(u, points));
  return {{"pass", r.pass},
          {"membersClopen", r.membersClopen},
          {"notClopen", Json(r.notClopen)},
          {"intersectionsCompact", r.intersectionsCompact},
          {"leftoverCompact", r.leftoverCompact},
          {"compactnessNote", r.compactnessNote},
          {"leftover", toJson(r.leftover, points)},
          {"escape", r.escape},
          {"properEscape", r.properEscape},
          {"escapeSize", r.escapeSize},
          {"witnessCover", std::move(cover)}};
}

inline Json toJson(const FaVerdict& v) {
  Json points = Json::array();
  for (const FaPointVerdict& p : v.points) {
    Json e = {{"point", p.point},
              {"pass", p.pass},
              {"derivedEmpty", p.derivedEmpty}};
    if (p.lengthBound) e["lengthBound"] = *p.lengthBound;
    points.push_back(std::move(e));
  }
  Json out = {{"overall", v.overall}, {"points", std::move(points)}};
  if (v.uniformLengthBound) out["uniformLengthBound"] = *v.uniformLengthBound;
  return out;
}

inline Json toJson(const RankLemmaReport& r) {
  Json survivors = Json::array();
  for (const Seq& s : r.survivors) survivors.push_back(toJson(s));
  return {{"pass", r.pass},
          {"alpha", toJson(r.alpha)},
          {"prime", toJson(r.prime)},
          {"derivedFinite", r.derivedFinite},
          {"derivedSmall", r.derivedSmall},
          {"survivors", std::move(survivors)}};
}

inline Json toJson(const AdVerdict& v) {
  Json out = {{"pass", v.pass}};
  if (!v.pass) {
    out["first"] = v.first;
    out["second"] = v.second;
    out["reason"] = v.reason;
  }
  return out;
}

inline Json toJson(const Amalgam& a) {
  const int n = a.space.pointCount();
  Json pieces = Json::array();
  for (PointSet p : a.pieces) pieces.push_back(toJson(p, n));
  Json basis = Json::array();
  for (PointSet b : a.basis) basis.push_back(toJson(b, n));
  return {{"space", toJson(a.space)},
          {"pointIds", Json(a.pointIds)},
          {"base", toJson(a.baseMask, n)},
          {"pieces", std::move(pieces)},
          {"basis", std::move(basis)}};
}

}  // namespace dst
