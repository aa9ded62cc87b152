// Command-line entry point: every library operation behind a subcommand,
// JSON in and out, DOT rendering for trees, and named property suites
// under `verify`. Exit codes: 0 success, 2 malformed input, 3 violated
// precondition, 4 failed property suite.

#include <cstdlib>
#include <cstring>
#include <fstream>
#include <iostream>
#include <map>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "dst/dot.hpp"
#include "dst/json_io.hpp"
#include "dst/verify.hpp"

namespace {

using dst::Json;

// Output plumbing shared by every subcommand. Depth and width bound tree
// truncations; their defaults come from DST_MAX_DEPTH and DST_MAX_WIDTH.
struct Options {
  std::string format = "json";
  std::string outPath;
  int depth = 4;
  int width = 4;
};

int envBound(const char* name, int fallback) {
  const char* v = std::getenv(name);
  if (v == nullptr) return fallback;
  char* end = nullptr;
  const long out = std::strtol(v, &end, 10);
  if (end == v || *end != '\0' || out < 0 || out > 1000)
    throw dst::ParseError(std::string(name) +
                          " must be a small nonnegative integer, got \"" + v +
                          "\"");
  return static_cast<int>(out);
}

Json readJsonFile(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw dst::ParseError("cannot open " + path);
  try {
    return Json::parse(in);
  } catch (const Json::parse_error& e) {
    throw dst::ParseError("cannot parse " + path + ": " + e.what());
  }
}

Json inlineJson(const std::string& text, const char* what) {
  try {
    return Json::parse(text);
  } catch (const Json::parse_error& e) {
    throw dst::ParseError(std::string(what) + " is not valid JSON: " +
                          e.what());
  }
}

// Tree files hold either a lazy tree expression or a bare node array,
// which loads as an explicit finite tree.
dst::TreeExpr treeExprFromFile(const std::string& path) {
  const Json j = readJsonFile(path);
  if (j.is_array()) return dst::TreeExpr::explicitTree(dst::finiteTreeFromJson(j));
  return dst::treeExprFromJson(j);
}

dst::DeriveKind kindFromString(const std::string& s) {
  if (s == "l") return dst::DeriveKind::Leaf;
  if (s == "i") return dst::DeriveKind::Infinite;
  if (s == "iie") return dst::DeriveKind::IncomparableInfinite;
  throw dst::ParseError("derivative kind must be l, i or iie, got \"" + s +
                        "\"");
}

void emit(const Options& opt, const std::string& text) {
  if (opt.outPath.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(opt.outPath);
  if (!out) throw dst::Error("cannot write " + opt.outPath);
  out << text;
}

void emitJson(const Options& opt, const Json& j) {
  if (opt.format != "json")
    throw dst::ParseError("this command only emits --format json");
  emit(opt, j.dump(2) + "\n");
}

void emitTree(const Options& opt, const dst::TreeExpr& t) {
  if (opt.format == "dot") {
    emit(opt, dst::toDot(t, static_cast<std::size_t>(opt.depth), opt.width));
    return;
  }
  emit(opt, dst::toJson(t).dump(2) + "\n");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "toolkit for ranked well-founded trees, Suslin schemes, broom sets "
      "and finite topological spaces"};
  app.require_subcommand(1);
  int exitCode = 0;

  Options opt;
  try {
    opt.depth = envBound("DST_MAX_DEPTH", 4);
    opt.width = envBound("DST_MAX_WIDTH", 4);
  } catch (const dst::ParseError& e) {
    std::cerr << "parse error: " << e.what() << "\n";
    return 2;
  }
  app.add_option("--format", opt.format, "output format")
      ->check(CLI::IsMember({"json", "dot"}));
  app.add_option("--out", opt.outPath, "write the output to a file");
  app.add_option("--depth", opt.depth, "tree truncation depth");
  app.add_option("--width", opt.width, "tree truncation width");

  const auto sub = [](CLI::App* parent, const std::string& name,
                      const std::string& desc) {
    CLI::App* s = parent->add_subcommand(name, desc);
    s->fallthrough();
    return s;
  };

  // ord: normalize an ordinal expression and report its shape.
  {
    auto* ord = sub(&app, "ord", "inspect an ordinal below w^w");
    auto value = std::make_shared<std::string>();
    auto plus = std::make_shared<std::string>();
    auto enumerate = std::make_shared<int>(-1);
    ord->add_option("--value", *value, "ordinal expression")->required();
    ord->add_option("--plus", *plus, "right summand to add");
    ord->add_option("--enumerate", *enumerate,
                    "list this many canonical stages below a limit");
    ord->callback([&opt, value, plus, enumerate] {
      const dst::Ordinal a = dst::parseOrdinal(*value);
      Json out = {{"ordinal", dst::toString(a)},
                  {"isZero", a.isZero()},
                  {"isFinite", a.isFinite()},
                  {"isLimit", a.isLimit()},
                  {"isSuccessor", a.isSuccessor()},
                  {"parity", a.isEven() ? "even" : "odd"},
                  {"alphaPrime", dst::toString(a.alphaPrime())},
                  {"limitPart", dst::toString(a.limitPart())},
                  {"finitePart", a.finitePart()}};
      if (a.isFinite()) out["natValue"] = a.natValue();
      if (!plus->empty())
        out["sum"] = dst::toString(a + dst::parseOrdinal(*plus));
      if (*enumerate >= 0) {
        if (!a.isLimit())
          throw dst::PreconditionError(
              "--enumerate needs a limit ordinal, got " + dst::toString(a));
        Json stages = Json::array();
        for (int n = 0; n < *enumerate; ++n)
          stages.push_back(dst::toString(
              dst::limitEnumeration(a, static_cast<std::uint64_t>(n))));
        out["enumeration"] = std::move(stages);
      }
      emitJson(opt, out);
    });
  }

  // tree: build or load a tree expression, emit it as JSON or DOT.
  {
    auto* tree = sub(&app, "tree", "build canonical trees or load tree files");
    auto canonical = std::make_shared<std::string>();
    auto canonicalC = std::make_shared<std::string>();
    auto derived = std::make_shared<std::string>();
    auto inFile = std::make_shared<std::string>();
    auto stage = std::make_shared<std::string>("0");
    auto entry = std::make_shared<int>(1);
    auto alt = std::make_shared<bool>(false);
    auto truncate = std::make_shared<bool>(false);
    tree->add_option("--canonical", *canonical,
                     "canonical tree of this rank");
    tree->add_option("--canonical-c", *canonicalC,
                     "re-enumerated canonical tree of this rank");
    tree->add_option("--derived", *derived,
                     "iterated derivative of a canonical tree, closed form");
    tree->add_option("--in", *inFile, "tree expression file");
    tree->add_option("--stage", *stage, "derivative stage for --derived");
    tree->add_option("--entry", *entry, "branch entry for --canonical-c");
    tree->add_flag("--alt", *alt, "use the alternative limit enumeration");
    tree->add_flag("--truncate", *truncate,
                   "emit the finite truncation instead of the lazy form");
    tree->callback([&opt, canonical, canonicalC, derived, inFile, stage,
                    entry, alt, truncate] {
      const int given = (!canonical->empty() ? 1 : 0) +
                        (!canonicalC->empty() ? 1 : 0) +
                        (!derived->empty() ? 1 : 0) + (!inFile->empty() ? 1 : 0);
      if (given != 1)
        throw dst::ParseError(
            "tree needs exactly one of --canonical, --canonical-c, "
            "--derived, --in");
      dst::TreeExpr t = dst::TreeExpr::point();
      if (!canonical->empty())
        t = dst::canonicalTree(dst::parseOrdinal(*canonical), *alt);
      else if (!canonicalC->empty())
        t = dst::canonicalTreeC(dst::parseOrdinal(*canonicalC), *entry);
      else if (!derived->empty())
        t = dst::derivedCanonicalTree(dst::parseOrdinal(*derived),
                                      dst::parseOrdinal(*stage), *alt);
      else
        t = treeExprFromFile(*inFile);
      if (*truncate && opt.format == "json") {
        emitJson(opt, dst::toJson(t.truncate(
                          static_cast<std::size_t>(opt.depth), opt.width)));
        return;
      }
      emitTree(opt, t);
    });
  }

  // rank: the transfinite rank of a tree under one derivative kind.
  {
    auto* rankCmd = sub(&app, "rank", "rank of a tree under a derivative");
    auto kind = std::make_shared<std::string>();
    auto treeFile = std::make_shared<std::string>();
    rankCmd->add_option("--kind", *kind, "derivative kind: l, i or iie")
        ->required();
    rankCmd->add_option("--tree", *treeFile, "tree expression file")
        ->required();
    rankCmd->callback([&opt, kind, treeFile] {
      emitJson(opt, dst::toJson(dst::rank(kindFromString(*kind),
                                          treeExprFromFile(*treeFile))));
    });
  }

  // derive: iterate a derivative and emit the surviving tree.
  {
    auto* derive = sub(&app, "derive", "iterate a tree derivative");
    auto kind = std::make_shared<std::string>();
    auto treeFile = std::make_shared<std::string>();
    auto iterate = std::make_shared<std::string>("1");
    derive->add_option("--kind", *kind, "derivative kind: l, i or iie")
        ->required();
    derive->add_option("--tree", *treeFile, "tree expression file")
        ->required();
    derive->add_option("--iterate", *iterate, "how often to derive");
    derive->callback([&opt, kind, treeFile, iterate] {
      emitTree(opt, dst::iterate(kindFromString(*kind),
                                 treeExprFromFile(*treeFile),
                                 dst::parseOrdinal(*iterate)));
    });
  }

  // scheme: leaf schemes over finite grids.
  {
    auto* scheme = sub(&app, "scheme", "leaf schemes over well-founded grids");
    scheme->require_subcommand(1);
    {
      auto* eval = sub(scheme, "eval", "evaluate a leaf scheme");
      auto inFile = std::make_shared<std::string>();
      eval->add_option("--in", *inFile, "leaf scheme file")->required();
      eval->callback([&opt, inFile] {
        const dst::LeafScheme h = dst::leafSchemeFromJson(readJsonFile(*inFile));
        emitJson(opt, Json{{"value", dst::toJson(dst::evalScheme(h))}});
      });
    }
    {
      auto* compile = sub(scheme, "compile",
                          "compile a set expression onto a grid");
      auto inFile = std::make_shared<std::string>();
      auto alpha = std::make_shared<std::string>();
      auto width = std::make_shared<int>(2);
      compile->add_option("--in", *inFile,
                          "file with {\"universe\": [...], \"expr\": {...}}")
          ->required();
      compile->add_option("--alpha", *alpha, "grid rank")->required();
      compile->add_option("--width", *width, "grid width")->required();
      compile->callback([&opt, inFile, alpha, width] {
        const Json j = readJsonFile(*inFile);
        const dst::Universe u =
            dst::universeFromJson(dst::detail::jsonField(j, "universe"));
        const dst::SetExpr e =
            dst::setExprFromJson(dst::detail::jsonField(j, "expr"));
        emitJson(opt, dst::toJson(dst::compileSimple(
                          e, u, dst::parseOrdinal(*alpha), *width)));
      });
    }
  }

  // rt: Suslin schemes and membership over index trees.
  {
    auto* rt = sub(&app, "rt", "Suslin schemes and staged membership");
    rt->require_subcommand(1);
    {
      auto* member = sub(rt, "member", "membership over an index tree");
      auto schemeFile = std::make_shared<std::string>();
      auto treeFile = std::make_shared<std::string>();
      auto point = std::make_shared<std::string>();
      auto prefix = std::make_shared<std::string>("[]");
      member->add_option("--scheme", *schemeFile, "Suslin scheme file")
          ->required();
      member->add_option("--tree", *treeFile, "index tree file")->required();
      member->add_option("--point", *point, "atom to test")->required();
      member->add_option("--prefix", *prefix, "anchor prefix, a JSON array");
      member->callback([&opt, schemeFile, treeFile, point, prefix] {
        const dst::SuslinScheme c =
            dst::suslinSchemeFromJson(readJsonFile(*schemeFile));
        const bool in = dst::rtMember(
            c, treeExprFromFile(*treeFile), *point,
            dst::seqFromJson(inlineJson(*prefix, "--prefix")));
        emitJson(opt, Json{{"member", in}});
      });
    }
    {
      auto* ralpha = sub(rt, "ralpha", "stage set of a scheme");
      auto schemeFile = std::make_shared<std::string>();
      auto alpha = std::make_shared<std::string>();
      ralpha->add_option("--scheme", *schemeFile, "Suslin scheme file")
          ->required();
      ralpha->add_option("--alpha", *alpha, "stage ordinal")->required();
      ralpha->callback([&opt, schemeFile, alpha] {
        const dst::SuslinScheme c =
            dst::suslinSchemeFromJson(readJsonFile(*schemeFile));
        emitJson(opt, Json{{"value", dst::toJson(dst::rAlpha(
                                         c, dst::parseOrdinal(*alpha)))}});
      });
    }
    {
      auto* compile = sub(rt, "compile",
                          "compile a set expression into a regular scheme");
      auto inFile = std::make_shared<std::string>();
      auto alpha = std::make_shared<std::string>();
      auto width = std::make_shared<int>(2);
      compile->add_option("--in", *inFile,
                          "file with {\"universe\": [...], \"expr\": {...}}")
          ->required();
      compile->add_option("--alpha", *alpha, "target stage")->required();
      compile->add_option("--width", *width, "slots per level")->required();
      compile->callback([&opt, inFile, alpha, width] {
        const Json j = readJsonFile(*inFile);
        const dst::Universe u =
            dst::universeFromJson(dst::detail::jsonField(j, "universe"));
        const dst::SetExpr e =
            dst::setExprFromJson(dst::detail::jsonField(j, "expr"));
        emitJson(opt, dst::toJson(dst::compileRegular(
                          e, u, dst::parseOrdinal(*alpha), *width)));
      });
    }
    {
      auto* op = sub(rt, "suslin-op", "the Suslin operation of a scheme");
      auto schemeFile = std::make_shared<std::string>();
      op->add_option("--scheme", *schemeFile, "Suslin scheme file")
          ->required();
      op->callback([&opt, schemeFile] {
        const dst::SuslinScheme c =
            dst::suslinSchemeFromJson(readJsonFile(*schemeFile));
        emitJson(opt, Json{{"value", dst::toJson(dst::suslinOperation(c))}});
      });
    }
    {
      auto* fa = sub(rt, "check-fa",
                     "sufficiency of a scheme for an additive rank");
      auto schemeFile = std::make_shared<std::string>();
      auto target = std::make_shared<std::string>();
      auto alpha = std::make_shared<std::string>();
      auto closureFile = std::make_shared<std::string>();
      fa->add_option("--scheme", *schemeFile, "Suslin scheme file")
          ->required();
      fa->add_option("--target", *target, "target set, a JSON array")
          ->required();
      fa->add_option("--alpha", *alpha, "additive rank")->required();
      fa->add_option("--closure", *closureFile,
                     "file with {\"space\": {...}, \"atoms\": [...]}");
      fa->callback([&opt, schemeFile, target, alpha, closureFile] {
        const dst::SuslinScheme c =
            dst::suslinSchemeFromJson(readJsonFile(*schemeFile));
        dst::ClosureOperator cl = dst::identityClosure();
        if (!closureFile->empty()) {
          const Json j = readJsonFile(*closureFile);
          const dst::Universe names =
              dst::universeFromJson(dst::detail::jsonField(j, "atoms"));
          cl = dst::closureOperatorOf(
              dst::finSpaceFromJson(dst::detail::jsonField(j, "space")),
              names.atoms);
        }
        const dst::FaVerdict v = dst::faSufficiencyCheck(
            c, cl, dst::atomSetFromJson(inlineJson(*target, "--target")),
            dst::parseOrdinal(*alpha));
        emitJson(opt, dst::toJson(v));
      });
    }
  }

  // broom: classification and extensions of broom sets.
  {
    auto* broom = sub(&app, "broom", "broom sets and their extensions");
    broom->require_subcommand(1);
    {
      auto* classify = sub(broom, "classify", "construction rank of a broom");
      auto inFile = std::make_shared<std::string>();
      classify->add_option("--in", *inFile, "broom file")->required();
      classify->callback([&opt, inFile] {
        const dst::BroomExpr b = dst::broomExprFromJson(readJsonFile(*inFile));
        emitJson(opt, Json{{"rank", dst::toString(dst::classifyBroom(b))}});
      });
    }
    {
      auto* extend = sub(broom, "extend", "attach the infinite tail family");
      auto inFile = std::make_shared<std::string>();
      auto shift = std::make_shared<int>(0);
      auto word = std::make_shared<std::string>("[]");
      extend->add_option("--in", *inFile, "broom file")->required();
      extend->add_option("--shift", *shift, "head shift of the strategy");
      extend->add_option("--word", *word, "tail word, a JSON array");
      extend->callback([&opt, inFile, shift, word] {
        const dst::BroomExpr b = dst::broomExprFromJson(readJsonFile(*inFile));
        dst::ExtendStrategy s;
        s.headShift = *shift;
        s.tailWord = dst::seqFromJson(inlineJson(*word, "--word"));
        emitJson(opt, dst::toJson(dst::extendBroom(b, s)));
      });
    }
    {
      auto* diie = sub(broom, "diie",
                       "structural derivative of an extension closure");
      auto inFile = std::make_shared<std::string>();
      diie->add_option("--in", *inFile, "extension file")->required();
      diie->callback([&opt, inFile] {
        const dst::InfBroomExpr a =
            dst::infBroomExprFromJson(readJsonFile(*inFile));
        emitTree(opt, dst::broomDiie(a));
      });
    }
    {
      auto* check = sub(broom, "check-rank",
                        "derivative bounds for a broom or extension");
      auto inFile = std::make_shared<std::string>();
      check->add_option("--in", *inFile, "broom or extension file")
          ->required();
      check->callback([&opt, inFile] {
        const Json j = readJsonFile(*inFile);
        const dst::RankLemmaReport r =
            j.is_object() && j.contains("base")
                ? dst::rankLemmaCheck(dst::infBroomExprFromJson(j))
                : dst::rankLemmaCheck(dst::broomExprFromJson(j));
        emitJson(opt, dst::toJson(r));
      });
    }
    {
      auto* ad = sub(broom, "check-ad",
                     "almost-disjointness of an extension family");
      auto inFile = std::make_shared<std::string>();
      ad->add_option("--in", *inFile, "file with an array of extensions")
          ->required();
      ad->callback([&opt, inFile] {
        const Json j = readJsonFile(*inFile);
        if (!j.is_array())
          throw dst::ParseError("check-ad expects an array of extensions");
        std::vector<dst::InfBroomExpr> family;
        for (const Json& e : j) family.push_back(dst::infBroomExprFromJson(e));
        emitJson(opt, dst::toJson(dst::almostDisjointCheck(family)));
      });
    }
  }

  // topo: finite topological spaces.
  {
    auto* topo = sub(&app, "topo", "finite topological spaces");
    topo->require_subcommand(1);
    {
      auto* zoom = sub(topo, "zoom", "replace isolated points by spaces");
      auto inFile = std::make_shared<std::string>();
      zoom->add_option("--in", *inFile,
                       "file with {\"base\": {...}, \"pieces\": [...]}")
          ->required();
      zoom->callback([&opt, inFile] {
        const Json j = readJsonFile(*inFile);
        const dst::FinSpace y =
            dst::finSpaceFromJson(dst::detail::jsonField(j, "base"));
        const Json& ps = dst::detail::jsonField(j, "pieces");
        if (!ps.is_array()) throw dst::ParseError("pieces must be an array");
        std::map<int, dst::FinSpace> xs;
        for (const Json& p : ps)
          xs.emplace(dst::detail::jsonInt(dst::detail::jsonField(p, "point"),
                                          "piece point"),
                     dst::finSpaceFromJson(dst::detail::jsonField(p, "space")));
        emitJson(opt, dst::toJson(dst::zoomSpace(y, xs)));
      });
    }
    {
      auto* am = sub(topo, "amalgamate",
                     "glue extensions of a clopen family");
      auto inFile = std::make_shared<std::string>();
      am->add_option(
            "--in", *inFile,
            "file with {\"space\": {...}, \"family\": [...], "
            "\"extensions\": [...]}")
          ->required();
      am->callback([&opt, inFile] {
        const Json j = readJsonFile(*inFile);
        const dst::FinSpace x =
            dst::finSpaceFromJson(dst::detail::jsonField(j, "space"));
        const Json& fam = dst::detail::jsonField(j, "family");
        if (!fam.is_array()) throw dst::ParseError("family must be an array");
        std::vector<dst::PointSet> family;
        for (const Json& m : fam)
          family.push_back(dst::pointSetFromJson(m, x.pointCount()));
        std::map<std::size_t, dst::SpaceExtension> exts;
        if (j.contains("extensions")) {
          const Json& es = j.at("extensions");
          if (!es.is_array())
            throw dst::ParseError("extensions must be an array");
          for (const Json& e : es) {
            const int i =
                dst::detail::jsonInt(dst::detail::jsonField(e, "member"),
                                     "extension member");
            if (i < 0 || static_cast<std::size_t>(i) >= family.size())
              throw dst::ParseError("extension member " + std::to_string(i) +
                                    " is outside the family");
            dst::SpaceExtension ext;
            ext.space =
                dst::finSpaceFromJson(dst::detail::jsonField(e, "space"));
            const Json& ls = dst::detail::jsonField(e, "labels");
            if (!ls.is_array())
              throw dst::ParseError("extension labels must be an array");
            for (const Json& l : ls)
              ext.labels.push_back(dst::detail::jsonInt(l, "label"));
            exts.emplace(static_cast<std::size_t>(i), std::move(ext));
          }
        }
        emitJson(opt, dst::toJson(dst::amalgamate(x, family, exts)));
      });
    }
    {
      auto* wop = sub(topo, "w-op", "largest open set with a given trace");
      auto spaceFile = std::make_shared<std::string>();
      auto subspace = std::make_shared<std::string>();
      auto trace = std::make_shared<std::string>();
      wop->add_option("--space", *spaceFile, "space file")->required();
      wop->add_option("--subspace", *subspace, "subspace, a JSON array")
          ->required();
      wop->add_option("--trace", *trace, "trace, a JSON array")->required();
      wop->callback([&opt, spaceFile, subspace, trace] {
        const dst::FinSpace q = dst::finSpaceFromJson(readJsonFile(*spaceFile));
        const dst::PointSet p = dst::pointSetFromJson(
            inlineJson(*subspace, "--subspace"), q.pointCount());
        const dst::PointSet g = dst::pointSetFromJson(
            inlineJson(*trace, "--trace"), q.pointCount());
        emitJson(opt, Json{{"w", dst::toJson(dst::wOperator(q, p, g),
                                             q.pointCount())}});
      });
    }
    {
      auto* ax = sub(topo, "check-a-axioms",
                     "clopen-family axioms at finite scale");
      auto spaceFile = std::make_shared<std::string>();
      auto familyText = std::make_shared<std::string>();
      ax->add_option("--space", *spaceFile, "space file")->required();
      ax->add_option("--family", *familyText,
                     "family of point sets, a JSON array of arrays")
          ->required();
      ax->callback([&opt, spaceFile, familyText] {
        const dst::FinSpace x = dst::finSpaceFromJson(readJsonFile(*spaceFile));
        const Json fam = inlineJson(*familyText, "--family");
        if (!fam.is_array()) throw dst::ParseError("family must be an array");
        std::vector<dst::PointSet> family;
        for (const Json& m : fam)
          family.push_back(dst::pointSetFromJson(m, x.pointCount()));
        emitJson(opt,
                 dst::toJson(dst::checkAxiomsA(x, family), x.pointCount()));
      });
    }
    {
      auto* handles = sub(topo, "handles",
                          "cut an extension into its small-rank handles");
      auto inFile = std::make_shared<std::string>();
      auto gamma = std::make_shared<std::string>();
      handles->add_option("--in", *inFile, "extension file")->required();
      handles->add_option("--gamma", *gamma, "rank threshold")->required();
      handles->callback([&opt, inFile, gamma] {
        const dst::InfBroomExpr a =
            dst::infBroomExprFromJson(readJsonFile(*inFile));
        Json out = Json::array();
        for (const dst::Seq& h :
             dst::gammaHandles(a, dst::parseOrdinal(*gamma)))
          out.push_back(dst::toJson(h));
        emitJson(opt, Json{{"handles", std::move(out)}});
      });
    }
  }

  // verify: named property suites with counterexample files.
  {
    auto* verify = sub(&app, "verify", "run a named property suite");
    auto suite = std::make_shared<std::string>();
    auto seed = std::make_shared<std::uint64_t>(0);
    auto cases = std::make_shared<int>(200);
    auto cePath = std::make_shared<std::string>();
    auto list = std::make_shared<bool>(false);
    verify->add_option("--suite", *suite, "suite name");
    verify->add_option("--seed", *seed, "random seed");
    verify->add_option("--cases", *cases, "randomized cases to draw");
    verify->add_option("--counterexample-out", *cePath,
                       "where to put a failing instance");
    verify->add_flag("--list", *list, "list the available suites");
    verify->callback([&opt, &exitCode, suite, seed, cases, cePath, list] {
      if (*list) {
        emitJson(opt, Json{{"suites", dst::suiteNames()}});
        return;
      }
      if (suite->empty())
        throw dst::ParseError("verify needs --suite or --list");
      const dst::VerifyReport r = dst::runSuite(*suite, *seed, *cases);
      Json out = dst::toJson(r);
      if (!r.pass) {
        const std::string path =
            cePath->empty() ? *suite + "-counterexample.json" : *cePath;
        std::ofstream ce(path);
        if (!ce) throw dst::Error("cannot write " + path);
        ce << r.counterexample.dump(2) << "\n";
        out["counterexampleFile"] = path;
        exitCode = 4;
      }
      emitJson(opt, out);
    });
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  } catch (const dst::ParseError& e) {
    std::cerr << "parse error: " << e.what() << "\n";
    return 2;
  } catch (const dst::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
  return exitCode;
}
