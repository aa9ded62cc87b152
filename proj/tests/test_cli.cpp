#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>
#include <utility>
#include <vector>

#include <sys/wait.h>

#include <catch2/catch_amalgamated.hpp>

#include "dst/json_io.hpp"

namespace {

using dst::Json;

struct CliResult {
  int status = -1;
  std::string out;
};

// Runs the installed binary with a shell-quoted argument string, captures
// stdout, and maps the wait status back to the exit code.
CliResult runCli(const std::string& args) {
  const std::string cmd =
      std::string(DST_CLI_PATH) + " " + args + " 2>/dev/null";
  FILE* pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  CliResult r;
  char buf[4096];
  std::size_t n = 0;
  while ((n = fread(buf, 1, sizeof buf, pipe)) > 0) r.out.append(buf, n);
  const int rc = pclose(pipe);
  r.status = WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
  return r;
}

std::filesystem::path tempFile(const std::string& name,
                               const std::string& contents) {
  const std::filesystem::path p =
      std::filesystem::temp_directory_path() / ("dst_cli_" + name);
  std::ofstream out(p);
  out << contents;
  return p;
}

}  // namespace

TEST_CASE("the rank command reports canonical ranks from tree files") {
  const CliResult made = runCli("tree --canonical 'w^1*1 + 1' --out " +
                                (std::filesystem::temp_directory_path() /
                                 "dst_cli_talpha.json")
                                    .string());
  REQUIRE(made.status == 0);
  const std::string file =
      (std::filesystem::temp_directory_path() / "dst_cli_talpha.json").string();
  const CliResult ranked = runCli("rank --kind l --tree " + file);
  REQUIRE(ranked.status == 0);
  CHECK(Json::parse(ranked.out).at("rank").get<std::string>() == "w*1 + 1");
  const CliResult rankedI = runCli("rank --kind i --tree " + file);
  CHECK(Json::parse(rankedI.out).at("rank").get<std::string>() == "w*1 + 1");
}

TEST_CASE("broom classification reads fork files") {
  const auto fork = tempFile(
      "fork.json",
      R"({"kind":"fork","family":{"kind":"finiteList","branches":[)"
      R"({"head":[0],"sub":{"kind":"trivial"}},)"
      R"({"head":[1,2],"sub":{"kind":"trivial"}}]}})");
  const CliResult r = runCli("broom classify --in " + fork.string());
  REQUIRE(r.status == 0);
  CHECK(Json::parse(r.out).at("rank").get<std::string>() == "2");
}

TEST_CASE("identical inputs and seeds give byte-identical output") {
  const std::string args = "verify --suite reindex-laws --seed 7 --cases 60";
  const CliResult first = runCli(args);
  const CliResult second = runCli(args);
  REQUIRE(first.status == 0);
  CHECK(first.out == second.out);

  const dst::Universe u({"a", "b"});
  const dst::SuslinScheme c(
      u, dst::FiniteTree::fromNodes({{}, {0}}),
      {{{}, dst::AtomSet{"a", "b"}}, {{0}, dst::AtomSet{"a"}}});
  const auto scheme = tempFile("scheme.json", dst::toJson(c).dump());
  const std::string stage = "rt ralpha --scheme " + scheme.string() +
                            " --alpha 'w^1*1'";
  CHECK(runCli(stage).out == runCli(stage).out);
}

TEST_CASE("exit codes separate parse errors from precondition violations") {
  CHECK(runCli("rank --kind l --tree /nonexistent/t.json").status == 2);
  CHECK(runCli("ord --value 'w^^'").status == 2);
  CHECK(runCli("verify --suite no-such-suite").status == 2);
  const auto cone = tempFile("cone.json", R"({"kind":"fullCone"})");
  CHECK(runCli("rank --kind l --tree " + cone.string()).status == 3);
  CHECK(runCli("ord --value 3 --enumerate 2").status == 3);
  CHECK(runCli("ord --value 3").status == 0);
}

TEST_CASE("scheme compilation emits files that evaluate back") {
  const dst::Universe u({"a", "b", "c"});
  const dst::SetExpr e = dst::SetExpr::makeUnion(
      {dst::SetExpr::makeBase({"a"}), dst::SetExpr::makeBase({"b"})});
  const auto in = tempFile(
      "expr.json",
      Json{{"universe", dst::toJson(u)}, {"expr", dst::toJson(e)}}.dump());
  const std::filesystem::path compiled =
      std::filesystem::temp_directory_path() / "dst_cli_compiled.json";
  const CliResult c = runCli("scheme compile --in " + in.string() +
                             " --alpha 1 --width 2 --out " + compiled.string());
  REQUIRE(c.status == 0);
  const dst::LeafScheme h = dst::leafSchemeFromJson(
      Json::parse(std::ifstream(compiled)));
  CHECK(dst::evalScheme(h) == dst::evalExpr(e, u));
  const CliResult eval = runCli("scheme eval --in " + compiled.string());
  REQUIRE(eval.status == 0);
  CHECK(dst::atomSetFromJson(Json::parse(eval.out).at("value")) ==
        dst::evalExpr(e, u));

  const CliResult reg = runCli("rt compile --in " + in.string() +
                               " --alpha 2 --width 2");
  REQUIRE(reg.status == 0);
  const dst::SuslinScheme rc = dst::suslinSchemeFromJson(Json::parse(reg.out));
  CHECK(dst::rAlpha(rc, dst::Ordinal(2)) == dst::evalExpr(e, u));
}

TEST_CASE("membership queries agree with the library") {
  const dst::Universe u({"a", "b"});
  const dst::SuslinScheme c(
      u, dst::FiniteTree::fromNodes({{}, {0}, {1}}),
      {{{}, dst::AtomSet{"a", "b"}},
       {{0}, dst::AtomSet{"a"}},
       {{1}, dst::AtomSet{"b"}}});
  const auto scheme = tempFile("member_scheme.json", dst::toJson(c).dump());
  const auto tree = tempFile("member_tree.json", "[[0],[1]]");
  for (const char* atom : {"a", "b"}) {
    const CliResult r = runCli("rt member --scheme " + scheme.string() +
                               " --tree " + tree.string() + " --point " + atom);
    REQUIRE(r.status == 0);
    const bool want = dst::rtMember(
        c,
        dst::TreeExpr::explicitTree(dst::FiniteTree::fromNodes({{}, {0}, {1}})),
        atom, {});
    CHECK(Json::parse(r.out).at("member").get<bool>() == want);
  }
}

TEST_CASE("dot output renders truncations with bounds from the environment") {
  const CliResult dot = runCli("tree --canonical 'w^1*1' --format dot "
                               "--depth 2 --width 2");
  REQUIRE(dot.status == 0);
  CHECK(dot.out.find("digraph tree {") != std::string::npos);
  CHECK(dot.out.find("\"(1,1)\"") != std::string::npos);
  const CliResult viaEnv =
      runCli("--format dot tree --canonical 'w^1*1'");
  CHECK(viaEnv.status == 0);
  // Tighter widths keep high entries out of the truncation.
  const std::string envCmd =
      std::string("DST_MAX_DEPTH=1 DST_MAX_WIDTH=1 ") + DST_CLI_PATH +
      " tree --canonical 'w^1*1' --format dot 2>/dev/null";
  FILE* pipe = popen(envCmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  std::string out;
  char buf[4096];
  std::size_t n = 0;
  while ((n = fread(buf, 1, sizeof buf, pipe)) > 0) out.append(buf, n);
  pclose(pipe);
  CHECK(out.find("\"(0)\"") != std::string::npos);
  CHECK(out.find("\"(1)\"") == std::string::npos);
}

TEST_CASE("the shipped samples stay runnable") {
  const std::string dir = DST_SAMPLES_PATH;
  const std::vector<std::pair<std::string, std::string>> runs = {
      {"rank --kind l --tree " + dir + "/tree-omega-plus-1.json",
       R"({"rank":"w*1 + 1"})"},
      {"broom classify --in " + dir + "/fork-rank-two.json",
       R"({"rank":"2"})"},
      {"rt suslin-op --scheme " + dir + "/scheme-two-point.json",
       R"({"value":["a","b"]})"},
      {"scheme eval --in " + dir + "/leaf-scheme-union.json",
       R"({"value":["a","b"]})"},
      {"topo handles --in " + dir + "/extension-flat.json --gamma 2",
       R"({"handles":[[0],[5]]})"},
      {"broom check-ad --in " + dir + "/ad-family.json", R"({"pass":true})"},
  };
  for (const auto& [args, want] : runs) {
    const CliResult r = runCli(args);
    INFO(args);
    REQUIRE(r.status == 0);
    CHECK(Json::parse(r.out) == Json::parse(want));
  }
  for (const char* args :
       {"scheme compile --in {}/expr-union.json --alpha 1 --width 2",
        "rt compile --in {}/expr-union.json --alpha 2 --width 2",
        "topo zoom --in {}/zoom-request.json",
        "topo amalgamate --in {}/amalgam-request.json",
        "broom check-rank --in {}/extension-flat.json",
        "broom diie --in {}/extension-flat.json"}) {
    std::string cmd = args;
    cmd.replace(cmd.find("{}"), 2, dir);
    INFO(cmd);
    CHECK(runCli(cmd).status == 0);
  }
}

TEST_CASE("topological reports come back over the wire") {
  const auto space = tempFile(
      "sierp.json", dst::toJson(dst::FinSpace::fromOpens(2, {0u, 2u, 3u})).dump());
  const CliResult w = runCli("topo w-op --space " + space.string() +
                             " --subspace '[1]' --trace '[1]'");
  REQUIRE(w.status == 0);
  CHECK(Json::parse(w.out).at("w") == Json::parse("[0,1]"));

  const auto disc = tempFile("disc3.json",
                             dst::toJson(dst::FinSpace::discrete(3)).dump());
  const CliResult ax = runCli("topo check-a-axioms --space " + disc.string() +
                              " --family '[[0],[1,2]]'");
  REQUIRE(ax.status == 0);
  CHECK(Json::parse(ax.out).at("pass").get<bool>());

  const auto ext = tempFile(
      "ext.json",
      dst::toJson(dst::extendBroom(
                      dst::BroomExpr::fork(dst::BroomFamily::finiteList(
                          {{{0}, dst::BroomExpr::trivial()},
                           {{5, 1}, dst::BroomExpr::trivial()}})),
                      {}))
          .dump());
  const CliResult hs =
      runCli("topo handles --in " + ext.string() + " --gamma 2");
  REQUIRE(hs.status == 0);
  CHECK(Json::parse(hs.out).at("handles") == Json::parse("[[0],[5]]"));
}
