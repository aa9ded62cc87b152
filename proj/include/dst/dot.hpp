#pragma once

// DOT rendering of finite trees and of truncations of lazily represented
// trees, for feeding graphviz.

#include <cstddef>
#include <map>
#include <string>

#include "dst/seq.hpp"
#include "dst/tree_expr.hpp"

namespace dst {

// One graph node per tree node, labeled by its sequence, with edges from
// each node to its children. Nodes are emitted in the (lexicographic)
// order of the underlying set, so equal trees render identically.
inline std::string toDot(const FiniteTree& t, const std::string& name = "tree") {
  std::string out = "digraph " + name + " {\n";
  out += "  node [shape=box, fontname=\"monospace\"];\n";
  std::map<Seq, std::size_t> ids;
  for (const Seq& s : t.nodes()) {
    const std::size_t id = ids.size();
    ids.emplace(s, id);
    out += "  n" + std::to_string(id) + " [label=\"" + seqToString(s) + "\"];\n";
  }
  for (const auto& [s, id] : ids) {
    if (s.empty()) continue;
    const Seq parent(s.begin(), s.end() - 1);
    out += "  n" + std::to_string(ids.at(parent)) + " -> n" +
           std::to_string(id) + ";\n";
  }
  out += "}\n";
  return out;
}

inline std::string toDot(const TreeExpr& t, std::size_t depth, int width,
                         const std::string& name = "tree") {
  return toDot(t.truncate(depth, width), name);
}

}  // namespace dst
