#pragma once

// Finite sequences of naturals and finite trees on omega.
//
// A tree is a prefix-closed set of finite sequences. FiniteTree keeps the
// node set explicitly; the symbolic, possibly infinite trees live in
// tree_expr.hpp and use FiniteTree both for explicit leaves and for
// truncations.

#include <algorithm>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "dst/error.hpp"

namespace dst {

using Seq = std::vector<int>;

inline bool isPrefixOf(const Seq& u, const Seq& s) {
  if (u.size() > s.size()) return false;
  return std::equal(u.begin(), u.end(), s.begin());
}

inline bool isProperPrefixOf(const Seq& u, const Seq& s) {
  return u.size() < s.size() && isPrefixOf(u, s);
}

inline bool comparable(const Seq& u, const Seq& s) {
  return isPrefixOf(u, s) || isPrefixOf(s, u);
}

inline Seq concat(const Seq& a, const Seq& b) {
  Seq out = a;
  out.insert(out.end(), b.begin(), b.end());
  return out;
}

inline Seq concat(const Seq& a, int entry) {
  Seq out = a;
  out.push_back(entry);
  return out;
}

// The suffix t with s = u ++ t; caller guarantees u is a prefix of s.
inline Seq suffixAfter(const Seq& u, const Seq& s) {
  return Seq(s.begin() + static_cast<std::ptrdiff_t>(u.size()), s.end());
}

inline std::string seqToString(const Seq& s) {
  std::string out = "(";
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (i > 0) out += ",";
    out += std::to_string(s[i]);
  }
  out += ")";
  return out;
}

// A finite prefix-closed set of sequences. The empty tree (no nodes at all)
// is allowed; any nonempty tree contains the empty sequence.
class FiniteTree {
 public:
  FiniteTree() = default;

  // Prefix closure of an arbitrary finite set of sequences.
  static FiniteTree closureOf(const std::set<Seq>& seqs) {
    FiniteTree t;
    for (const Seq& s : seqs) {
      Seq prefix;
      t.nodes_.insert(prefix);
      for (int e : s) {
        prefix.push_back(e);
        t.nodes_.insert(prefix);
      }
    }
    return t;
  }

  static FiniteTree single() {  // the tree {()}
    FiniteTree t;
    t.nodes_.insert(Seq{});
    return t;
  }

  // Checked constructor: the given set must already be prefix closed.
  static FiniteTree fromNodes(std::set<Seq> nodes) {
    for (const Seq& s : nodes) {
      if (s.empty()) continue;
      Seq parent(s.begin(), s.end() - 1);
      if (!nodes.count(parent))
        throw PreconditionError("node set is not prefix closed at " +
                                seqToString(s));
    }
    FiniteTree t;
    t.nodes_ = std::move(nodes);
    return t;
  }

  const std::set<Seq>& nodes() const { return nodes_; }
  bool empty() const { return nodes_.empty(); }
  std::size_t size() const { return nodes_.size(); }
  bool contains(const Seq& s) const { return nodes_.count(s) > 0; }

  void insertWithPrefixes(const Seq& s) {
    Seq prefix;
    nodes_.insert(prefix);
    for (int e : s) {
      prefix.push_back(e);
      nodes_.insert(prefix);
    }
  }

  std::size_t depth() const {
    std::size_t d = 0;
    for (const Seq& s : nodes_) d = std::max(d, s.size());
    return d;
  }

  int maxEntry() const {
    int m = -1;
    for (const Seq& s : nodes_)
      for (int e : s) m = std::max(m, e);
    return m;
  }

  // Entries n with s+(n) in the tree, in increasing order.
  std::vector<int> childEntries(const Seq& s) const {
    std::vector<int> out;
    for (auto it = nodes_.upper_bound(s); it != nodes_.end(); ++it) {
      if (!isPrefixOf(s, *it)) break;
      if (it->size() == s.size() + 1) out.push_back(it->back());
    }
    return out;
  }

  bool isLeaf(const Seq& s) const {
    return contains(s) && childEntries(s).empty();
  }

  std::vector<Seq> leaves() const {
    std::vector<Seq> out;
    for (const Seq& s : nodes_)
      if (childEntries(s).empty()) out.push_back(s);
    return out;
  }

  // The tree {t : s ++ t in this}; empty when s is not a node.
  FiniteTree subtreeAt(const Seq& s) const {
    FiniteTree out;
    if (!contains(s)) return out;
    // Extensions of s form a contiguous run in lexicographic order.
    for (auto it = nodes_.lower_bound(s); it != nodes_.end(); ++it) {
      if (!isPrefixOf(s, *it)) break;
      out.nodes_.insert(suffixAfter(s, *it));
    }
    return out;
  }

  FiniteTree truncate(std::size_t depth, int width) const {
    FiniteTree out;
    for (const Seq& s : nodes_) {
      if (s.size() > depth) continue;
      bool ok = true;
      for (int e : s)
        if (e >= width) { ok = false; break; }
      if (ok) out.nodes_.insert(s);
    }
    return out;
  }

  friend bool operator==(const FiniteTree&, const FiniteTree&) = default;

 private:
  std::set<Seq> nodes_;
};

// Prefix closure in tree form, cl_Tr: the set of all prefixes of members.
inline FiniteTree clTr(const std::set<Seq>& seqs) {
  return FiniteTree::closureOf(seqs);
}

// The full grid {s : |s| <= depth, entries < width}; the truncation of the
// unrestricted tree omega^{<omega}.
inline FiniteTree gridTree(std::size_t depth, int width) {
  FiniteTree t;
  std::vector<Seq> frontier{Seq{}};
  t.insertWithPrefixes(Seq{});
  for (std::size_t d = 0; d < depth; ++d) {
    std::vector<Seq> next;
    for (const Seq& s : frontier) {
      for (int e = 0; e < width; ++e) {
        Seq c = concat(s, e);
        t.insertWithPrefixes(c);
        next.push_back(std::move(c));
      }
    }
    frontier = std::move(next);
  }
  return t;
}

}  // namespace dst
