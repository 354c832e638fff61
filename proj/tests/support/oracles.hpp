#pragma once

// Brute-force reference computations for the tests. Each one recomputes a quantity
// from raw inputs without going through the library code path it is compared to.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <map>
#include <numeric>
#include <set>
#include <string>
#include <tuple>
#include <vector>

#include "entgraph/corpus.hpp"
#include "entgraph/entity_graph.hpp"
#include "entgraph/linking.hpp"

namespace oracle {

// "depth|A,B" - deliberately a different key format from vertex_id().
inline std::string set_key(const entgraph::EntitySet& s, std::uint32_t depth) {
  std::string k = std::to_string(depth) + "|";
  for (std::size_t i = 0; i < s.size(); ++i) k += (i ? "," : "") + s[i].str();
  return k;
}

using TransitionCounts = std::map<std::pair<std::string, std::string>, std::uint64_t>;

// Recounts transitions straight from the reply trees. A comment belongs to the entity
// tree when it and all its ancestors have non-empty sets; the edge parent->c counts
// when some entity-tree leaf at or below c sits at depth >= min_len - 1. Each
// (thread, transition) pair is counted once.
inline TransitionCounts recount_transitions(const entgraph::Corpus& corpus, const entgraph::EntitySetMap& sets,
                                            std::size_t min_len = 3) {
  std::set<std::tuple<std::string, std::string, std::string>> seen;
  for (const auto& thread : corpus.threads()) {
    const auto set_of = [&](const std::string& id) -> const entgraph::EntitySet* {
      auto it = sets.find(id);
      return it == sets.end() || it->second.empty() ? nullptr : &it->second;
    };
    const auto in_tree = [&](const entgraph::Comment& c) {
      const entgraph::Comment* at = &c;
      while (true) {
        if (!set_of(at->id)) return false;
        if (!at->parent_id) return true;
        at = thread.find(*at->parent_id);
      }
    };
    // deepest entity-tree leaf depth below each comment
    std::function<int(const entgraph::Comment&)> deepest_leaf = [&](const entgraph::Comment& c) {
      int best = -1;
      bool has_tree_child = false;
      for (const auto* child : thread.children_of(c.id)) {
        if (!set_of(child->id)) continue;
        has_tree_child = true;
        best = std::max(best, deepest_leaf(*child));
      }
      return has_tree_child ? best : thread.depth_of(c.id);
    };
    for (const auto& c : thread.comments()) {
      if (!c.parent_id || !in_tree(c)) continue;
      if (deepest_leaf(c) + 1 < static_cast<int>(min_len)) continue;
      const auto* parent = thread.find(*c.parent_id);
      const auto d = static_cast<std::uint32_t>(thread.depth_of(c.id));
      seen.emplace(thread.id(), set_key(*set_of(parent->id), d - 1), set_key(*set_of(c.id), d));
    }
  }
  TransitionCounts counts;
  for (const auto& [thread, src, dst] : seen) ++counts[{src, dst}];
  return counts;
}

inline TransitionCounts graph_transitions(const entgraph::EntityGraph& g, std::size_t label = 0) {
  TransitionCounts out;
  for (const auto& e : g.edges()) {
    if (e.kind != entgraph::EdgeKind::transition) continue;
    const auto& s = g.vertex(e.src);
    const auto& d = g.vertex(e.dst);
    if (e.weights[label] > 0) out[{set_key(s.members, s.depth), set_key(d.members, d.depth)}] = e.weights[label];
  }
  return out;
}

// Minimum over every integer plan with the given row and column sums.
inline double enumerate_transport(const std::vector<std::uint64_t>& rows, const std::vector<std::uint64_t>& cols,
                                  const std::vector<std::vector<double>>& cost) {
  const auto n = rows.size();
  const auto m = cols.size();
  double best = std::numeric_limits<double>::infinity();
  std::vector<std::uint64_t> col_left = cols;
  std::function<void(std::size_t, std::size_t, std::uint64_t, double)> fill = [&](std::size_t r, std::size_t c,
                                                                                  std::uint64_t row_left, double acc) {
    if (r == n) {
      if (std::all_of(col_left.begin(), col_left.end(), [](auto v) { return v == 0; })) best = std::min(best, acc);
      return;
    }
    if (c == m - 1) {
      // last column takes what is left of the row
      if (row_left > col_left[c]) return;
      col_left[c] -= row_left;
      fill(r + 1, 0, r + 1 < n ? rows[r + 1] : 0, acc + static_cast<double>(row_left) * cost[r][c]);
      col_left[c] += row_left;
      return;
    }
    const auto cap = std::min(row_left, col_left[c]);
    for (std::uint64_t f = 0; f <= cap; ++f) {
      col_left[c] -= f;
      fill(r, c + 1, row_left - f, acc + static_cast<double>(f) * cost[r][c]);
      col_left[c] += f;
    }
  };
  fill(0, 0, rows[0], 0.0);
  return best;
}

// Uniform-mass EMD via exhaustive plan enumeration (row mass m/g, column mass n/g).
inline double brute_emd(const std::vector<std::vector<double>>& a, const std::vector<std::vector<double>>& b) {
  const auto g = std::gcd(a.size(), b.size());
  std::vector<std::uint64_t> rows(a.size(), b.size() / g), cols(b.size(), a.size() / g);
  std::vector<std::vector<double>> cost(a.size(), std::vector<double>(b.size()));
  for (std::size_t i = 0; i < a.size(); ++i) {
    for (std::size_t j = 0; j < b.size(); ++j) {
      double s = 0.0;
      for (std::size_t k = 0; k < a[i].size(); ++k) s += (a[i][k] - b[j][k]) * (a[i][k] - b[j][k]);
      cost[i][j] = std::sqrt(s);
    }
  }
  return enumerate_transport(rows, cols, cost) / static_cast<double>(a.size() / g * b.size());
}

// Rewired successors by enumerating every (S, U, e) triple: S borrows U's recorded
// transitions when e is in both. Weight summed once per (S, U->V).
inline std::map<std::pair<std::string, std::string>, std::uint64_t> rewired_edges(const entgraph::EntityGraph& g) {
  std::map<std::pair<std::string, std::string>, std::uint64_t> out;
  std::set<std::tuple<std::size_t, std::size_t>> used;  // (S, edge)
  for (std::size_t s = 0; s < g.vertices().size(); ++s) {
    const auto& S = g.vertex(static_cast<entgraph::VertexIndex>(s));
    if (!S.is_set()) continue;
    for (std::size_t u = 0; u < g.vertices().size(); ++u) {
      const auto& U = g.vertex(static_cast<entgraph::VertexIndex>(u));
      if (!U.is_set() || U.depth != S.depth) continue;
      for (const auto& e : S.members) {
        if (!U.members.contains(e)) continue;
        for (std::size_t k = 0; k < g.edges().size(); ++k) {
          const auto& edge = g.edge(k);
          if (edge.kind != entgraph::EdgeKind::transition || edge.src != u) continue;
          if (!used.emplace(s, k).second) continue;
          const auto& V = g.vertex(edge.dst);
          out[{set_key(S.members, S.depth), set_key(V.members, V.depth)}] += edge.total();
        }
      }
    }
  }
  return out;
}

}  // namespace oracle
