#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "entgraph/entity_graph.hpp"

namespace entgraph {

struct ViewEdge {
  VertexIndex dst = 0;
  LabelWeights weights;

  std::uint64_t total() const { return total_weight(weights); }
};

// Set-vertex-only view of a star-expanded graph in which a set generalizes through
// its entities: the successors of (S, d) are the recorded successors of every
// (U, d) sharing at least one entity with S, each underlying transition counted once.
// Destinations are always recorded set vertices. The view borrows the graph, which
// must outlive it.
class RewiredView {
 public:
  // Throws StateError when the graph is not star-expanded.
  explicit RewiredView(const EntityGraph& graph);

  const EntityGraph& graph() const { return *graph_; }

  // Materialized successors of a set vertex of the graph, ordered by dst.
  std::span<const ViewEdge> out_edges(VertexIndex set_vertex) const { return out_[set_vertex]; }

  // Successors for any entity set at `depth`, whether or not it is a vertex.
  std::vector<ViewEdge> out_edges(const EntitySet& set, std::uint32_t depth) const;

  // Recorded set vertices at `depth` sharing an entity with `set` (including `set`
  // itself when recorded), in vertex order.
  std::vector<VertexIndex> overlapping_sets(const EntitySet& set, std::uint32_t depth) const;

  std::size_t edge_count() const;

 private:
  const EntityGraph* graph_;
  std::vector<std::vector<ViewEdge>> out_;
};

// Weight of a view edge under one label, or summed over labels when none is given.
std::uint64_t view_weight(const ViewEdge& edge, std::optional<std::size_t> label);

}  // namespace entgraph
