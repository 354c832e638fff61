#pragma once

#include <compare>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <tuple>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "entgraph/entity_tree.hpp"
#include "entgraph/linking.hpp"

namespace entgraph {

enum class VertexKind : std::uint8_t { set = 0, entity = 1 };
enum class EdgeKind : std::uint8_t { transition = 0, membership = 1 };

std::string_view to_string(VertexKind kind);
std::string_view to_string(EdgeKind kind);

// Identity is (kind, depth, members). An entity vertex carries exactly one member.
struct GraphVertex {
  VertexKind kind = VertexKind::set;
  std::uint32_t depth = 0;
  EntitySet members;

  static GraphVertex set_vertex(EntitySet members, std::uint32_t depth);
  static GraphVertex entity_vertex(const EntityId& entity, std::uint32_t depth);

  const EntityId& entity() const { return members[0]; }
  bool is_set() const { return kind == VertexKind::set; }

  friend auto operator<=>(const GraphVertex&, const GraphVertex&) = default;
  friend bool operator==(const GraphVertex&, const GraphVertex&) = default;
};

// "s:<depth>:<e1> <e2> ..." or "e:<depth>:<entity>". Stable across runs; used as
// the vertex key in every serialized file.
std::string vertex_id(const GraphVertex& v);
// Throws SchemaError on malformed ids.
GraphVertex parse_vertex_id(std::string_view id);

using VertexIndex = std::uint32_t;

// Per-label counts aligned with EntityGraph::labels().
using LabelWeights = std::vector<std::uint64_t>;

std::uint64_t total_weight(const LabelWeights& w);

struct GraphEdge {
  VertexIndex src = 0;
  VertexIndex dst = 0;
  EdgeKind kind = EdgeKind::transition;
  LabelWeights weights;

  std::uint64_t total() const { return total_weight(weights); }
};

// Layered, directed, weighted multi-corpus graph over (entity set, depth) vertices,
// plus (entity, depth) vertices once star-expanded. Immutable once built; vertices
// and edges are kept in sorted order so equal content is equal representation.
class EntityGraph {
 public:
  EntityGraph() = default;

  std::span<const std::string> labels() const { return labels_; }
  std::optional<std::size_t> label_index(std::string_view label) const;
  std::uint32_t max_depth() const { return max_depth_; }
  bool expanded() const { return expanded_; }
  bool empty() const { return vertices_.empty(); }

  std::span<const GraphVertex> vertices() const { return vertices_; }
  const GraphVertex& vertex(VertexIndex i) const { return vertices_[i]; }
  std::optional<VertexIndex> find(const GraphVertex& v) const;

  // Distinct threads containing each vertex, per label. Zero for entity vertices.
  const LabelWeights& occurrences(VertexIndex i) const { return occurrences_[i]; }

  std::span<const GraphEdge> edges() const { return edges_; }
  const GraphEdge& edge(std::size_t i) const { return edges_[i]; }
  std::optional<std::size_t> find_edge(VertexIndex src, VertexIndex dst, EdgeKind kind) const;

  // Edge indices, ordered by the far endpoint.
  std::span<const std::size_t> out_transitions(VertexIndex v) const { return out_transitions_[v]; }
  std::span<const std::size_t> in_transitions(VertexIndex v) const { return in_transitions_[v]; }
  // For an entity vertex: its membership edges. For a set vertex: edges from its members.
  std::span<const std::size_t> memberships(VertexIndex v) const { return memberships_[v]; }

  // Vertex indices of one kind at one depth, in vertex order.
  std::vector<VertexIndex> vertices_at(std::uint32_t depth, VertexKind kind) const;

 private:
  friend class GraphBuilder;

  std::vector<std::string> labels_;
  std::uint32_t max_depth_ = 0;
  bool expanded_ = false;
  std::vector<GraphVertex> vertices_;
  std::vector<LabelWeights> occurrences_;
  std::vector<GraphEdge> edges_;
  std::vector<std::vector<std::size_t>> out_transitions_;
  std::vector<std::vector<std::size_t>> in_transitions_;
  std::vector<std::vector<std::size_t>> memberships_;
};

// Accumulates vertices and edges by identity, then freezes them into an EntityGraph.
class GraphBuilder {
 public:
  // Labels are kept in the given order; duplicates throw ParameterError.
  explicit GraphBuilder(std::vector<std::string> labels);

  std::size_t label_count() const { return labels_.size(); }
  void add_vertex(const GraphVertex& v);
  void add_occurrences(const GraphVertex& v, std::size_t label, std::uint64_t count);
  void add_edge(const GraphVertex& src, const GraphVertex& dst, EdgeKind kind, std::size_t label,
                std::uint64_t weight);
  void mark_expanded() { expanded_ = true; }

  // Validates layering and membership shape; throws SchemaError on violations.
  EntityGraph finish() &&;

 private:
  using EdgeKey = std::tuple<GraphVertex, GraphVertex, EdgeKind>;

  std::vector<std::string> labels_;
  bool expanded_ = false;
  std::map<GraphVertex, LabelWeights> vertices_;
  std::map<EdgeKey, LabelWeights> edges_;
};

// Aggregates paths into a single-label graph. A transition (or a vertex occurrence)
// counts once per thread however many of the thread's paths contain it.
EntityGraph build_graph(const ThreadPaths& corpus_paths, const std::string& label);

// Adds an entity vertex per (entity, depth) and a membership edge from it to every
// set vertex containing it, weighted by the set vertex's occurrence count.
// Throws StateError when the graph is already expanded.
EntityGraph star_expand(const EntityGraph& graph);

// Union of two graphs over disjoint label sets. Throws ParameterError on a label
// collision and StateError when exactly one non-empty side is expanded.
EntityGraph merge_corpora(const EntityGraph& a, const EntityGraph& b);

inline constexpr int kGraphFormatVersion = 1;

nlohmann::json graph_to_json(const EntityGraph& graph);
EntityGraph graph_from_json(const nlohmann::json& doc);

}  // namespace entgraph
