#include "entgraph/entity_graph.hpp"

#include <algorithm>
#include <charconv>
#include <numeric>
#include <set>

#include "entgraph/error.hpp"

namespace entgraph {

std::string_view to_string(VertexKind kind) { return kind == VertexKind::set ? "set" : "entity"; }

std::string_view to_string(EdgeKind kind) {
  return kind == EdgeKind::transition ? "transition" : "membership";
}

GraphVertex GraphVertex::set_vertex(EntitySet members, std::uint32_t depth) {
  return GraphVertex{VertexKind::set, depth, std::move(members)};
}

GraphVertex GraphVertex::entity_vertex(const EntityId& entity, std::uint32_t depth) {
  return GraphVertex{VertexKind::entity, depth, EntitySet(std::vector<EntityId>{entity})};
}

std::string vertex_id(const GraphVertex& v) {
  std::string id = v.kind == VertexKind::set ? "s:" : "e:";
  id += std::to_string(v.depth);
  id += ':';
  id += v.members.joined();
  return id;
}

GraphVertex parse_vertex_id(std::string_view id) {
  const auto bad = [&](const char* why) {
    return SchemaError("malformed vertex id '" + std::string(id) + "': " + why);
  };
  if (id.size() < 5 || id[1] != ':' || (id[0] != 's' && id[0] != 'e')) throw bad("bad prefix");
  const auto colon = id.find(':', 2);
  if (colon == std::string_view::npos) throw bad("missing depth separator");
  std::uint32_t depth = 0;
  const auto digits = id.substr(2, colon - 2);
  auto [ptr, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), depth);
  if (digits.empty() || ec != std::errc{} || ptr != digits.data() + digits.size()) throw bad("bad depth");

  std::vector<EntityId> members;
  auto rest = id.substr(colon + 1);
  while (!rest.empty()) {
    const auto space = rest.find(' ');
    auto piece = rest.substr(0, space);
    auto entity = EntityId::parse(piece);
    if (!entity) throw bad("bad entity");
    members.push_back(std::move(*entity));
    if (space == std::string_view::npos) break;
    rest.remove_prefix(space + 1);
    if (rest.empty()) throw bad("trailing separator");
  }
  if (members.empty()) throw bad("no entities");
  EntitySet set(members);
  if (set.size() != members.size() || !std::equal(members.begin(), members.end(), set.begin())) {
    throw bad("entities not sorted and unique");
  }
  if (id[0] == 'e') {
    if (set.size() != 1) throw bad("entity vertex with several entities");
    return GraphVertex::entity_vertex(set[0], depth);
  }
  return GraphVertex::set_vertex(std::move(set), depth);
}

std::uint64_t total_weight(const LabelWeights& w) {
  return std::accumulate(w.begin(), w.end(), std::uint64_t{0});
}

std::optional<std::size_t> EntityGraph::label_index(std::string_view label) const {
  for (std::size_t i = 0; i < labels_.size(); ++i) {
    if (labels_[i] == label) return i;
  }
  return std::nullopt;
}

std::optional<VertexIndex> EntityGraph::find(const GraphVertex& v) const {
  auto it = std::lower_bound(vertices_.begin(), vertices_.end(), v);
  if (it == vertices_.end() || *it != v) return std::nullopt;
  return static_cast<VertexIndex>(it - vertices_.begin());
}

std::optional<std::size_t> EntityGraph::find_edge(VertexIndex src, VertexIndex dst, EdgeKind kind) const {
  auto key = std::make_tuple(kind, src, dst);
  auto it = std::lower_bound(edges_.begin(), edges_.end(), key, [](const GraphEdge& e, const auto& k) {
    return std::make_tuple(e.kind, e.src, e.dst) < k;
  });
  if (it == edges_.end() || std::make_tuple(it->kind, it->src, it->dst) != key) return std::nullopt;
  return static_cast<std::size_t>(it - edges_.begin());
}

std::vector<VertexIndex> EntityGraph::vertices_at(std::uint32_t depth, VertexKind kind) const {
  // Vertices sort by (kind, depth, members), so each (kind, depth) is one contiguous run.
  GraphVertex probe{kind, depth, EntitySet{}};
  auto it = std::lower_bound(vertices_.begin(), vertices_.end(), probe);
  std::vector<VertexIndex> out;
  for (; it != vertices_.end() && it->kind == kind && it->depth == depth; ++it) {
    out.push_back(static_cast<VertexIndex>(it - vertices_.begin()));
  }
  return out;
}

GraphBuilder::GraphBuilder(std::vector<std::string> labels) : labels_(std::move(labels)) {
  std::set<std::string> seen;
  for (const auto& l : labels_) {
    if (!seen.insert(l).second) throw ParameterError("duplicate corpus label '" + l + "'");
  }
}

void GraphBuilder::add_vertex(const GraphVertex& v) {
  if (v.members.empty()) throw ParameterError("graph vertices need at least one entity");
  if (v.kind == VertexKind::entity && v.members.size() != 1) {
    throw ParameterError("entity vertex must carry exactly one entity");
  }
  vertices_.try_emplace(v, LabelWeights(labels_.size(), 0));
}

void GraphBuilder::add_occurrences(const GraphVertex& v, std::size_t label, std::uint64_t count) {
  add_vertex(v);
  vertices_[v].at(label) += count;
}

void GraphBuilder::add_edge(const GraphVertex& src, const GraphVertex& dst, EdgeKind kind,
                            std::size_t label, std::uint64_t weight) {
  add_vertex(src);
  add_vertex(dst);
  auto [it, inserted] = edges_.try_emplace(EdgeKey{src, dst, kind}, LabelWeights(labels_.size(), 0));
  it->second.at(label) += weight;
}

EntityGraph GraphBuilder::finish() && {
  EntityGraph g;
  g.labels_ = std::move(labels_);
  g.expanded_ = expanded_;
  g.vertices_.reserve(vertices_.size());
  g.occurrences_.reserve(vertices_.size());
  for (auto& [v, occ] : vertices_) {
    g.max_depth_ = std::max(g.max_depth_, v.depth);
    g.vertices_.push_back(v);
    g.occurrences_.push_back(std::move(occ));
  }

  const auto index_of = [&](const GraphVertex& v) { return *g.find(v); };
  for (auto& [key, weights] : edges_) {
    const auto& [src, dst, kind] = key;
    if (total_weight(weights) == 0) continue;
    if (kind == EdgeKind::transition) {
      if (!src.is_set() || !dst.is_set() || dst.depth != src.depth + 1) {
        throw SchemaError("transition " + vertex_id(src) + " -> " + vertex_id(dst) +
                          " does not join set vertices at consecutive depths");
      }
    } else if (src.kind != VertexKind::entity || !dst.is_set() || src.depth != dst.depth ||
               !dst.members.contains(src.entity())) {
      throw SchemaError("membership " + vertex_id(src) + " -> " + vertex_id(dst) + " is malformed");
    }
    g.edges_.push_back(GraphEdge{index_of(src), index_of(dst), kind, std::move(weights)});
  }
  std::sort(g.edges_.begin(), g.edges_.end(), [](const GraphEdge& a, const GraphEdge& b) {
    return std::tie(a.kind, a.src, a.dst) < std::tie(b.kind, b.src, b.dst);
  });

  const auto n = g.vertices_.size();
  g.out_transitions_.resize(n);
  g.in_transitions_.resize(n);
  g.memberships_.resize(n);
  for (std::size_t i = 0; i < g.edges_.size(); ++i) {
    const auto& e = g.edges_[i];
    if (e.kind == EdgeKind::transition) {
      g.out_transitions_[e.src].push_back(i);
      g.in_transitions_[e.dst].push_back(i);
    } else {
      g.memberships_[e.src].push_back(i);
      g.memberships_[e.dst].push_back(i);
    }
  }
  // Edges are sorted by (kind, src, dst): out-lists are already ordered by dst.
  for (auto& list : g.in_transitions_) {
    std::sort(list.begin(), list.end(),
              [&](std::size_t a, std::size_t b) { return g.edges_[a].src < g.edges_[b].src; });
  }
  return g;
}

EntityGraph build_graph(const ThreadPaths& corpus_paths, const std::string& label) {
  GraphBuilder builder({label});
  for (const auto& [thread_id, paths] : corpus_paths) {
    std::set<GraphVertex> seen_vertices;
    std::set<std::pair<GraphVertex, GraphVertex>> seen_transitions;
    for (const auto& path : paths) {
      for (std::size_t d = 0; d < path.steps.size(); ++d) {
        auto v = GraphVertex::set_vertex(path.steps[d], static_cast<std::uint32_t>(d));
        if (d > 0) {
          auto u = GraphVertex::set_vertex(path.steps[d - 1], static_cast<std::uint32_t>(d - 1));
          seen_transitions.emplace(std::move(u), v);
        }
        seen_vertices.insert(std::move(v));
      }
    }
    for (const auto& v : seen_vertices) builder.add_occurrences(v, 0, 1);
    for (const auto& [u, v] : seen_transitions) builder.add_edge(u, v, EdgeKind::transition, 0, 1);
  }
  return std::move(builder).finish();
}

namespace {

GraphBuilder copy_into_builder(const EntityGraph& graph, std::vector<std::string> labels,
                               const std::vector<std::size_t>& label_map) {
  GraphBuilder builder(std::move(labels));
  for (VertexIndex i = 0; i < graph.vertices().size(); ++i) {
    const auto& v = graph.vertex(i);
    builder.add_vertex(v);
    const auto& occ = graph.occurrences(i);
    for (std::size_t l = 0; l < occ.size(); ++l) {
      if (occ[l] > 0) builder.add_occurrences(v, label_map[l], occ[l]);
    }
  }
  for (const auto& e : graph.edges()) {
    for (std::size_t l = 0; l < e.weights.size(); ++l) {
      if (e.weights[l] > 0) {
        builder.add_edge(graph.vertex(e.src), graph.vertex(e.dst), e.kind, label_map[l], e.weights[l]);
      }
    }
  }
  return builder;
}

std::vector<std::size_t> identity_map(std::size_t n) {
  std::vector<std::size_t> m(n);
  std::iota(m.begin(), m.end(), std::size_t{0});
  return m;
}

}  // namespace

EntityGraph star_expand(const EntityGraph& graph) {
  if (graph.expanded()) throw StateError("graph is already star-expanded");
  for (const auto& v : graph.vertices()) {
    if (v.kind == VertexKind::entity) throw StateError("graph already holds entity vertices");
  }
  std::vector<std::string> labels(graph.labels().begin(), graph.labels().end());
  auto builder = copy_into_builder(graph, labels, identity_map(labels.size()));
  for (VertexIndex i = 0; i < graph.vertices().size(); ++i) {
    const auto& v = graph.vertex(i);
    const auto& occ = graph.occurrences(i);
    for (const auto& e : v.members) {
      const auto ev = GraphVertex::entity_vertex(e, v.depth);
      builder.add_vertex(ev);
      for (std::size_t l = 0; l < occ.size(); ++l) {
        if (occ[l] > 0) builder.add_edge(ev, v, EdgeKind::membership, l, occ[l]);
      }
    }
  }
  builder.mark_expanded();
  return std::move(builder).finish();
}

EntityGraph merge_corpora(const EntityGraph& a, const EntityGraph& b) {
  for (const auto& l : b.labels()) {
    if (a.label_index(l)) throw ParameterError("corpus label '" + l + "' appears in both graphs");
  }
  if (!a.empty() && !b.empty() && a.expanded() != b.expanded()) {
    throw StateError("cannot merge a star-expanded graph with an unexpanded one");
  }
  std::vector<std::string> labels(a.labels().begin(), a.labels().end());
  labels.insert(labels.end(), b.labels().begin(), b.labels().end());
  std::sort(labels.begin(), labels.end());
  const auto remap = [&](const EntityGraph& g) {
    std::vector<std::size_t> m;
    for (const auto& l : g.labels()) {
      m.push_back(static_cast<std::size_t>(std::find(labels.begin(), labels.end(), l) - labels.begin()));
    }
    return m;
  };

  GraphBuilder builder = copy_into_builder(a, labels, remap(a));
  const auto b_map = remap(b);
  for (VertexIndex i = 0; i < b.vertices().size(); ++i) {
    const auto& v = b.vertex(i);
    builder.add_vertex(v);
    const auto& occ = b.occurrences(i);
    for (std::size_t l = 0; l < occ.size(); ++l) {
      if (occ[l] > 0) builder.add_occurrences(v, b_map[l], occ[l]);
    }
  }
  for (const auto& e : b.edges()) {
    for (std::size_t l = 0; l < e.weights.size(); ++l) {
      if (e.weights[l] > 0) builder.add_edge(b.vertex(e.src), b.vertex(e.dst), e.kind, b_map[l], e.weights[l]);
    }
  }
  if (a.expanded() || b.expanded()) builder.mark_expanded();
  return std::move(builder).finish();
}

}  // namespace entgraph
