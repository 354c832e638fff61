#include "entgraph/rewire.hpp"

#include <algorithm>
#include <map>

#include "entgraph/error.hpp"

namespace entgraph {

RewiredView::RewiredView(const EntityGraph& graph) : graph_(&graph) {
  if (!graph.expanded()) throw StateError("the rewired view needs a star-expanded graph");
  out_.resize(graph.vertices().size());
  for (VertexIndex i = 0; i < graph.vertices().size(); ++i) {
    const auto& v = graph.vertex(i);
    if (v.is_set()) out_[i] = out_edges(v.members, v.depth);
  }
}

std::vector<VertexIndex> RewiredView::overlapping_sets(const EntitySet& set, std::uint32_t depth) const {
  std::vector<VertexIndex> sources;
  for (const auto& e : set) {
    const auto ev = graph_->find(GraphVertex::entity_vertex(e, depth));
    if (!ev) continue;
    for (auto edge : graph_->memberships(*ev)) sources.push_back(graph_->edge(edge).dst);
  }
  std::sort(sources.begin(), sources.end());
  sources.erase(std::unique(sources.begin(), sources.end()), sources.end());
  return sources;
}

std::vector<ViewEdge> RewiredView::out_edges(const EntitySet& set, std::uint32_t depth) const {
  const auto labels = graph_->labels().size();
  std::map<VertexIndex, LabelWeights> acc;
  for (auto source : overlapping_sets(set, depth)) {
    for (auto edge_index : graph_->out_transitions(source)) {
      const auto& edge = graph_->edge(edge_index);
      auto [it, inserted] = acc.try_emplace(edge.dst, LabelWeights(labels, 0));
      for (std::size_t l = 0; l < labels; ++l) it->second[l] += edge.weights[l];
    }
  }
  std::vector<ViewEdge> out;
  out.reserve(acc.size());
  for (auto& [dst, weights] : acc) out.push_back(ViewEdge{dst, std::move(weights)});
  return out;
}

std::size_t RewiredView::edge_count() const {
  std::size_t n = 0;
  for (const auto& list : out_) n += list.size();
  return n;
}

std::uint64_t view_weight(const ViewEdge& edge, std::optional<std::size_t> label) {
  return label ? edge.weights.at(*label) : edge.total();
}

}  // namespace entgraph
