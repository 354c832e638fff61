#include "entgraph/activation.hpp"

#include <algorithm>

#include <nlohmann/json.hpp>

#include "entgraph/error.hpp"

namespace entgraph {

std::string_view to_string(WeightNormalization mode) {
  return mode == WeightNormalization::out_normalized ? "out-normalized" : "global-max";
}

WeightNormalization parse_weight_normalization(std::string_view name) {
  if (name == "out-normalized") return WeightNormalization::out_normalized;
  if (name == "global-max") return WeightNormalization::global_max;
  throw ParameterError("unknown weight normalization '" + std::string(name) + "'");
}

void ActivationParams::validate() const {
  if (!(firing_threshold >= 0.0 && firing_threshold <= 1.0)) {
    throw ParameterError("firing threshold F must lie in [0, 1]");
  }
  if (!(decay >= 0.0 && decay <= 1.0)) throw ParameterError("decay D must lie in [0, 1]");
}

bool ActivationState::fired(VertexIndex v) const {
  return std::find(fire_order.begin(), fire_order.end(), v) != fire_order.end();
}

double ActivationState::value(VertexIndex v) const {
  auto it = activation.find(v);
  return it == activation.end() ? 0.0 : it->second;
}

ActivationState spread(const RewiredView& view, VertexIndex source, const ActivationParams& params,
                       std::optional<std::string_view> label) {
  params.validate();
  const auto& graph = view.graph();
  if (source >= graph.vertices().size() || !graph.vertex(source).is_set()) {
    throw NotFoundError("activation source is not a set vertex of the graph");
  }
  std::optional<std::size_t> label_index;
  if (label) {
    label_index = graph.label_index(*label);
    if (!label_index) throw ParameterError("graph has no corpus label '" + std::string(*label) + "'");
  }

  double global_max = 0.0;
  if (params.normalization == WeightNormalization::global_max) {
    for (VertexIndex v = 0; v < graph.vertices().size(); ++v) {
      if (!graph.vertex(v).is_set()) continue;
      for (const auto& e : view.out_edges(v)) {
        global_max = std::max(global_max, static_cast<double>(view_weight(e, label_index)));
      }
    }
  }

  ActivationState state;
  state.source = source;
  state.activation[source] = 1.0;

  std::vector<VertexIndex> firing{source};
  std::uint32_t depth = graph.vertex(source).depth;
  while (!firing.empty() && depth < graph.max_depth()) {
    std::map<VertexIndex, double> received;
    for (auto v : firing) {
      state.fire_order.push_back(v);
      const auto edges = view.out_edges(v);
      double denominator = global_max;
      if (params.normalization == WeightNormalization::out_normalized) {
        denominator = 0.0;
        for (const auto& e : edges) denominator += static_cast<double>(view_weight(e, label_index));
      }
      if (denominator <= 0.0) continue;
      const double a = state.activation.at(v);
      for (const auto& e : edges) {
        const auto w = view_weight(e, label_index);
        if (w == 0) continue;
        const double signal = a * (static_cast<double>(w) / denominator) * params.decay;
        if (signal <= 0.0) continue;
        received[e.dst] += signal;
        state.propagation.emplace_back(v, e.dst);
      }
    }
    ++depth;
    firing.clear();
    for (const auto& [v, a] : received) {
      state.activation[v] = a;
      if (a > params.firing_threshold) firing.push_back(v);
    }
  }
  // Vertices still marked to fire at the deepest layer have no successors.
  for (auto v : firing) state.fire_order.push_back(v);
  return state;
}

std::optional<std::size_t> ActivationSubgraph::node_position(VertexIndex v) const {
  auto it = std::lower_bound(nodes.begin(), nodes.end(), v,
                             [](const Node& n, VertexIndex x) { return n.vertex < x; });
  if (it == nodes.end() || it->vertex != v) return std::nullopt;
  return static_cast<std::size_t>(it - nodes.begin());
}

ActivationSubgraph activation_subgraph(const ActivationState& state, double min_radius, double max_radius) {
  if (!(min_radius >= 0.0 && max_radius >= min_radius)) throw ParameterError("invalid radius range");
  ActivationSubgraph sub;
  double peak = 0.0;
  for (const auto& [v, a] : state.activation) peak = std::max(peak, a);
  for (const auto& [v, a] : state.activation) {
    if (a <= 0.0) continue;
    sub.nodes.push_back({v, a, state.fired(v), min_radius + (a / peak) * (max_radius - min_radius)});
  }
  sub.edges = state.propagation;
  std::sort(sub.edges.begin(), sub.edges.end());
  sub.edges.erase(std::unique(sub.edges.begin(), sub.edges.end()), sub.edges.end());
  return sub;
}

nlohmann::json activation_to_json(const EntityGraph& graph, const ActivationState& state,
                                  const ActivationParams& params, std::optional<std::string_view> label) {
  using nlohmann::json;
  json activations = json::array();
  for (const auto& [v, a] : state.activation) {
    activations.push_back({{"vertex_id", vertex_id(graph.vertex(v))}, {"A", a}, {"fired", state.fired(v)}});
  }
  return json{{"version", kActivationFormatVersion},
              {"source", vertex_id(graph.vertex(state.source))},
              {"params",
               {{"F", params.firing_threshold},
                {"D", params.decay},
                {"normalization", to_string(params.normalization)},
                {"label", label ? json(std::string(*label)) : json(nullptr)}}},
              {"activations", std::move(activations)}};
}

}  // namespace entgraph
