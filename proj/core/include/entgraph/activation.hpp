#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "entgraph/rewire.hpp"

namespace entgraph {

enum class WeightNormalization {
  out_normalized,  // each edge divided by its source's total out-weight
  global_max,      // each edge divided by the heaviest edge in the view
};

std::string_view to_string(WeightNormalization mode);
WeightNormalization parse_weight_normalization(std::string_view name);

struct ActivationParams {
  double firing_threshold = 0.5;  // F
  double decay = 0.5;             // D
  WeightNormalization normalization = WeightNormalization::out_normalized;

  // Throws ParameterError unless F and D lie in [0, 1].
  void validate() const;
};

struct ActivationState {
  VertexIndex source = 0;
  std::map<VertexIndex, double> activation;  // vertices that received a positive signal, plus the source
  std::vector<VertexIndex> fire_order;       // each vertex at most once
  std::vector<std::pair<VertexIndex, VertexIndex>> propagation;  // (fired source, receiver) per signal sent

  bool fired(VertexIndex v) const;
  double value(VertexIndex v) const;
};

// Level-synchronous spreading activation over the rewired set-level view. The
// source fires with A = 1; a firing vertex sends A * w~ * D along each outgoing
// edge; once a depth has collected all of its input, its vertices with A > F fire.
// `label` restricts weights to one corpus; otherwise weights are summed.
// Throws NotFoundError when `source` is not a set vertex of the view.
ActivationState spread(const RewiredView& view, VertexIndex source, const ActivationParams& params,
                       std::optional<std::string_view> label = std::nullopt);

struct ActivationSubgraph {
  struct Node {
    VertexIndex vertex;
    double activation;
    bool fired;
    double radius;
  };
  std::vector<Node> nodes;                                   // vertex order
  std::vector<std::pair<VertexIndex, VertexIndex>> edges;    // sorted, unique

  std::optional<std::size_t> node_position(VertexIndex v) const;
};

// The activated part of the view: every vertex with A > 0 and every edge along
// which signal travelled. Radii grow linearly with A / max(A) from min to max.
ActivationSubgraph activation_subgraph(const ActivationState& state, double min_radius = 2.0,
                                       double max_radius = 12.0);

inline constexpr int kActivationFormatVersion = 1;

nlohmann::json activation_to_json(const EntityGraph& graph, const ActivationState& state,
                                  const ActivationParams& params, std::optional<std::string_view> label);

}  // namespace entgraph
