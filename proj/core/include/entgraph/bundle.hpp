#pragma once

#include <optional>

#include <nlohmann/json_fwd.hpp>

#include "entgraph/layout.hpp"
#include "entgraph/rewire.hpp"

namespace entgraph {

// Relative strength of a transition in corpus a versus corpus b, from each corpus's
// out-normalized transition probability: p_a / (p_a + p_b). nullopt when both are zero.
std::optional<double> compute_blend(double p_a, double p_b);

// p_a and p_b for one rewired edge: its weight under each label divided by the
// source's total out-weight under that label (0 when the source has none).
std::pair<double, double> transition_probabilities(const RewiredView& view, VertexIndex src,
                                                   const ViewEdge& edge, std::size_t label_a,
                                                   std::size_t label_b);

// The same ratio as compute_blend(transition_probabilities(...)), evaluated on the
// integer weights so that it is exact whenever the ratio is representable.
std::optional<double> edge_blend(const RewiredView& view, VertexIndex src, const ViewEdge& edge,
                                 std::size_t label_a, std::size_t label_b);

inline constexpr int kBundleFormatVersion = 1;

// Single-file viewer document over the set vertices and rewired set-level links.
// Entity vertices are not emitted. Link opacity is log(1 + w) / log(1 + w_max);
// links carry a blend value exactly when the graph has two labels.
// `activation` is a document produced by activation_to_json. Throws SchemaError when
// the layout does not belong to the graph.
nlohmann::json export_bundle(const RewiredView& view, const LayoutResult& layout,
                             const nlohmann::json* activation = nullptr);

// Structural checks on a bundle; throws SchemaError describing the first violation.
void validate_bundle(const nlohmann::json& bundle);

}  // namespace entgraph
