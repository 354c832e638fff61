#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "entgraph/entity_graph.hpp"

namespace entgraph {

struct LayoutConfig {
  std::uint32_t iterations_per_depth = 100;
  double column_spacing = 10.0;
  // Entity columns sit this fraction of a column to the left of their set column.
  double entity_column_offset = 0.5;
  double repulsion = 1.0;
  double spring = 1.0;
  // Largest per-iteration move at iteration 0.
  double initial_temperature = 1.0;
  // Ideal vertical separation; a column is this tall per vertex of the fullest column.
  double vertical_unit = 1.0;
  std::uint64_t seed = 0;

  // Throws ParameterError for out-of-range fields.
  void validate() const;
};

struct Point {
  double x = 0.0;
  double y = 0.0;
};

// Aligned with the graph's vertex order.
struct LayoutResult {
  std::vector<Point> positions;
  std::vector<std::uint32_t> lock_iteration;
  std::uint32_t total_iterations = 0;
};

// x position implied by a vertex's column.
double column_x(const GraphVertex& v, const LayoutConfig& config);

// Upper bound on the y move of a vertex at `depth` during `iteration`: global linear
// cooling times the depth window that ramps from 1 to 0 over
// [(s-1)N, sN), s = max(depth, 1). Zero from sN on.
double step_scale(const LayoutConfig& config, std::uint32_t total_iterations, std::uint32_t depth,
                  std::uint32_t iteration);

// Called after every iteration with the magnitude of each vertex's applied move.
using LayoutObserver = std::function<void(std::uint32_t iteration, std::span<const double> steps)>;

// Force-directed placement that moves vertices only along y. Springs follow
// membership and transition edges (strength grows with log(1 + weight)); repulsion
// acts only within a column. Depth windows lock columns left to right, and when a
// payload locks at its lowest depth every other copy of it takes the same y.
LayoutResult compute_layout(const EntityGraph& graph, const LayoutConfig& config,
                            const LayoutObserver& observer = {});

inline constexpr int kLayoutFormatVersion = 1;

nlohmann::json layout_to_json(const EntityGraph& graph, const LayoutResult& layout);
// Throws SchemaError when the document does not cover exactly the graph's vertices.
LayoutResult layout_from_json(const nlohmann::json& doc, const EntityGraph& graph);

}  // namespace entgraph
