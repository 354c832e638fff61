#include "entgraph/layout.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include <nlohmann/json.hpp>

#include "entgraph/error.hpp"
#include "entgraph/random.hpp"

namespace entgraph {

void LayoutConfig::validate() const {
  if (iterations_per_depth == 0) throw ParameterError("iterations_per_depth must be positive");
  if (!(column_spacing > 0.0)) throw ParameterError("column_spacing must be positive");
  if (!(entity_column_offset > 0.0 && entity_column_offset < 1.0)) {
    throw ParameterError("entity_column_offset must lie in (0, 1)");
  }
  if (!(repulsion > 0.0) || !(spring > 0.0)) throw ParameterError("force strengths must be positive");
  if (!(initial_temperature > 0.0)) throw ParameterError("initial_temperature must be positive");
  if (!(vertical_unit > 0.0)) throw ParameterError("vertical_unit must be positive");
}

double column_x(const GraphVertex& v, const LayoutConfig& config) {
  const auto depth = static_cast<double>(v.depth);
  return v.is_set() ? depth * config.column_spacing
                    : (depth - config.entity_column_offset) * config.column_spacing;
}

namespace {

std::uint32_t schedule_depth(std::uint32_t depth) { return std::max<std::uint32_t>(depth, 1); }

}  // namespace

double step_scale(const LayoutConfig& config, std::uint32_t total_iterations, std::uint32_t depth,
                  std::uint32_t iteration) {
  const auto n = config.iterations_per_depth;
  const auto s = schedule_depth(depth);
  const auto window_end = s * n;
  if (iteration >= window_end || iteration >= total_iterations) return 0.0;
  const double cooling = config.initial_temperature *
                         (1.0 - static_cast<double>(iteration) / static_cast<double>(total_iterations));
  const auto window_start = (s - 1) * n;
  if (iteration < window_start) return cooling;
  return cooling * static_cast<double>(window_end - iteration) / static_cast<double>(n);
}

LayoutResult compute_layout(const EntityGraph& graph, const LayoutConfig& config, const LayoutObserver& observer) {
  config.validate();
  const auto n = graph.vertices().size();
  LayoutResult result;
  result.total_iterations = config.iterations_per_depth * std::max<std::uint32_t>(graph.max_depth(), 1);
  result.positions.resize(n);
  result.lock_iteration.assign(n, 0);
  if (n == 0) return result;

  // Columns keyed by x order: entity column of depth d, then set column of depth d.
  std::map<std::pair<std::uint32_t, int>, std::vector<VertexIndex>> columns;
  for (VertexIndex i = 0; i < n; ++i) {
    const auto& v = graph.vertex(i);
    columns[{v.depth, v.is_set() ? 1 : 0}].push_back(i);
  }
  std::size_t tallest = 0;
  for (const auto& [key, members] : columns) tallest = std::max(tallest, members.size());
  const double height = static_cast<double>(tallest) * config.vertical_unit;

  Rng rng(config.seed);
  std::vector<double> y(n);
  for (VertexIndex i = 0; i < n; ++i) {
    result.positions[i].x = column_x(graph.vertex(i), config);
    y[i] = rng.uniform(0.0, height);
  }

  // Copies of one payload across depths, lowest depth first (vertex order is depth-major
  // within a kind). The map orders payloads lexicographically.
  std::map<std::pair<VertexKind, EntitySet>, std::vector<VertexIndex>> payloads;
  for (VertexIndex i = 0; i < n; ++i) {
    const auto& v = graph.vertex(i);
    payloads[{v.kind, v.members}].push_back(i);
  }

  struct Spring {
    VertexIndex a, b;
    double dx, strength;
  };
  std::vector<Spring> springs;
  springs.reserve(graph.edges().size());
  for (const auto& e : graph.edges()) {
    springs.push_back(Spring{e.src, e.dst, result.positions[e.src].x - result.positions[e.dst].x,
                             config.spring * std::log1p(static_cast<double>(e.total()))});
  }

  const double k = config.vertical_unit;
  const double min_gap = 1e-3 * k;
  std::vector<char> locked(n, 0);
  std::vector<double> force(n), steps(n);

  for (std::uint32_t t = 0; t < result.total_iterations; ++t) {
    std::fill(force.begin(), force.end(), 0.0);

    for (const auto& [key, members] : columns) {
      const bool active = std::any_of(members.begin(), members.end(), [&](VertexIndex i) { return !locked[i]; });
      if (!active) continue;
      for (std::size_t p = 0; p < members.size(); ++p) {
        for (std::size_t q = p + 1; q < members.size(); ++q) {
          const auto a = members[p];
          const auto b = members[q];
          double dy = y[a] - y[b];
          // Coincident vertices are pushed apart in index order.
          if (std::abs(dy) < min_gap) dy = min_gap;
          const double f = config.repulsion * k * k / dy;
          force[a] += f;
          force[b] -= f;
        }
      }
    }

    for (const auto& s : springs) {
      if (locked[s.a] && locked[s.b]) continue;
      const double dy = y[s.a] - y[s.b];
      const double dist = std::sqrt(s.dx * s.dx + dy * dy);
      const double f = s.strength * dist * dy / k;
      force[s.a] -= f;
      force[s.b] += f;
    }

    for (VertexIndex i = 0; i < n; ++i) {
      steps[i] = 0.0;
      if (locked[i]) continue;
      const double limit = step_scale(config, result.total_iterations, graph.vertex(i).depth, t);
      const double step = std::clamp(force[i], -limit, limit);
      y[i] += step;
      steps[i] = std::abs(step);
    }
    if (observer) observer(t, steps);

    const auto now = t + 1;
    for (VertexIndex i = 0; i < n; ++i) {
      if (!locked[i] && schedule_depth(graph.vertex(i).depth) * config.iterations_per_depth == now) {
        locked[i] = 1;
        result.lock_iteration[i] = now;
      }
    }
    for (const auto& [payload, copies] : payloads) {
      const auto first = copies.front();
      if (copies.size() < 2 || result.lock_iteration[first] != now) continue;
      for (std::size_t c = 1; c < copies.size(); ++c) {
        const auto other = copies[c];
        if (locked[other] && result.lock_iteration[other] != now) continue;
        y[other] = y[first];
        locked[other] = 1;
        result.lock_iteration[other] = now;
      }
    }
  }

  for (VertexIndex i = 0; i < n; ++i) result.positions[i].y = y[i];
  return result;
}

nlohmann::json layout_to_json(const EntityGraph& graph, const LayoutResult& layout) {
  using nlohmann::json;
  if (layout.positions.size() != graph.vertices().size()) {
    throw SchemaError("layout does not match the graph's vertex count");
  }
  json vertices = json::array();
  for (VertexIndex i = 0; i < graph.vertices().size(); ++i) {
    vertices.push_back({{"vertex_id", vertex_id(graph.vertex(i))},
                        {"x", layout.positions[i].x},
                        {"y", layout.positions[i].y},
                        {"lock_iteration", layout.lock_iteration[i]}});
  }
  return json{{"version", kLayoutFormatVersion},
              {"total_iterations", layout.total_iterations},
              {"vertices", std::move(vertices)}};
}

LayoutResult layout_from_json(const nlohmann::json& doc, const EntityGraph& graph) {
  try {
    if (doc.at("version").get<int>() != kLayoutFormatVersion) throw SchemaError("unsupported layout version");
    const auto& vertices = doc.at("vertices");
    if (!vertices.is_array() || vertices.size() != graph.vertices().size()) {
      throw SchemaError("layout does not match the graph: vertex counts differ");
    }
    LayoutResult layout;
    layout.total_iterations = doc.at("total_iterations").get<std::uint32_t>();
    layout.positions.resize(graph.vertices().size());
    layout.lock_iteration.resize(graph.vertices().size());
    std::vector<char> seen(graph.vertices().size(), 0);
    for (const auto& entry : vertices) {
      const auto id = entry.at("vertex_id").get<std::string>();
      const auto index = graph.find(parse_vertex_id(id));
      if (!index) throw SchemaError("layout does not match the graph: unknown vertex " + id);
      if (seen[*index]) throw SchemaError("layout lists vertex " + id + " twice");
      seen[*index] = 1;
      layout.positions[*index] = Point{entry.at("x").get<double>(), entry.at("y").get<double>()};
      layout.lock_iteration[*index] = entry.at("lock_iteration").get<std::uint32_t>();
    }
    return layout;
  } catch (const nlohmann::json::exception& e) {
    throw SchemaError(std::string("layout document: ") + e.what());
  }
}

}  // namespace entgraph
