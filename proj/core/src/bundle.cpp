#include "entgraph/bundle.hpp"

#include <cmath>
#include <map>
#include <set>

#include <nlohmann/json.hpp>

#include "entgraph/error.hpp"

namespace entgraph {

using nlohmann::json;

std::optional<double> compute_blend(double p_a, double p_b) {
  if (p_a < 0.0 || p_b < 0.0) throw ParameterError("transition probabilities must be non-negative");
  if (p_a + p_b <= 0.0) return std::nullopt;
  return p_a / (p_a + p_b);
}

std::pair<double, double> transition_probabilities(const RewiredView& view, VertexIndex src,
                                                   const ViewEdge& edge, std::size_t label_a,
                                                   std::size_t label_b) {
  double out_a = 0.0;
  double out_b = 0.0;
  for (const auto& e : view.out_edges(src)) {
    out_a += static_cast<double>(e.weights[label_a]);
    out_b += static_cast<double>(e.weights[label_b]);
  }
  const double p_a = out_a > 0.0 ? static_cast<double>(edge.weights[label_a]) / out_a : 0.0;
  const double p_b = out_b > 0.0 ? static_cast<double>(edge.weights[label_b]) / out_b : 0.0;
  return {p_a, p_b};
}

std::optional<double> edge_blend(const RewiredView& view, VertexIndex src, const ViewEdge& edge,
                                 std::size_t label_a, std::size_t label_b) {
  std::uint64_t out_a = 0;
  std::uint64_t out_b = 0;
  for (const auto& e : view.out_edges(src)) {
    out_a += e.weights[label_a];
    out_b += e.weights[label_b];
  }
  const std::uint64_t w_a = out_a > 0 ? edge.weights[label_a] : 0;
  const std::uint64_t w_b = out_b > 0 ? edge.weights[label_b] : 0;
  if (w_a == 0 && w_b == 0) return std::nullopt;
  if (w_b == 0) return 1.0;
  if (w_a == 0) return 0.0;
  // p_a / (p_a + p_b) = w_a out_b / (w_a out_b + w_b out_a)
  const long double num = static_cast<long double>(w_a) * static_cast<long double>(out_b);
  const long double den = num + static_cast<long double>(w_b) * static_cast<long double>(out_a);
  return static_cast<double>(num / den);
}

json export_bundle(const RewiredView& view, const LayoutResult& layout, const json* activation) {
  const auto& graph = view.graph();
  if (layout.positions.size() != graph.vertices().size() ||
      layout.lock_iteration.size() != graph.vertices().size()) {
    throw SchemaError("layout was not computed on this graph");
  }
  const auto labels = graph.labels();

  json nodes = json::array();
  std::set<std::string> node_ids;
  for (VertexIndex i = 0; i < graph.vertices().size(); ++i) {
    const auto& v = graph.vertex(i);
    if (!v.is_set()) continue;
    json entities = json::array();
    std::string text;
    for (const auto& e : v.members) {
      entities.push_back(e.str());
      if (!text.empty()) text += ", ";
      text += e.str();
    }
    json occurrences = json::object();
    for (std::size_t l = 0; l < labels.size(); ++l) occurrences[labels[l]] = graph.occurrences(i)[l];
    auto id = vertex_id(v);
    node_ids.insert(id);
    nodes.push_back({{"id", std::move(id)},
                     {"kind", "set"},
                     {"depth", v.depth},
                     {"x", layout.positions[i].x},
                     {"y", layout.positions[i].y},
                     {"label", std::move(text)},
                     {"entities", std::move(entities)},
                     {"occurrences", std::move(occurrences)},
                     {"occurrence", total_weight(graph.occurrences(i))}});
  }

  std::uint64_t heaviest = 0;
  for (VertexIndex i = 0; i < graph.vertices().size(); ++i) {
    if (!graph.vertex(i).is_set()) continue;
    for (const auto& e : view.out_edges(i)) heaviest = std::max(heaviest, e.total());
  }
  const bool blended = labels.size() == 2;
  const double log_max = std::log1p(static_cast<double>(heaviest));

  json links = json::array();
  for (VertexIndex i = 0; i < graph.vertices().size(); ++i) {
    if (!graph.vertex(i).is_set()) continue;
    for (const auto& e : view.out_edges(i)) {
      json weights = json::object();
      for (std::size_t l = 0; l < labels.size(); ++l) weights[labels[l]] = e.weights[l];
      json link = {{"src", vertex_id(graph.vertex(i))},
                   {"dst", vertex_id(graph.vertex(e.dst))},
                   {"weights", std::move(weights)},
                   {"opacity", std::log1p(static_cast<double>(e.total())) / log_max}};
      if (blended) {
        const auto blend = edge_blend(view, i, e, 0, 1);
        if (!blend) continue;
        link["blend"] = *blend;
      }
      links.push_back(std::move(link));
    }
  }

  json bundle = {{"meta", {{"version", kBundleFormatVersion}, {"labels", labels}, {"max_depth", graph.max_depth()}}},
                 {"nodes", std::move(nodes)},
                 {"links", std::move(links)}};
  if (activation != nullptr && !activation->is_null()) {
    const auto& acts = activation->at("activations");
    if (!node_ids.contains(activation->at("source").get<std::string>())) {
      throw SchemaError("activation source is not a node of this graph");
    }
    for (const auto& a : acts) {
      if (!node_ids.contains(a.at("vertex_id").get<std::string>())) {
        throw SchemaError("activation refers to a vertex outside this graph");
      }
    }
    bundle["activation"] = *activation;
  }
  validate_bundle(bundle);
  return bundle;
}

namespace {

void require(bool ok, const std::string& what) {
  if (!ok) throw SchemaError("bundle: " + what);
}

bool finite_number(const json& j) { return j.is_number() && std::isfinite(j.get<double>()); }

void check_bundle(const json& bundle) {
  require(bundle.is_object(), "document must be an object");
  const auto& meta = bundle.at("meta");
  require(meta.at("version") == kBundleFormatVersion, "unsupported version");
  const auto& labels_json = meta.at("labels");
  require(labels_json.is_array() && !labels_json.empty(), "meta.labels must be a non-empty array");
  std::set<std::string> labels;
  for (const auto& l : labels_json) {
    require(l.is_string(), "labels must be strings");
    require(labels.insert(l.get<std::string>()).second, "duplicate label");
  }
  require(meta.at("max_depth").is_number_unsigned(), "meta.max_depth must be a non-negative integer");
  const auto max_depth = meta.at("max_depth").get<std::uint64_t>();

  std::map<std::string, std::uint64_t> depth_of;
  for (const auto& node : bundle.at("nodes")) {
    const auto id = node.at("id").get<std::string>();
    require(node.at("kind") == "set", "node " + id + " is not a set node");
    require(node.at("depth").is_number_unsigned(), "node " + id + " has a bad depth");
    const auto depth = node.at("depth").get<std::uint64_t>();
    require(depth <= max_depth, "node " + id + " is deeper than max_depth");
    require(finite_number(node.at("x")) && finite_number(node.at("y")), "node " + id + " has a bad position");
    require(node.at("label").is_string(), "node " + id + " has no label");
    require(node.at("entities").is_array() && !node.at("entities").empty(), "node " + id + " has no entities");
    require(node.at("occurrence").is_number_unsigned(), "node " + id + " has a bad occurrence count");
    const auto parsed = parse_vertex_id(id);
    require(parsed.is_set() && parsed.depth == depth, "node " + id + " disagrees with its id");
    require(depth_of.emplace(id, depth).second, "duplicate node " + id);
  }

  std::set<std::pair<std::string, std::string>> seen_links;
  for (const auto& link : bundle.at("links")) {
    const auto src = link.at("src").get<std::string>();
    const auto dst = link.at("dst").get<std::string>();
    const auto name = src + " -> " + dst;
    require(depth_of.contains(src) && depth_of.contains(dst), "link " + name + " has a missing endpoint");
    require(depth_of[dst] == depth_of[src] + 1, "link " + name + " skips a depth");
    require(seen_links.emplace(src, dst).second, "duplicate link " + name);
    std::uint64_t total = 0;
    for (auto it = link.at("weights").begin(); it != link.at("weights").end(); ++it) {
      require(labels.contains(it.key()), "link " + name + " uses undeclared label " + it.key());
      require(it->is_number_unsigned(), "link " + name + " has a bad weight");
      total += it->get<std::uint64_t>();
    }
    require(total > 0, "link " + name + " has zero weight");
    const auto& opacity = link.at("opacity");
    require(finite_number(opacity) && opacity.get<double>() > 0.0 && opacity.get<double>() <= 1.0,
            "link " + name + " opacity outside (0, 1]");
    const bool has_blend = link.contains("blend");
    require(has_blend == (labels.size() == 2), "link " + name + " blend presence does not match label count");
    if (has_blend) {
      const auto& b = link.at("blend");
      require(finite_number(b) && b.get<double>() >= 0.0 && b.get<double>() <= 1.0,
              "link " + name + " blend outside [0, 1]");
    }
  }

  if (auto it = bundle.find("activation"); it != bundle.end()) {
    const auto& act = *it;
    require(depth_of.contains(act.at("source").get<std::string>()), "activation source is not a node");
    const auto& params = act.at("params");
    for (const char* key : {"F", "D"}) {
      const auto& p = params.at(key);
      require(finite_number(p) && p.get<double>() >= 0.0 && p.get<double>() <= 1.0,
              std::string("activation parameter ") + key + " outside [0, 1]");
    }
    for (const auto& a : act.at("activations")) {
      require(depth_of.contains(a.at("vertex_id").get<std::string>()), "activation vertex is not a node");
      require(finite_number(a.at("A")) && a.at("A").get<double>() >= 0.0, "activation value is invalid");
      require(a.at("fired").is_boolean(), "activation 'fired' must be boolean");
    }
  }
}

}  // namespace

void validate_bundle(const json& bundle) {
  try {
    check_bundle(bundle);
  } catch (const json::exception& e) {
    throw SchemaError(std::string("bundle: ") + e.what());
  }
}

}  // namespace entgraph
