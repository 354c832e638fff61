#include <set>

#include <nlohmann/json.hpp>

#include "entgraph/entity_graph.hpp"
#include "entgraph/error.hpp"

namespace entgraph {

using nlohmann::json;

namespace {

json label_weights_to_json(std::span<const std::string> labels, const LabelWeights& w) {
  json out = json::object();
  for (std::size_t l = 0; l < labels.size(); ++l) {
    if (w[l] > 0) out[labels[l]] = w[l];
  }
  return out;
}

const json& member(const json& obj, const char* key) {
  auto it = obj.find(key);
  if (it == obj.end()) throw SchemaError(std::string("missing field '") + key + "'");
  return *it;
}

template <typename Fn>
void for_each_weight(const json& weights, Fn&& fn) {
  if (!weights.is_object()) throw SchemaError("weights must be an object");
  for (auto it = weights.begin(); it != weights.end(); ++it) {
    if (!it->is_number_unsigned() || it->get<std::uint64_t>() == 0) {
      throw SchemaError("weight for label '" + it.key() + "' must be a positive integer");
    }
    fn(it.key(), it->get<std::uint64_t>());
  }
}

}  // namespace

json graph_to_json(const EntityGraph& graph) {
  json vertices = json::array();
  for (VertexIndex i = 0; i < graph.vertices().size(); ++i) {
    const auto& v = graph.vertex(i);
    json ents = json::array();
    for (const auto& e : v.members) ents.push_back(e.str());
    json entry = {{"id", vertex_id(v)},
                  {"kind", to_string(v.kind)},
                  {"depth", v.depth},
                  {"entities", std::move(ents)}};
    if (v.is_set()) entry["occurrences"] = label_weights_to_json(graph.labels(), graph.occurrences(i));
    vertices.push_back(std::move(entry));
  }
  json edges = json::array();
  for (const auto& e : graph.edges()) {
    edges.push_back({{"src", vertex_id(graph.vertex(e.src))},
                     {"dst", vertex_id(graph.vertex(e.dst))},
                     {"kind", to_string(e.kind)},
                     {"weights", label_weights_to_json(graph.labels(), e.weights)}});
  }
  return json{{"version", kGraphFormatVersion},
              {"labels", graph.labels()},
              {"max_depth", graph.max_depth()},
              {"expanded", graph.expanded()},
              {"vertices", std::move(vertices)},
              {"edges", std::move(edges)}};
}

namespace {

EntityGraph parse_graph(const json& doc) {
  if (!doc.is_object()) throw SchemaError("graph document must be an object");
  const auto& version = member(doc, "version");
  if (!version.is_number_integer() || version.get<int>() != kGraphFormatVersion) {
    throw SchemaError("unsupported graph version");
  }
  const auto& labels_json = member(doc, "labels");
  if (!labels_json.is_array()) throw SchemaError("'labels' must be an array");
  std::vector<std::string> labels;
  for (const auto& l : labels_json) {
    if (!l.is_string()) throw SchemaError("labels must be strings");
    labels.push_back(l.get<std::string>());
  }
  GraphBuilder builder(labels);
  const auto label_of = [&](const std::string& name) {
    for (std::size_t i = 0; i < labels.size(); ++i) {
      if (labels[i] == name) return i;
    }
    throw SchemaError("weight refers to undeclared label '" + name + "'");
  };

  std::set<GraphVertex> declared;
  const auto& vertices = member(doc, "vertices");
  if (!vertices.is_array()) throw SchemaError("'vertices' must be an array");
  for (const auto& entry : vertices) {
    const auto& id = member(entry, "id");
    if (!id.is_string()) throw SchemaError("vertex id must be a string");
    const auto v = parse_vertex_id(id.get_ref<const std::string&>());
    if (member(entry, "kind") != to_string(v.kind) || member(entry, "depth") != v.depth) {
      throw SchemaError("vertex " + id.get<std::string>() + " fields disagree with its id");
    }
    if (!declared.insert(v).second) throw SchemaError("duplicate vertex " + id.get<std::string>());
    builder.add_vertex(v);
    if (auto occ = entry.find("occurrences"); occ != entry.end()) {
      for_each_weight(*occ, [&](const std::string& l, std::uint64_t n) {
        builder.add_occurrences(v, label_of(l), n);
      });
    }
  }

  const auto& edges = member(doc, "edges");
  if (!edges.is_array()) throw SchemaError("'edges' must be an array");
  for (const auto& entry : edges) {
    const auto src = parse_vertex_id(member(entry, "src").get<std::string>());
    const auto dst = parse_vertex_id(member(entry, "dst").get<std::string>());
    if (!declared.contains(src) || !declared.contains(dst)) {
      throw SchemaError("edge " + vertex_id(src) + " -> " + vertex_id(dst) + " references an unknown vertex");
    }
    const auto& kind_name = member(entry, "kind");
    EdgeKind kind;
    if (kind_name == "transition") {
      kind = EdgeKind::transition;
    } else if (kind_name == "membership") {
      kind = EdgeKind::membership;
    } else {
      throw SchemaError("unknown edge kind");
    }
    bool any = false;
    for_each_weight(member(entry, "weights"), [&](const std::string& l, std::uint64_t w) {
      builder.add_edge(src, dst, kind, label_of(l), w);
      any = true;
    });
    if (!any) throw SchemaError("edge " + vertex_id(src) + " -> " + vertex_id(dst) + " has no weight");
  }

  if (member(doc, "expanded").get<bool>()) builder.mark_expanded();
  auto graph = std::move(builder).finish();
  if (member(doc, "max_depth") != graph.max_depth()) throw SchemaError("'max_depth' disagrees with vertices");
  return graph;
}

}  // namespace

EntityGraph graph_from_json(const json& doc) {
  try {
    return parse_graph(doc);
  } catch (const json::exception& e) {
    throw SchemaError(std::string("graph document: ") + e.what());
  }
}

}  // namespace entgraph
