#include <cmath>

#include <nlohmann/json.hpp>

#include "doctest.h"
#include "entgraph/activation.hpp"
#include "entgraph/error.hpp"
#include "entgraph/synthetic.hpp"

using namespace entgraph;

namespace {

ConversationPath path(std::initializer_list<EntitySet> steps) { return ConversationPath{std::vector<EntitySet>(steps)}; }

VertexIndex set_at(const EntityGraph& g, const char* name, std::uint32_t depth) {
  auto v = g.find(GraphVertex::set_vertex(EntitySet{std::string_view(name)}, depth));
  REQUIRE(v.has_value());
  return *v;
}

EntityGraph chain_graph() {
  return star_expand(build_graph({{"t", {path({EntitySet{"S"}, EntitySet{"A"}, EntitySet{"B"}, EntitySet{"C"}})}}}, "x"));
}

// S splits evenly into P and Q; each sends 2/5 of its weight to X.
EntityGraph convergent_graph() {
  ThreadPaths paths;
  const auto add = [&](const char* mid, const char* leaf, int copies) {
    for (int i = 0; i < copies; ++i) {
      paths[std::string(mid) + leaf + std::to_string(i)] = {
          path({EntitySet{"S"}, EntitySet{std::string_view(mid)}, EntitySet{std::string_view(leaf)}})};
    }
  };
  add("P", "X", 2);
  add("P", "Y", 3);
  add("Q", "X", 2);
  add("Q", "Z", 3);
  return star_expand(build_graph(paths, "x"));
}

}  // namespace

TEST_SUITE("activation") {
  TEST_CASE("chain halves at every hop and stops at the threshold") {
    const auto g = chain_graph();
    const RewiredView view(g);
    const auto state = spread(view, set_at(g, "S", 0), {0.3, 0.5, WeightNormalization::out_normalized});
    CHECK(state.value(set_at(g, "S", 0)) == 1.0);
    CHECK(state.value(set_at(g, "A", 1)) == 0.5);
    CHECK(state.value(set_at(g, "B", 2)) == 0.25);
    CHECK(state.value(set_at(g, "C", 3)) == 0.0);
    CHECK(state.fired(set_at(g, "A", 1)));
    CHECK_FALSE(state.fired(set_at(g, "B", 2)));
    CHECK(state.activation.size() == 3);
  }

  TEST_CASE("zero decay isolates the source") {
    const auto g = chain_graph();
    const auto state = spread(RewiredView(g), set_at(g, "S", 0), {0.0, 0.0, WeightNormalization::out_normalized});
    CHECK(state.activation.size() == 1);
    CHECK(state.propagation.empty());
    CHECK(state.fire_order == std::vector<VertexIndex>{set_at(g, "S", 0)});
  }

  TEST_CASE("contributions from two parents accumulate") {
    const auto g = convergent_graph();
    const auto state = spread(RewiredView(g), set_at(g, "S", 0), {0.3, 1.0, WeightNormalization::out_normalized});
    CHECK(state.value(set_at(g, "P", 1)) == 0.5);
    CHECK(std::abs(state.value(set_at(g, "X", 2)) - 0.4) <= 1e-12);
    CHECK(state.fired(set_at(g, "X", 2)));
    // 0.5 * 3/5 lands exactly on the threshold, which does not fire
    CHECK(state.value(set_at(g, "Y", 2)) == 0.3);
    CHECK_FALSE(state.fired(set_at(g, "Y", 2)));
  }

  TEST_CASE("full threshold stops propagation at the first hop") {
    const auto g = chain_graph();
    const auto state = spread(RewiredView(g), set_at(g, "S", 0), {1.0, 1.0, WeightNormalization::out_normalized});
    CHECK(state.value(set_at(g, "A", 1)) == 1.0);
    CHECK_FALSE(state.fired(set_at(g, "A", 1)));
    CHECK(state.fire_order.size() == 1);
  }

  TEST_CASE("global-max scaling divides by the heaviest edge") {
    const auto g = convergent_graph();
    const auto state = spread(RewiredView(g), set_at(g, "S", 0), {0.0, 1.0, WeightNormalization::global_max});
    // heaviest rewired edge is S->P (5); P->Y carries 3
    CHECK(state.value(set_at(g, "P", 1)) == 1.0);
    CHECK(state.value(set_at(g, "Y", 2)) == doctest::Approx(0.6));
  }

  TEST_CASE("fire-once and ceiling hold on random graphs") {
    for (std::uint64_t seed = 0; seed < 15; ++seed) {
      RandomCorpusConfig cfg;
      cfg.threads = 25;
      cfg.seed = seed;
      auto data = generate_random_corpus(cfg);
      const auto g = star_expand(build_graph(corpus_paths(data.corpus, data.entity_sets), "x"));
      const RewiredView view(g);
      for (VertexIndex src : g.vertices_at(0, VertexKind::set)) {
        const ActivationParams params{0.05, 0.9, WeightNormalization::out_normalized};
        const auto state = spread(view, src, params);
        std::set<VertexIndex> fired(state.fire_order.begin(), state.fire_order.end());
        CHECK(fired.size() == state.fire_order.size());
        std::map<std::uint32_t, double> fired_mass;
        for (auto v : state.fire_order) fired_mass[g.vertex(v).depth] += state.value(v);
        for (const auto& [v, a] : state.activation) {
          CHECK(a >= 0.0);
          if (v == src) continue;
          CHECK(a <= params.decay * fired_mass[g.vertex(v).depth - 1] + 1e-12);
        }
        for (const auto& [from, to] : state.propagation) {
          CHECK(fired.contains(from));
          CHECK(g.vertex(to).depth == g.vertex(from).depth + 1);
        }
        CHECK(spread(view, src, params).activation == state.activation);
      }
    }
  }

  TEST_CASE("subgraph keeps activated vertices and propagation edges") {
    const auto g = chain_graph();
    const auto state = spread(RewiredView(g), set_at(g, "S", 0), {0.3, 0.5, WeightNormalization::out_normalized});
    const auto sub = activation_subgraph(state);
    REQUIRE(sub.nodes.size() == 3);
    CHECK(sub.edges.size() == 2);
    const auto radius = [&](const char* name, std::uint32_t d) {
      return sub.nodes[*sub.node_position(set_at(g, name, d))].radius;
    };
    CHECK(radius("S", 0) == 12.0);
    CHECK(radius("S", 0) > radius("A", 1));
    CHECK(radius("A", 1) > radius("B", 2));
    CHECK_FALSE(sub.node_position(set_at(g, "C", 3)).has_value());

    const auto lone = spread(RewiredView(g), set_at(g, "S", 0), {0.3, 0.0, WeightNormalization::out_normalized});
    CHECK(activation_subgraph(lone).nodes.size() == 1);
  }

  TEST_CASE("bad parameters and sources are rejected") {
    const auto g = chain_graph();
    const RewiredView view(g);
    CHECK_THROWS_AS(spread(view, set_at(g, "S", 0), {1.5, 0.5, WeightNormalization::out_normalized}), ParameterError);
    CHECK_THROWS_AS(spread(view, set_at(g, "S", 0), {0.5, -0.1, WeightNormalization::out_normalized}), ParameterError);
    const auto entity = g.find(GraphVertex::entity_vertex(EntityId("S"), 0));
    CHECK_THROWS_AS(spread(view, *entity, {}), NotFoundError);
    CHECK_THROWS_AS(spread(view, 100000, {}), NotFoundError);
    CHECK_THROWS_AS(spread(view, set_at(g, "S", 0), {}, "other"), ParameterError);
    CHECK_THROWS_AS(parse_weight_normalization("raw"), ParameterError);
  }

  TEST_CASE("activation documents name vertices by id") {
    const auto g = chain_graph();
    const auto state = spread(RewiredView(g), set_at(g, "S", 0), {0.3, 0.5, WeightNormalization::out_normalized});
    const auto doc = activation_to_json(g, state, {0.3, 0.5, WeightNormalization::out_normalized}, std::nullopt);
    CHECK(doc["source"] == "s:0:S");
    CHECK(doc["activations"].size() == 3);
    CHECK(doc["params"]["normalization"] == "out-normalized");
  }
}
