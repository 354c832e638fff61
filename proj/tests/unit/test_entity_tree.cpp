#include <algorithm>

#include "doctest.h"
#include "entgraph/corpus.hpp"
#include "entgraph/entity_tree.hpp"

using namespace entgraph;

namespace {

Comment comment(std::string id, std::optional<std::string> parent) {
  Comment c;
  c.id = std::move(id);
  c.parent_id = std::move(parent);
  c.thread_id = "T";
  c.is_root = !c.parent_id;
  return c;
}

// root r; children a, b; a has children a1, a2
Thread figure_shape() {
  return Thread::assemble("T", {comment("r", std::nullopt), comment("a", "r"), comment("b", "r"),
                                comment("a1", "a"), comment("a2", "a")});
}

EntitySetMap figure_sets() {
  return {{"r", EntitySet{"Donald_Trump", "China"}},
          {"a", EntitySet{"China"}},
          {"b", EntitySet{"Donald_Trump"}},
          {"a1", EntitySet{"Xi_Jinping"}},
          {"a2", EntitySet{"China", "Tariff"}}};
}

}  // namespace

TEST_SUITE("entity_tree") {
  TEST_CASE("two-level reply shape gives a five-node tree") {
    const auto tree = build_entity_tree(figure_shape(), figure_sets());
    REQUIRE(tree.size() == 5);
    CHECK(tree.node(0).comment_id == "r");
    CHECK(tree.node(0).depth == 0);
    CHECK(tree.node(0).children.size() == 2);
    for (const auto& n : tree.nodes()) {
      for (auto c : n.children) CHECK(tree.node(c).depth == n.depth + 1);
    }
  }

  TEST_CASE("empty root set gives an empty tree") {
    auto sets = figure_sets();
    sets.erase("r");
    CHECK(build_entity_tree(figure_shape(), sets).empty());
    sets["r"] = EntitySet{};
    CHECK(build_entity_tree(figure_shape(), sets).empty());
  }

  TEST_CASE("empty set at depth one truncates a chain to its root") {
    auto chain = Thread::assemble("T", {comment("r", std::nullopt), comment("c1", "r"), comment("c2", "c1"),
                                        comment("c3", "c2")});
    EntitySetMap sets{{"r", EntitySet{"A"}}, {"c1", EntitySet{}}, {"c2", EntitySet{"B"}}, {"c3", EntitySet{"C"}}};
    auto tree = build_entity_tree(chain, sets);
    CHECK(tree.size() == 1);
    CHECK(extract_paths(tree, 1).size() == 1);
  }

  TEST_CASE("one path per leaf, short paths dropped") {
    const auto tree = build_entity_tree(figure_shape(), figure_sets());
    const auto all = extract_paths(tree, 1);
    REQUIRE(all.size() == 3);
    std::vector<std::size_t> lengths;
    for (const auto& p : all) lengths.push_back(p.size());
    std::sort(lengths.begin(), lengths.end());
    CHECK(lengths == std::vector<std::size_t>{2, 3, 3});

    const auto kept = extract_paths(tree);
    REQUIRE(kept.size() == 2);
    CHECK(kept[0].steps == std::vector<EntitySet>{EntitySet{"China", "Donald_Trump"}, EntitySet{"China"},
                                                   EntitySet{"Xi_Jinping"}});
  }

  TEST_CASE("single-node tree has no paths of length three") {
    auto solo = Thread::assemble("T", {comment("r", std::nullopt)});
    const auto tree = build_entity_tree(solo, {{"r", EntitySet{"A"}}});
    CHECK(extract_paths(tree).empty());
    CHECK(extract_paths(EntityTree{}).empty());
  }

  TEST_CASE("perfect binary trees give one full-length path per leaf") {
    for (int height : {2, 3}) {
      std::vector<Comment> comments{comment("n", std::nullopt)};
      EntitySetMap sets{{"n", EntitySet{"R"}}};
      std::vector<std::string> frontier{"n"};
      for (int d = 1; d <= height; ++d) {
        std::vector<std::string> next;
        for (const auto& p : frontier) {
          for (const char* side : {"0", "1"}) {
            auto id = p + side;
            comments.push_back(comment(id, p));
            sets[id] = EntitySet{std::string_view("E" + std::to_string(d))};
            next.push_back(id);
          }
        }
        frontier = std::move(next);
      }
      const auto paths = extract_paths(build_entity_tree(Thread::assemble("T", comments), sets));
      CHECK(paths.size() == (std::size_t{1} << height));
      for (const auto& p : paths) CHECK(p.size() == static_cast<std::size_t>(height + 1));
    }
  }

  TEST_CASE("corpus_paths omits threads without long paths") {
    auto u = comment("u", std::nullopt);
    auto v = comment("v", "u");
    u.thread_id = v.thread_id = "U";
    Corpus corpus("x", {figure_shape(), Thread::assemble("U", {u, v})});
    auto sets = figure_sets();
    sets["u"] = EntitySet{"A"};
    sets["v"] = EntitySet{"B"};
    const auto paths = corpus_paths(corpus, sets);
    CHECK(paths.size() == 1);
    CHECK(paths.at("T").size() == 2);
  }
}
