#include <cmath>
#include <sstream>

#include "doctest.h"
#include "entgraph/corpus.hpp"
#include "entgraph/error.hpp"
#include "entgraph/linking.hpp"

using namespace entgraph;

namespace {

Gazetteer nyc_gazetteer() {
  Gazetteer g;
  g.add("trump", EntityId("Donald_Trump"), 0.9);
  g.add("china", EntityId("China"), 0.95);
  g.add("new york", EntityId("New_York"), 0.8);
  g.add("new york city", EntityId("New_York_City"), 0.9);
  g.add("paris", EntityId("Paris"), 0.6);
  g.add("paris", EntityId("Paris_Hilton"), 0.3);
  g.add("apple", EntityId("Apple_Inc."), 0.4);
  return g;
}

std::vector<std::string> entity_names(const std::vector<Mention>& mentions) {
  std::vector<std::string> out;
  for (const auto& m : mentions) out.push_back(m.entity.str());
  return out;
}

}  // namespace

TEST_SUITE("linking") {
  TEST_CASE("entity ids reject empty and whitespace values") {
    CHECK_THROWS_AS(EntityId(""), ParameterError);
    CHECK_THROWS_AS(EntityId("Donald Trump"), ParameterError);
    CHECK_THROWS_AS(EntityId("A\tB"), ParameterError);
    CHECK(EntityId::parse("Donald_Trump").has_value());
    CHECK_FALSE(EntityId::parse("a b").has_value());
  }

  TEST_CASE("entity sets are sorted and deduplicated") {
    EntitySet s{"B", "A", "B"};
    CHECK(s.size() == 2);
    CHECK(s[0].str() == "A");
    CHECK(s.joined() == "A B");
    CHECK(s.contains(EntityId("B")));
    CHECK(s.intersects(EntitySet{"C", "B"}));
    CHECK_FALSE(s.intersects(EntitySet{"C"}));
    CHECK(EntitySet{"A"} < EntitySet{"A", "B"});
  }

  TEST_CASE("tokenizer folds ascii case and keeps utf-8 words whole") {
    auto tokens = tokenize("New-York, caf\xC3\xA9 42!");
    REQUIRE(tokens.size() == 4);
    CHECK(tokens[0].folded == "new");
    CHECK(tokens[1].folded == "york");
    CHECK(tokens[2].folded == "caf\xC3\xA9");
    CHECK(tokens[3].folded == "42");
    CHECK(tokens[1].start == 4);
    CHECK(tokens[1].end == 8);
    CHECK(tokenize("").empty());
    CHECK(tokenize("  ...  ").empty());
  }

  TEST_CASE("single mention resolves to the knowledge-base id") {
    auto mentions = link_text("Trump spoke", nyc_gazetteer());
    REQUIRE(mentions.size() == 1);
    CHECK(mentions[0].entity.str() == "Donald_Trump");
    CHECK(mentions[0].surface == "Trump");
    CHECK(mentions[0].start == 0);
    CHECK(mentions[0].end == 5);
    CHECK(mentions[0].confidence == doctest::Approx(0.9));
  }

  TEST_CASE("empty text has no mentions") { CHECK(link_text("", nyc_gazetteer()).empty()); }

  TEST_CASE("longest surface wins") {
    auto mentions = link_text("new york city", nyc_gazetteer());
    CHECK(entity_names(mentions) == std::vector<std::string>{"New_York_City"});
    CHECK(entity_names(link_text("I love New   York!", nyc_gazetteer())) == std::vector<std::string>{"New_York"});
  }

  TEST_CASE("candidates below the prior threshold are not linked") {
    auto g = nyc_gazetteer();
    CHECK(link_text("apple pie", g).empty());
    CHECK(entity_names(link_text("apple pie", g, 0.3)) == std::vector<std::string>{"Apple_Inc."});
    CHECK(entity_names(link_text("Paris", g)) == std::vector<std::string>{"Paris"});
  }

  TEST_CASE("matches do not start inside a word") {
    CHECK(link_text("Chinatown", nyc_gazetteer()).empty());
  }

  TEST_CASE("two distinct entities give a two-element set") {
    auto mentions = link_text("Trump visits China; Trump again", nyc_gazetteer());
    CHECK(mentions.size() == 3);
    CHECK(to_entity_set(mentions) == EntitySet{"China", "Donald_Trump"});
  }

  TEST_CASE("to_entity_set deduplicates and ignores order") {
    const Mention a{0, 1, "t", EntityId("Donald_Trump"), 1.0};
    const Mention b{0, 1, "c", EntityId("China"), 1.0};
    const std::vector<Mention> list{a, a, b};
    const std::vector<Mention> reversed{b, a, a};
    CHECK(to_entity_set(list) == EntitySet{"China", "Donald_Trump"});
    CHECK(to_entity_set(list) == to_entity_set(reversed));
    CHECK(to_entity_set(std::vector<Mention>{}).empty());
  }

  TEST_CASE("linking is deterministic") {
    const auto g = nyc_gazetteer();
    const std::string text = "Trump in New York City, then China, then paris";
    const auto first = link_text(text, g);
    const auto second = link_text(text, g);
    REQUIRE(first.size() == second.size());
    for (std::size_t i = 0; i < first.size(); ++i) {
      CHECK(first[i].entity == second[i].entity);
      CHECK(first[i].start == second[i].start);
    }
  }

  TEST_CASE("gazetteer rejects bad priors and over-full surfaces") {
    Gazetteer g;
    CHECK_THROWS_AS(g.add("x", EntityId("X"), 1.5), ParameterError);
    CHECK_THROWS_AS(g.add("  ", EntityId("X"), 0.5), ParameterError);
    g.add("x", EntityId("X"), 0.7);
    g.add("x", EntityId("Y"), 0.6);
    CHECK_THROWS_AS(g.validate(), SchemaError);
  }

  TEST_CASE("gazetteer tsv loads") {
    std::stringstream in("# surface\tentity\tprior\ntrump\tDonald_Trump\t0.9\n\nNew York\tNew_York\t0.8\n");
    auto g = Gazetteer::load_tsv(in);
    CHECK(g.size() == 2);
    CHECK(g.max_tokens() == 2);
    CHECK(g.lookup("new york").size() == 1);
    std::stringstream bad("trump\tDonald_Trump\n");
    CHECK_THROWS_AS(Gazetteer::load_tsv(bad), ParseError);
  }

  TEST_CASE("prelinked records are sorted and unioned") {
    std::stringstream in(R"({"comment_id":"c1","entities":["B","A"]}
{"comment_id":"c2","entities":["C"]}
{"comment_id":"c1","entities":["D"]}
{"comment_id":"c3","entities":["bad id"]}
not json
{"comment_id":"c4","entities":[]}
)");
    const std::set<std::string, std::less<>> known{"c1", "c2"};
    auto result = load_prelinked(in, &known);
    CHECK(result.sets.size() == 3);
    CHECK(result.sets.at("c1") == EntitySet{"A", "B", "D"});
    CHECK(result.records_skipped == 2);
    CHECK(result.unknown_ids == std::vector<std::string>{"c4"});
  }

  TEST_CASE("three prelinked records give three entries") {
    std::stringstream in(R"({"comment_id":"a","entities":["X"]}
{"comment_id":"b","entities":["Y","X"]}
{"comment_id":"c","entities":["Z"]}
)");
    CHECK(load_prelinked(in).sets.size() == 3);
  }

  TEST_CASE("annotations round-trip through the prelinked reader") {
    EntitySetMap sets{{"c1", EntitySet{"A", "B"}}, {"c2", EntitySet{"C"}}};
    std::stringstream out;
    write_annotations(out, sets);
    CHECK(load_prelinked(out).sets == sets);
  }

  TEST_CASE("embedding table loads consistent vectors") {
    std::stringstream in("A 1 2 3\nB 0 0 1\n");
    auto load = load_embeddings(in);
    CHECK(load.table.dimension() == 3);
    CHECK(load.table.size() == 2);
    CHECK((*load.table.find(EntityId("A")))[1] == 2.0);

    std::stringstream header("2 3\nA 1 2 3\nB 0 0 1\n");
    CHECK(load_embeddings(header).table.size() == 2);
  }

  TEST_CASE("embedding dimension mismatch is an error") {
    std::stringstream in("A 1 2 3\nB 0 0 1 4\n");
    CHECK_THROWS_AS(load_embeddings(in), ParseError);
    std::stringstream nan("A 1 nan 3\n");
    CHECK_THROWS_AS(load_embeddings(nan), ParseError);
    std::stringstream inf("A 1 inf 3\n");
    CHECK_THROWS_AS(load_embeddings(inf), ParseError);
  }

  TEST_CASE("missing embeddings are reported") {
    std::stringstream in("A 1 2 3\nB 0 0 1\n");
    auto load = load_embeddings(in, {EntityId("A"), EntityId("B"), EntityId("C")});
    CHECK(load.missing == std::vector<EntityId>{EntityId("C")});
  }

  TEST_CASE("link_corpus omits comments without mentions") {
    std::stringstream dump(R"({"id":"p","title":"Trump visits China","author":"a"}
{"id":"c","link_id":"t3_p","parent_id":"t3_p","body":"nothing here","author":"b"}
)");
    auto corpus = parse_dump(dump, DumpFormat::reddit_jsonl, "x").corpus;
    auto sets = link_corpus(corpus, nyc_gazetteer());
    CHECK(sets.size() == 1);
    CHECK(sets.at("p") == EntitySet{"China", "Donald_Trump"});
  }
}
