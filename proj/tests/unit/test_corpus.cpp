#include <algorithm>
#include <deque>
#include <sstream>

#include "doctest.h"
#include "entgraph/corpus.hpp"
#include "entgraph/error.hpp"
#include "entgraph/random.hpp"
#include "entgraph/synthetic.hpp"

using namespace entgraph;

namespace {

ParseReport parse_lines(const std::vector<std::string>& lines, DumpFormat format = DumpFormat::reddit_jsonl) {
  std::stringstream in;
  for (const auto& l : lines) in << l << '\n';
  return parse_dump(in, format, "test");
}

// One thread, ten records: post p1 and nine replies up to depth 4.
const std::vector<std::string> kTenRecords = {
    R"({"id":"p1","title":"Trump visits China","selftext":"","author":"alice","created_utc":100})",
    R"({"id":"c1","link_id":"t3_p1","parent_id":"t3_p1","body":"first","author":"bob","created_utc":101})",
    R"({"id":"c2","link_id":"t3_p1","parent_id":"t3_p1","body":"second","author":"carol","created_utc":102})",
    R"({"id":"c3","link_id":"t3_p1","parent_id":"t1_c1","body":"reply","author":"dave","created_utc":103})",
    R"({"id":"c4","link_id":"t3_p1","parent_id":"t1_c1","body":"reply","author":"erin","created_utc":104})",
    R"({"id":"c5","link_id":"t3_p1","parent_id":"t1_c3","body":"deeper","author":"frank","created_utc":105})",
    R"({"id":"c6","link_id":"t3_p1","parent_id":"t1_c5","body":"deepest","author":"grace","created_utc":"106"})",
    R"({"id":"c7","link_id":"t3_p1","parent_id":"t1_c2","body":"other","author":"heidi","created_utc":107})",
    R"({"id":"c8","link_id":"t3_p1","parent_id":"t1_c7","body":"other2","author":"ivan","created_utc":108.0})",
    R"({"id":"c9","link_id":"t3_p1","parent_id":"t1_c4","body":"leaf","author":"judy","created_utc":109})",
};

Corpus corpus_with_sizes(const std::vector<std::size_t>& sizes) {
  std::vector<Thread> threads;
  for (std::size_t t = 0; t < sizes.size(); ++t) {
    const auto tid = "t" + std::to_string(t);
    std::vector<Comment> comments{{tid + "r", std::nullopt, tid, "a", "", 0, true}};
    for (std::size_t i = 1; i < sizes[t]; ++i) {
      comments.push_back({tid + "c" + std::to_string(i), tid + "r", tid, "a", "", 0, false});
    }
    threads.push_back(Thread::assemble(tid, comments));
  }
  return Corpus("sizes", std::move(threads));
}

}  // namespace

TEST_SUITE("corpus") {
  TEST_CASE("post plus one reply gives a single two-level thread") {
    auto report = parse_lines({kTenRecords[0], kTenRecords[1]});
    REQUIRE(report.corpus.size() == 1);
    const auto& t = report.corpus.threads()[0];
    CHECK(t.id() == "p1");
    CHECK(t.root().id == "p1");
    CHECK(t.root().is_root);
    CHECK(t.depth_of("c1") == 1);
    CHECK(t.root().text == "Trump visits China");
    CHECK(t.find("c1")->parent_id == std::optional<std::string>("p1"));
  }

  TEST_CASE("reply to a missing parent is kept aside as an orphan") {
    auto report = parse_lines({kTenRecords[0], kTenRecords[1],
                               R"({"id":"c9","link_id":"t3_p1","parent_id":"t1_gone","body":"x","author":"z"})"});
    REQUIRE(report.corpus.size() == 1);
    const auto& t = report.corpus.threads()[0];
    CHECK(t.size() == 2);
    REQUIRE(t.orphans().size() == 1);
    CHECK(t.orphans()[0].id == "c9");
    CHECK(t.find("c9") == nullptr);
    CHECK(report.orphans == 1);
    CHECK_THROWS_AS((void)t.depth_of("c9"), NotFoundError);
  }

  TEST_CASE("descendants of an orphan are orphans too") {
    auto report = parse_lines({kTenRecords[0],
                               R"({"id":"x1","link_id":"t3_p1","parent_id":"t1_gone","body":"x"})",
                               R"({"id":"x2","link_id":"t3_p1","parent_id":"t1_x1","body":"y"})"});
    CHECK(report.corpus.threads()[0].orphans().size() == 2);
  }

  TEST_CASE("ten-record thread parses identically under any line order") {
    const auto sorted = parse_lines(kTenRecords).corpus;
    const auto& t = sorted.threads()[0];
    CHECK(t.size() == 10);
    CHECK(t.depth_of("c6") == 4);
    CHECK(t.max_depth() == 4);
    CHECK(t.find("c6")->created_at == 106);
    CHECK(t.find("c8")->created_at == 108);

    Rng rng(7);
    for (int trial = 0; trial < 25; ++trial) {
      auto lines = kTenRecords;
      rng.shuffle(lines);
      CHECK(parse_lines(lines).corpus == sorted);
    }
  }

  TEST_CASE("malformed records are skipped and counted") {
    auto report = parse_lines({kTenRecords[0], "{not json", R"({"link_id":"t3_p1","body":"no id"})", "[1,2]",
                               kTenRecords[1]});
    CHECK(report.records_read == 5);
    CHECK(report.records_skipped == 3);
    CHECK(report.warnings.size() == 3);
    CHECK(report.corpus.comment_count() == 2);
  }

  TEST_CASE("a dump without any valid thread is an explicit error") {
    CHECK_THROWS_AS(parse_lines({"garbage"}), EmptyCorpusError);
    CHECK_THROWS_AS(parse_lines({}), EmptyCorpusError);
    // replies whose post never appears cannot form a thread
    CHECK_THROWS_AS(parse_lines({kTenRecords[1], kTenRecords[2]}), EmptyCorpusError);
  }

  TEST_CASE("post with a self parent is still a post") {
    auto report = parse_lines({R"({"id":"p9","parent_id":"t3_p9","title":"t","author":"a"})"});
    CHECK(report.corpus.threads()[0].root().id == "p9");
  }

  TEST_CASE("canonical json round-trips and groups split records") {
    const auto original = parse_lines(kTenRecords).corpus;
    std::stringstream canonical;
    write_canonical(canonical, original);
    auto reparsed = parse_dump(canonical, DumpFormat::canonical_json, "test").corpus;
    CHECK(reparsed == original);

    auto split = parse_lines({R"({"thread_id":"T","comments":[{"id":"r","parent_id":null,"author":"a","text":"x","created_at":1}]})",
                              R"({"thread_id":"T","comments":[{"id":"k","parent_id":"r","author":"b","text":"y","created_at":2}]})"},
                             DumpFormat::canonical_json);
    CHECK(split.corpus.threads()[0].size() == 2);
  }

  TEST_CASE("conflicting duplicate records resolve the same way in any order") {
    const std::string a = R"({"id":"c1","link_id":"t3_p1","parent_id":"t3_p1","body":"one","author":"x"})";
    const std::string b = R"({"id":"c1","link_id":"t3_p1","parent_id":"t3_p1","body":"two","author":"x"})";
    auto first = parse_lines({kTenRecords[0], a, b});
    auto second = parse_lines({b, kTenRecords[0], a});
    CHECK(first.corpus == second.corpus);
    CHECK(first.corpus.threads()[0].find("c1")->text == "one");
  }

  TEST_CASE("depth_of agrees with a breadth-first recomputation") {
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
      RandomCorpusConfig cfg;
      cfg.threads = 5;
      cfg.seed = seed;
      const auto corpus = generate_random_corpus(cfg).corpus;
      for (const auto& t : corpus.threads()) {
        std::deque<std::pair<const Comment*, int>> queue{{&t.root(), 0}};
        std::size_t visited = 0;
        while (!queue.empty()) {
          auto [c, d] = queue.front();
          queue.pop_front();
          ++visited;
          CHECK(t.depth_of(c->id) == d);
          for (const auto* child : t.children_of(c->id)) queue.push_back({child, d + 1});
        }
        CHECK(visited == t.size());
      }
    }
  }

  TEST_CASE("top fraction keeps the largest threads") {
    const auto corpus = corpus_with_sizes({1, 2, 3, 4, 5, 6, 7, 8, 9, 10});
    CHECK(filter_top_fraction(corpus, 1.0) == corpus);

    const auto top = filter_top_fraction(corpus, 0.2);
    REQUIRE(top.size() == 2);
    std::vector<std::size_t> sizes;
    for (const auto& t : top.threads()) sizes.push_back(t.size());
    std::sort(sizes.begin(), sizes.end());
    CHECK(sizes == std::vector<std::size_t>{9, 10});

    CHECK(filter_top_fraction(corpus_with_sizes({3, 1, 4, 1, 5, 9, 2}), 0.2).size() == 2);  // ceil(1.4)
    CHECK(filter_top_fraction(corpus, 0.7).size() == 7);
  }

  TEST_CASE("top fraction breaks ties by thread id and is idempotent") {
    const auto corpus = corpus_with_sizes({4, 4, 4, 4});
    const auto top = filter_top_fraction(corpus, 0.5);
    CHECK(top.thread_ids() == std::vector<std::string>{"t0", "t1"});
    CHECK(filter_top_fraction(top, 0.5).size() == 1);

    for (double f : {0.1, 0.25, 0.5, 0.9}) {
      const auto once = filter_top_fraction(corpus_with_sizes({5, 3, 8, 1, 9, 2, 7, 7, 4}), f);
      CHECK(once.size() == static_cast<std::size_t>(std::ceil(f * 9 - 1e-9)));
      CHECK(filter_top_fraction(once, 1.0) == once);
    }
  }

  TEST_CASE("top fraction validates its inputs") {
    const auto corpus = corpus_with_sizes({1, 2});
    CHECK_THROWS_AS(filter_top_fraction(corpus, 0.0), ParameterError);
    CHECK_THROWS_AS(filter_top_fraction(corpus, 1.5), ParameterError);
    CHECK_THROWS_AS(filter_top_fraction(corpus, -0.1), ParameterError);
    CHECK_THROWS_AS(filter_top_fraction(Corpus{}, 0.5), EmptyCorpusError);
  }

  TEST_CASE("bot filtering removes whole subtrees") {
    const auto corpus = parse_lines(kTenRecords).corpus;
    CHECK(filter_bots(corpus, {}) == corpus);

    // c3 (depth 2) has c5 and c6 beneath it; c1 is a depth-1 comment with 5 descendants.
    auto no_dave = filter_bots(corpus, {"dave"});
    CHECK(no_dave.comment_count() == 7);

    // depth-1 comment c2 with two descendants (c7, c8)
    auto no_carol = filter_bots(corpus, {"carol"});
    CHECK(corpus.comment_count() - no_carol.comment_count() == 3);
    CHECK(no_carol.threads()[0].find("c8") == nullptr);

    CHECK(filter_bots(corpus, {"alice"}).empty());
  }

  TEST_CASE("botlist reader skips blanks and comments") {
    std::stringstream in("AutoModerator\n\n# bots\n  LocationBot \r\n");
    auto bots = read_botlist(in);
    CHECK(bots.size() == 2);
    CHECK(bots.contains("LocationBot"));
  }

  TEST_CASE("unknown dump format names are rejected") {
    CHECK(parse_dump_format("reddit-jsonl") == DumpFormat::reddit_jsonl);
    CHECK_THROWS_AS(parse_dump_format("xml"), ParameterError);
  }
}
