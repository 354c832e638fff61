// entgraph_synth: writes reproducible sample inputs for the pipeline.
//
//   entgraph_synth --output data/sample --threads 200 --seed 7
//
// Produces two reddit-style dumps (news.jsonl, worldnews.jsonl) over a shared entity
// vocabulary with topic drift by depth, plus gazetteer.tsv, embeddings.txt and
// botlist.txt. Each dump also carries bot comments (with replies) and orphaned replies
// so that the ingest filters have something to do.

#include <cctype>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <set>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "entgraph/entgraph.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace entgraph;

namespace {

const std::vector<std::string> kCoreNames = {
    "Donald_Trump", "China",        "Russia",    "Joe_Biden",       "European_Union", "Vladimir_Putin",
    "Ukraine",      "United_Nations", "Xi_Jinping", "Federal_Reserve", "NATO",          "Iran"};

const std::vector<std::string> kBots = {"AutoModerator", "RemindMeBot"};

const std::vector<std::string> kTemplates = {
    "I keep reading about {} and nobody explains it well.",
    "Honestly {} is the whole story here.",
    "Wait, what does {} have to do with any of this?",
    "Source on {}? That seems like a stretch.",
    "The coverage of {} has been pretty one-sided.",
    "People forget how long {} has been in the news.",
    "This is what happens when {} gets involved.",
    "Not sure I buy the framing around {}.",
};

std::string surface(const EntityId& id) {
  auto s = id.str();
  for (auto& ch : s) {
    if (ch == '_') ch = ' ';
  }
  return s;
}

std::string render(const EntitySet& set, Rng& rng) {
  std::string mentions;
  for (std::size_t i = 0; i < set.size(); ++i) {
    if (i > 0) mentions += i + 1 == set.size() ? " and " : ", ";
    mentions += surface(set[i]);
  }
  auto text = kTemplates[rng.below(kTemplates.size())];
  text.replace(text.find("{}"), 2, mentions);
  return text;
}

std::string reddit_id(const std::string& prefix, std::size_t n) { return prefix + std::to_string(n); }

void write_dump(const fs::path& file, const std::string& label, const SyntheticCorpus& data, std::uint64_t seed) {
  Rng rng(seed);
  std::ofstream out(file, std::ios::binary | std::ios::trunc);
  if (!out) throw NotFoundError("cannot write " + file.string());
  std::size_t extra = 0;
  for (const auto& thread : data.corpus.threads()) {
    const auto& root = thread.root();
    const auto post_id = label.substr(0, 2) + thread.id();
    const auto cid = [&](const Comment& c) { return label.substr(0, 2) + c.id; };
    const auto& root_set = data.entity_sets.at(root.id);
    out << json{{"id", post_id},
                {"title", render(root_set, rng)},
                {"selftext", ""},
                {"author", root.author},
                {"created_utc", root.created_at},
                {"subreddit", label}}
               .dump()
        << "\n";
    for (const auto& c : thread.comments()) {
      if (c.is_root) continue;
      const auto parent = *c.parent_id == root.id ? "t3_" + post_id : "t1_" + cid(*thread.find(*c.parent_id));
      out << json{{"id", cid(c)},
                  {"link_id", "t3_" + post_id},
                  {"parent_id", parent},
                  {"body", render(data.entity_sets.at(c.id), rng)},
                  {"author", c.author},
                  {"created_utc", c.created_at},
                  {"subreddit", label}}
                 .dump()
          << "\n";
    }
    // A bot reply under the post, answered by a user: both vanish under the bot filter.
    if (rng.bernoulli(0.3)) {
      const auto bot_id = reddit_id(label.substr(0, 2) + "bot", extra++);
      out << json{{"id", bot_id},
                  {"link_id", "t3_" + post_id},
                  {"parent_id", "t3_" + post_id},
                  {"body", "Please keep the discussion civil. I am a bot."},
                  {"author", kBots[rng.below(kBots.size())]},
                  {"created_utc", root.created_at + 1},
                  {"subreddit", label}}
                 .dump()
          << "\n";
      out << json{{"id", reddit_id(label.substr(0, 2) + "rb", extra++)},
                  {"link_id", "t3_" + post_id},
                  {"parent_id", "t1_" + bot_id},
                  {"body", "Good bot about " + surface(root_set[0])},
                  {"author", "user" + std::to_string(rng.below(500))},
                  {"created_utc", root.created_at + 2},
                  {"subreddit", label}}
                 .dump()
          << "\n";
    }
    // A reply to a deleted comment.
    if (rng.bernoulli(0.1)) {
      out << json{{"id", reddit_id(label.substr(0, 2) + "or", extra++)},
                  {"link_id", "t3_" + post_id},
                  {"parent_id", "t1_deleted" + std::to_string(extra)},
                  {"body", "[deleted] was right about " + surface(root_set[0])},
                  {"author", "user" + std::to_string(rng.below(500))},
                  {"created_utc", root.created_at + 3},
                  {"subreddit", label}}
                 .dump()
          << "\n";
    }
  }
}

void write_gazetteer(const fs::path& file, const EmbeddingTable& vocabulary, const std::vector<EntityId>& ids) {
  std::ofstream out(file, std::ios::binary | std::ios::trunc);
  out << "# surface\tentity\tprior\n";
  for (const auto& id : ids) {
    if (vocabulary.find(id) == nullptr) continue;
    auto key = surface(id);
    for (auto& ch : key) ch = static_cast<char>(std::tolower(static_cast<unsigned char>(ch)));
    out << key << "\t" << id.str() << "\t0.9\n";
  }
  // Ambiguous short forms: only the dominant reading clears the default prior.
  out << "trump\tDonald_Trump\t0.85\n";
  out << "biden\tJoe_Biden\t0.85\n";
  out << "putin\tVladimir_Putin\t0.9\n";
  out << "eu\tEuropean_Union\t0.7\n";
  out << "un\tUnited_Nations\t0.3\n";
  out << "fed\tFederal_Reserve\t0.45\n";
}

void write_embeddings(const fs::path& file, const EmbeddingTable& table, const std::vector<EntityId>& ids) {
  std::ofstream out(file, std::ios::binary | std::ios::trunc);
  out << ids.size() << " " << table.dimension() << "\n";
  out.precision(17);
  for (const auto& id : ids) {
    out << id.str();
    for (double x : *table.find(id)) out << " " << x;
    out << "\n";
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Generate the sample corpora used by the pipeline tests"};
  std::string output = "data/sample";
  std::size_t threads = 200;
  std::uint64_t seed = 7;
  app.add_option("--output", output, "Output directory")->capture_default_str();
  app.add_option("--threads", threads, "Threads per corpus")->capture_default_str();
  app.add_option("--seed", seed, "Random seed")->capture_default_str();
  CLI11_PARSE(app, argc, argv);

  try {
    fs::create_directories(output);
    DriftConfig news;
    news.threads = threads;
    news.seed = seed;
    news.label = "news";
    news.core_names = kCoreNames;
    news.core_entities = kCoreNames.size();
    DriftConfig world = news;
    world.seed = seed + 1;
    world.label = "worldnews";
    world.novelty_base = 0.15;
    world.novelty_step = 0.18;

    const auto news_data = generate_drift_corpus(news);
    const auto world_data = generate_drift_corpus(world);
    write_dump(fs::path(output) / "news.jsonl", "news", news_data, seed);
    write_dump(fs::path(output) / "worldnews.jsonl", "worldnews", world_data, seed + 1);

    // Both generators name entities identically; the first one's vectors are shared.
    std::set<EntityId> used;
    for (const auto* data : {&news_data, &world_data}) {
      for (const auto& [id, set] : data->entity_sets) used.insert(set.begin(), set.end());
    }
    const std::vector<EntityId> ids(used.begin(), used.end());
    write_gazetteer(fs::path(output) / "gazetteer.tsv", news_data.embeddings, ids);
    write_embeddings(fs::path(output) / "embeddings.txt", news_data.embeddings, ids);
    std::ofstream bots(fs::path(output) / "botlist.txt", std::ios::binary | std::ios::trunc);
    for (const auto& b : kBots) bots << b << "\n";
    std::cout << json{{"output", output}, {"threads_per_corpus", threads}, {"entities", ids.size()}}.dump() << "\n";
  } catch (const std::exception& e) {
    std::cerr << json{{"error", "internal"}, {"message", e.what()}}.dump() << "\n";
    return 1;
  }
  return 0;
}
