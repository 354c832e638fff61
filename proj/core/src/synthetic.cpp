#include "entgraph/synthetic.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <deque>
#include <set>

#include "entgraph/error.hpp"
#include "entgraph/random.hpp"

namespace entgraph {

namespace {

std::string padded(std::size_t value, int width) {
  auto s = std::to_string(value);
  if (static_cast<int>(s.size()) < width) s.insert(0, static_cast<std::size_t>(width) - s.size(), '0');
  return s;
}

struct Node {
  std::size_t comment;
  std::uint32_t depth;
};

Comment make_comment(const std::string& thread_id, std::size_t serial, std::optional<std::string> parent,
                     std::int64_t time, Rng& rng) {
  Comment c;
  c.id = thread_id + "_c" + padded(serial, 4);
  c.parent_id = std::move(parent);
  c.thread_id = thread_id;
  c.author = "user" + std::to_string(rng.below(500));
  c.created_at = time;
  c.is_root = !c.parent_id.has_value();
  return c;
}

}  // namespace

std::string synthetic_entity_name(std::size_t index) {
  static constexpr std::array<const char*, 16> kSyllables = {"val", "mor", "kes", "tri", "lan", "dor", "ena", "sul",
                                                             "bra", "vin", "tho", "qua", "rel", "zan", "pio", "gar"};
  std::array<std::size_t, 4> digits{};
  auto rest = index;
  for (auto& d : digits) {
    d = rest % kSyllables.size();
    rest /= kSyllables.size();
  }
  std::string first = std::string(kSyllables[digits[0]]) + kSyllables[digits[1]];
  std::string second = std::string(kSyllables[digits[2]]) + kSyllables[digits[3]];
  first[0] = static_cast<char>(first[0] - 'a' + 'A');
  second[0] = static_cast<char>(second[0] - 'a' + 'A');
  auto name = first + "_" + second;
  if (rest > 0) name += "_" + std::to_string(rest);
  return name;
}

SyntheticCorpus generate_random_corpus(const RandomCorpusConfig& config) {
  if (config.alphabet == 0 || config.max_set_size == 0 || config.max_children == 0) {
    throw ParameterError("random corpus needs a positive alphabet, set size and branching");
  }
  Rng rng(config.seed);
  SyntheticCorpus out;
  std::vector<Thread> threads;
  for (std::size_t t = 0; t < config.threads; ++t) {
    const auto thread_id = "t" + padded(t, 3);
    std::vector<Comment> comments;
    std::deque<Node> queue;
    std::int64_t clock = 1'600'000'000 + static_cast<std::int64_t>(t) * 86'400;
    comments.push_back(make_comment(thread_id, 0, std::nullopt, clock, rng));
    queue.push_back({0, 0});
    while (!queue.empty()) {
      const auto node = queue.front();
      queue.pop_front();
      if (node.depth >= config.max_depth) continue;
      std::size_t kids = 0;
      if (node.depth == 0) {
        kids = 1 + rng.below(config.max_children);
      } else if (rng.bernoulli(0.6)) {
        kids = 1 + rng.below(config.max_children);
      }
      for (std::size_t k = 0; k < kids; ++k) {
        const auto serial = comments.size();
        comments.push_back(make_comment(thread_id, serial, comments[node.comment].id, ++clock, rng));
        queue.push_back({serial, node.depth + 1});
      }
    }
    for (auto& c : comments) {
      if (rng.bernoulli(config.empty_set_probability)) continue;
      const auto size = 1 + rng.below(std::min(config.max_set_size, config.alphabet));
      std::vector<EntityId> members;
      while (members.size() < size) {
        EntityId e("E" + std::to_string(rng.below(config.alphabet)));
        if (std::find(members.begin(), members.end(), e) == members.end()) members.push_back(std::move(e));
      }
      c.text = "synthetic comment";
      out.entity_sets.emplace(c.id, EntitySet(std::move(members)));
    }
    threads.push_back(Thread::assemble(thread_id, std::move(comments)));
  }
  out.corpus = Corpus(config.label, std::move(threads));
  return out;
}

SyntheticCorpus generate_drift_corpus(const DriftConfig& config) {
  if (config.core_entities == 0 || config.embedding_dim == 0) {
    throw ParameterError("drift corpus needs core entities and a positive embedding dimension");
  }
  Rng rng(config.seed);

  std::vector<EntityId> core;
  for (std::size_t i = 0; i < config.core_entities; ++i) {
    core.emplace_back(i < config.core_names.size() ? config.core_names[i] : synthetic_entity_name(i));
  }
  // tiers[d][k]: k-th entity that can first appear at depth d. Pools double with
  // depth, so deeper novelty is less likely to recur in another thread.
  std::vector<std::vector<EntityId>> tiers(config.max_depth + 1);
  std::size_t next_name = 4096;
  for (std::uint32_t d = 1; d <= config.max_depth; ++d) {
    const std::size_t pool = std::size_t{200} << std::min<std::uint32_t>(d - 1, 8);
    for (std::size_t k = 0; k < pool; ++k) tiers[d].emplace_back(synthetic_entity_name(next_name++));
  }

  SyntheticCorpus out;
  out.embeddings = EmbeddingTable(config.embedding_dim);
  const auto embed = [&](const EntityId& id, double scale) {
    std::vector<double> v(config.embedding_dim);
    for (auto& x : v) x = scale * rng.normal();
    out.embeddings.insert(id, std::move(v));
  };
  for (const auto& e : core) embed(e, 1.0);
  for (std::uint32_t d = 1; d <= config.max_depth; ++d) {
    for (const auto& e : tiers[d]) embed(e, std::pow(1.6, d));
  }

  // Skewed pick: small indices (popular topics) are more likely.
  const auto pick_core = [&]() -> const EntityId& { return core[rng.below(rng.below(core.size()) + 1)]; };
  const std::set<EntityId> core_set(core.begin(), core.end());
  const auto fresh = [&](std::uint32_t depth) -> const EntityId& { return tiers[depth][rng.below(tiers[depth].size())]; };
  const auto novelty = [&](std::uint32_t depth) {
    return std::min(0.95, config.novelty_base + config.novelty_step * static_cast<double>(depth - 1));
  };

  std::vector<Thread> threads;
  for (std::size_t t = 0; t < config.threads; ++t) {
    const auto thread_id = "d" + padded(t, 4);
    std::vector<Comment> comments;
    std::vector<EntitySet> sets;
    std::deque<Node> queue;
    std::int64_t clock = 1'500'000'000 + static_cast<std::int64_t>(t) * 3'600;

    comments.push_back(make_comment(thread_id, 0, std::nullopt, clock, rng));
    {
      std::vector<EntityId> root{pick_core()};
      if (rng.bernoulli(0.4)) root.push_back(pick_core());
      sets.emplace_back(std::move(root));
    }
    queue.push_back({0, 0});
    while (!queue.empty()) {
      const auto node = queue.front();
      queue.pop_front();
      if (node.depth >= config.max_depth) continue;
      std::size_t kids = 0;
      if (node.depth == 0) {
        kids = 2 + rng.below(3);
      } else if (rng.bernoulli(0.75 - 0.08 * node.depth)) {
        kids = 1 + rng.below(2);
      }
      const auto child_depth = node.depth + 1;
      const double q = novelty(child_depth);
      for (std::size_t k = 0; k < kids; ++k) {
        // A reply leaves the core topic with probability q; off-topic branches never return.
        const auto& parent = sets[node.comment];
        const bool parent_on_topic =
            std::any_of(parent.begin(), parent.end(), [&](const EntityId& e) { return core_set.contains(e); });
        std::vector<EntityId> members;
        if (parent_on_topic && !rng.bernoulli(q)) {
          for (const auto& e : parent) {
            if (rng.bernoulli(0.7)) members.push_back(e);
          }
          if (std::none_of(members.begin(), members.end(), [&](const EntityId& e) { return core_set.contains(e); })) {
            members.push_back(pick_core());
          }
          if (rng.bernoulli(0.3)) members.push_back(pick_core());
        } else {
          for (const auto& e : parent) {
            if (!core_set.contains(e) && rng.bernoulli(0.5)) members.push_back(e);
          }
          members.push_back(fresh(child_depth));
          if (rng.bernoulli(0.3)) members.push_back(fresh(child_depth));
        }
        const auto serial = comments.size();
        comments.push_back(make_comment(thread_id, serial, comments[node.comment].id, ++clock, rng));
        sets.emplace_back(std::move(members));
        queue.push_back({serial, child_depth});
      }
    }
    for (std::size_t i = 0; i < comments.size(); ++i) out.entity_sets.emplace(comments[i].id, sets[i]);
    threads.push_back(Thread::assemble(thread_id, std::move(comments)));
  }
  out.corpus = Corpus(config.label, std::move(threads));
  return out;
}

}  // namespace entgraph
