#pragma once

#include <cstddef>
#include <map>
#include <string>
#include <vector>

#include "entgraph/linking.hpp"

namespace entgraph {

class Corpus;
class Thread;

// A comment thread with every comment replaced by its entity set.
// Node 0 is the root; children are listed in comment-id order.
class EntityTree {
 public:
  struct Node {
    std::string comment_id;
    EntitySet entities;
    std::uint32_t depth = 0;
    std::vector<std::size_t> children;
  };

  bool empty() const { return nodes_.empty(); }
  std::size_t size() const { return nodes_.size(); }
  const Node& node(std::size_t i) const { return nodes_[i]; }
  const std::vector<Node>& nodes() const { return nodes_; }

  std::size_t add_node(std::string comment_id, EntitySet entities, std::uint32_t depth);
  void add_child(std::size_t parent, std::size_t child) { nodes_[parent].children.push_back(child); }

 private:
  std::vector<Node> nodes_;
};

// Keeps comments with a non-empty entity set whose ancestors all have one too;
// an empty set cuts off its whole branch. An empty root gives an empty tree.
EntityTree build_entity_tree(const Thread& thread, const EntitySetMap& entity_sets);

// Entity sets from the root (depth 0) down to one leaf.
struct ConversationPath {
  std::vector<EntitySet> steps;

  std::size_t size() const { return steps.size(); }
  friend bool operator==(const ConversationPath&, const ConversationPath&) = default;
};

inline constexpr std::size_t kDefaultMinPathLength = 3;

// One path per root-to-leaf route, depth-first in child order; paths with fewer
// than min_len nodes are dropped.
std::vector<ConversationPath> extract_paths(const EntityTree& tree,
                                            std::size_t min_len = kDefaultMinPathLength);

// thread id -> that thread's conversation paths
using ThreadPaths = std::map<std::string, std::vector<ConversationPath>>;

// Threads whose tree yields no path of the required length are omitted.
ThreadPaths corpus_paths(const Corpus& corpus, const EntitySetMap& entity_sets,
                         std::size_t min_len = kDefaultMinPathLength);

}  // namespace entgraph
