#include "entgraph/entity_tree.hpp"

#include "entgraph/corpus.hpp"

namespace entgraph {

std::size_t EntityTree::add_node(std::string comment_id, EntitySet entities, std::uint32_t depth) {
  nodes_.push_back(Node{std::move(comment_id), std::move(entities), depth, {}});
  return nodes_.size() - 1;
}

namespace {

const EntitySet* lookup(const EntitySetMap& sets, const std::string& id) {
  auto it = sets.find(id);
  return (it == sets.end() || it->second.empty()) ? nullptr : &it->second;
}

void grow(const Thread& thread, const EntitySetMap& sets, const Comment& at, std::size_t at_node,
          EntityTree& tree) {
  for (const Comment* child : thread.children_of(at.id)) {
    const auto* set = lookup(sets, child->id);
    if (set == nullptr) continue;
    const auto depth = tree.node(at_node).depth + 1;
    const auto node = tree.add_node(child->id, *set, depth);
    tree.add_child(at_node, node);
    grow(thread, sets, *child, node, tree);
  }
}

void walk(const EntityTree& tree, std::size_t at, std::vector<EntitySet>& prefix, std::size_t min_len,
          std::vector<ConversationPath>& out) {
  const auto& node = tree.node(at);
  prefix.push_back(node.entities);
  if (node.children.empty()) {
    if (prefix.size() >= min_len) out.push_back(ConversationPath{prefix});
  } else {
    for (auto child : node.children) walk(tree, child, prefix, min_len, out);
  }
  prefix.pop_back();
}

}  // namespace

EntityTree build_entity_tree(const Thread& thread, const EntitySetMap& entity_sets) {
  EntityTree tree;
  const auto* root_set = lookup(entity_sets, thread.root().id);
  if (root_set == nullptr) return tree;
  const auto root = tree.add_node(thread.root().id, *root_set, 0);
  grow(thread, entity_sets, thread.root(), root, tree);
  return tree;
}

std::vector<ConversationPath> extract_paths(const EntityTree& tree, std::size_t min_len) {
  std::vector<ConversationPath> out;
  if (tree.empty()) return out;
  std::vector<EntitySet> prefix;
  walk(tree, 0, prefix, min_len, out);
  return out;
}

ThreadPaths corpus_paths(const Corpus& corpus, const EntitySetMap& entity_sets, std::size_t min_len) {
  ThreadPaths out;
  for (const auto& thread : corpus.threads()) {
    auto paths = extract_paths(build_entity_tree(thread, entity_sets), min_len);
    if (!paths.empty()) out.emplace(thread.id(), std::move(paths));
  }
  return out;
}

}  // namespace entgraph
