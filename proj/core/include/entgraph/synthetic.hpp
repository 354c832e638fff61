#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "entgraph/corpus.hpp"
#include "entgraph/linking.hpp"

namespace entgraph {

// Generators for reproducible test, benchmark and sample corpora. Comment ids are
// unique across the whole corpus.

struct RandomCorpusConfig {
  std::size_t threads = 20;
  std::uint32_t max_depth = 6;
  std::size_t alphabet = 10;      // entities E0..E{alphabet-1}
  std::size_t max_children = 3;
  std::size_t max_set_size = 3;
  double empty_set_probability = 0.1;
  std::uint64_t seed = 0;
  std::string label = "synthetic";
};

struct SyntheticCorpus {
  Corpus corpus;
  EntitySetMap entity_sets;
  EmbeddingTable embeddings;
};

// Uniformly random trees with random entity sets drawn from a small alphabet.
// No embeddings are produced.
SyntheticCorpus generate_random_corpus(const RandomCorpusConfig& config);

// Conversations that drift away from a shared set of core topics: the chance that
// a reply introduces a previously unseen entity grows with depth, and entities first
// introduced deeper sit farther from the core in embedding space.
struct DriftConfig {
  std::size_t threads = 200;
  std::uint32_t max_depth = 6;
  std::size_t core_entities = 12;
  double novelty_base = 0.1;   // chance of a new entity at depth 1
  double novelty_step = 0.2;   // added per extra depth
  std::size_t embedding_dim = 8;
  std::uint64_t seed = 0;
  std::string label = "drift";
  // Core entity names; generated names are used when empty.
  std::vector<std::string> core_names;
};

SyntheticCorpus generate_drift_corpus(const DriftConfig& config);

// Deterministic pronounceable entity name, unique per index ("Valmora_Kest").
std::string synthetic_entity_name(std::size_t index);

}  // namespace entgraph
