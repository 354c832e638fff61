#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "entgraph/entity_graph.hpp"
#include "entgraph/entity_tree.hpp"
#include "entgraph/linking.hpp"
#include "entgraph/rewire.hpp"

namespace entgraph {

class Corpus;

struct FoldSplit {
  std::size_t fold = 0;
  std::vector<std::string> train;  // sorted
  std::vector<std::string> test;   // sorted
};

// Seeded shuffle of the (sorted) thread ids, then contiguous partition into k test
// blocks; the first n % k blocks get one extra thread. Throws ParameterError when
// k < 2 or there are fewer threads than folds.
std::vector<FoldSplit> kfold_split(std::vector<std::string> thread_ids, std::size_t k, std::uint64_t seed);
std::vector<FoldSplit> kfold_split(const Corpus& corpus, std::size_t k, std::uint64_t seed);

// Builds and star-expands the graph over the selected threads only.
EntityGraph build_subset_graph(const ThreadPaths& paths, const std::vector<std::string>& thread_ids,
                               const std::string& label);

struct DepthCoverage {
  std::size_t test_vertices = 0;
  double overlap = 0.0;  // share of test sets with at least one entity seen in train at that depth
  double exact = 0.0;    // share of test sets recorded verbatim in train at that depth
};

// depth -> coverage; depths without test set vertices are absent.
using FoldGeneralization = std::map<std::uint32_t, DepthCoverage>;

// Both graphs must be star-expanded (StateError otherwise).
FoldGeneralization generalization(const EntityGraph& train, const EntityGraph& test);

struct GeneralizationRow {
  std::uint32_t depth = 0;
  double mean = 0.0;
  double ci95 = 0.0;  // half-width: 1.96 * sample std / sqrt(folds)
  std::vector<double> per_fold;
  double exact_mean = 0.0;
  double exact_ci95 = 0.0;
  std::vector<double> exact_per_fold;
};

struct GeneralizationReport {
  std::vector<GeneralizationRow> rows;  // ascending depth
};

GeneralizationReport summarize_generalization(const std::vector<FoldGeneralization>& folds);

// Runs generalization() for every fold.
GeneralizationReport evaluate_generalization(const std::vector<FoldSplit>& folds, const ThreadPaths& paths,
                                             const std::string& label);

struct Prediction {
  std::vector<std::pair<VertexIndex, double>> distribution;  // ordered by vertex

  bool dead_end() const { return distribution.empty(); }
  // Most probable successor; ties go to the lexicographically smallest entity set.
  VertexIndex argmax(const EntityGraph& graph) const;
};

// Next-set distribution from the rewired out-weights under `label`. An empty
// distribution marks a dead end.
Prediction predict_next(const RewiredView& view, const EntitySet& current, std::uint32_t depth,
                        std::string_view label);

struct BoxStats {
  std::size_t count = 0;
  double median = 0.0;
  double q1 = 0.0;
  double q3 = 0.0;
  double whisker_lo = 0.0;  // smallest sample >= q1 - 1.5 IQR
  double whisker_hi = 0.0;  // largest sample <= q3 + 1.5 IQR
  double min = 0.0;
  double max = 0.0;
};

// Quartiles by linear interpolation between order statistics.
BoxStats box_stats(std::vector<double> samples);
double quantile_sorted(const std::vector<double>& sorted, double q);

struct WmdRow {
  std::uint32_t depth = 0;  // depth of the predicted (and actual) set
  std::vector<double> samples;
  BoxStats box;
};

struct WmdReport {
  std::vector<WmdRow> rows;  // ascending depth
  std::size_t paths_total = 0;
  std::size_t paths_without_root = 0;
  std::size_t dead_ends = 0;
  std::size_t unanchored = 0;
  std::size_t undefined_distances = 0;
};

// Walks every test path whose root set is a train root: predict the argmax
// successor, score it against the observed set with WMD, then re-anchor on the
// observed set (exactly, or through shared entities) and continue.
WmdReport evaluate_prediction(const std::vector<FoldSplit>& folds, const ThreadPaths& paths,
                              const EmbeddingTable& embeddings, const std::string& label);

inline constexpr int kReportFormatVersion = 1;

nlohmann::json report_to_json(const GeneralizationReport& generalization, const WmdReport& wmd,
                              const nlohmann::json& meta);
// depth,mean,ci,exact_mean,exact_ci
std::string generalization_csv(const GeneralizationReport& report);
// depth,count,median,q1,q3,lo,hi
std::string wmd_csv(const WmdReport& report);

}  // namespace entgraph
