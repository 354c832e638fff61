#include "entgraph/prediction.hpp"

#include <algorithm>
#include <cmath>

#include "entgraph/corpus.hpp"
#include "entgraph/error.hpp"
#include "entgraph/random.hpp"
#include "entgraph/wmd.hpp"

namespace entgraph {

std::vector<FoldSplit> kfold_split(std::vector<std::string> thread_ids, std::size_t k, std::uint64_t seed) {
  if (k < 2) throw ParameterError("k-fold split needs k >= 2");
  if (thread_ids.size() < k) {
    throw ParameterError("cannot split " + std::to_string(thread_ids.size()) + " threads into " +
                         std::to_string(k) + " folds");
  }
  std::sort(thread_ids.begin(), thread_ids.end());
  thread_ids.erase(std::unique(thread_ids.begin(), thread_ids.end()), thread_ids.end());
  if (thread_ids.size() < k) throw ParameterError("too few distinct thread ids for the requested folds");

  Rng rng(seed);
  rng.shuffle(thread_ids);

  const auto n = thread_ids.size();
  const auto base = n / k;
  const auto extra = n % k;
  std::vector<FoldSplit> folds;
  std::size_t begin = 0;
  for (std::size_t i = 0; i < k; ++i) {
    const auto end = begin + base + (i < extra ? 1 : 0);
    FoldSplit fold;
    fold.fold = i;
    for (std::size_t j = 0; j < n; ++j) {
      (j >= begin && j < end ? fold.test : fold.train).push_back(thread_ids[j]);
    }
    std::sort(fold.test.begin(), fold.test.end());
    std::sort(fold.train.begin(), fold.train.end());
    folds.push_back(std::move(fold));
    begin = end;
  }
  return folds;
}

std::vector<FoldSplit> kfold_split(const Corpus& corpus, std::size_t k, std::uint64_t seed) {
  return kfold_split(corpus.thread_ids(), k, seed);
}

EntityGraph build_subset_graph(const ThreadPaths& paths, const std::vector<std::string>& thread_ids,
                               const std::string& label) {
  ThreadPaths subset;
  for (const auto& id : thread_ids) {
    if (auto it = paths.find(id); it != paths.end()) subset.emplace(it->first, it->second);
  }
  return star_expand(build_graph(subset, label));
}

FoldGeneralization generalization(const EntityGraph& train, const EntityGraph& test) {
  if (!train.expanded() || !test.expanded()) throw StateError("generalization needs star-expanded graphs");
  FoldGeneralization out;
  for (std::uint32_t depth = 0; depth <= test.max_depth(); ++depth) {
    const auto test_sets = test.vertices_at(depth, VertexKind::set);
    if (test_sets.empty()) continue;
    std::size_t overlap = 0;
    std::size_t exact = 0;
    for (auto i : test_sets) {
      const auto& v = test.vertex(i);
      if (train.find(v)) ++exact;
      const bool shares = std::any_of(v.members.begin(), v.members.end(), [&](const EntityId& e) {
        return train.find(GraphVertex::entity_vertex(e, depth)).has_value();
      });
      if (shares) ++overlap;
    }
    const auto n = static_cast<double>(test_sets.size());
    out[depth] = DepthCoverage{test_sets.size(), static_cast<double>(overlap) / n,
                               static_cast<double>(exact) / n};
  }
  return out;
}

namespace {

std::pair<double, double> mean_ci95(const std::vector<double>& values) {
  const auto n = static_cast<double>(values.size());
  double mean = 0.0;
  for (double v : values) mean += v;
  mean /= n;
  if (values.size() < 2) return {mean, 0.0};
  double ss = 0.0;
  for (double v : values) ss += (v - mean) * (v - mean);
  const double sd = std::sqrt(ss / (n - 1.0));
  return {mean, 1.96 * sd / std::sqrt(n)};
}

}  // namespace

GeneralizationReport summarize_generalization(const std::vector<FoldGeneralization>& folds) {
  std::map<std::uint32_t, GeneralizationRow> rows;
  for (const auto& fold : folds) {
    for (const auto& [depth, cov] : fold) {
      auto& row = rows[depth];
      row.depth = depth;
      row.per_fold.push_back(cov.overlap);
      row.exact_per_fold.push_back(cov.exact);
    }
  }
  GeneralizationReport report;
  for (auto& [depth, row] : rows) {
    std::tie(row.mean, row.ci95) = mean_ci95(row.per_fold);
    std::tie(row.exact_mean, row.exact_ci95) = mean_ci95(row.exact_per_fold);
    report.rows.push_back(std::move(row));
  }
  return report;
}

GeneralizationReport evaluate_generalization(const std::vector<FoldSplit>& folds, const ThreadPaths& paths,
                                             const std::string& label) {
  std::vector<FoldGeneralization> per_fold;
  for (const auto& fold : folds) {
    const auto train = build_subset_graph(paths, fold.train, label);
    const auto test = build_subset_graph(paths, fold.test, label);
    per_fold.push_back(generalization(train, test));
  }
  return summarize_generalization(per_fold);
}

VertexIndex Prediction::argmax(const EntityGraph& graph) const {
  if (distribution.empty()) throw StateError("argmax of a dead-end prediction");
  auto best = distribution.front();
  for (const auto& candidate : distribution) {
    if (candidate.second > best.second ||
        (candidate.second == best.second && graph.vertex(candidate.first).members < graph.vertex(best.first).members)) {
      best = candidate;
    }
  }
  return best.first;
}

Prediction predict_next(const RewiredView& view, const EntitySet& current, std::uint32_t depth,
                        std::string_view label) {
  const auto label_index = view.graph().label_index(label);
  if (!label_index) throw ParameterError("graph has no corpus label '" + std::string(label) + "'");
  Prediction out;
  std::uint64_t total = 0;
  const auto edges = view.out_edges(current, depth);
  for (const auto& e : edges) total += e.weights[*label_index];
  if (total == 0) return out;
  for (const auto& e : edges) {
    const auto w = e.weights[*label_index];
    if (w > 0) out.distribution.emplace_back(e.dst, static_cast<double>(w) / static_cast<double>(total));
  }
  return out;
}

double quantile_sorted(const std::vector<double>& sorted, double q) {
  if (sorted.empty()) throw ParameterError("quantile of an empty sample");
  const double pos = q * static_cast<double>(sorted.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const auto hi = std::min(lo + 1, sorted.size() - 1);
  const double frac = pos - static_cast<double>(lo);
  return sorted[lo] + frac * (sorted[hi] - sorted[lo]);
}

BoxStats box_stats(std::vector<double> samples) {
  BoxStats box;
  box.count = samples.size();
  if (samples.empty()) return box;
  std::sort(samples.begin(), samples.end());
  box.min = samples.front();
  box.max = samples.back();
  box.median = quantile_sorted(samples, 0.5);
  box.q1 = quantile_sorted(samples, 0.25);
  box.q3 = quantile_sorted(samples, 0.75);
  const double iqr = box.q3 - box.q1;
  const double lo_fence = box.q1 - 1.5 * iqr;
  const double hi_fence = box.q3 + 1.5 * iqr;
  box.whisker_lo = *std::find_if(samples.begin(), samples.end(), [&](double v) { return v >= lo_fence; });
  box.whisker_hi = *std::find_if(samples.rbegin(), samples.rend(), [&](double v) { return v <= hi_fence; });
  return box;
}

WmdReport evaluate_prediction(const std::vector<FoldSplit>& folds, const ThreadPaths& paths,
                              const EmbeddingTable& embeddings, const std::string& label) {
  WmdReport report;
  std::map<std::uint32_t, std::vector<double>> samples;

  for (const auto& fold : folds) {
    const auto train = build_subset_graph(paths, fold.train, label);
    const RewiredView view(train);

    for (const auto& thread_id : fold.test) {
      auto it = paths.find(thread_id);
      if (it == paths.end()) continue;
      for (const auto& path : it->second) {
        ++report.paths_total;
        if (!train.find(GraphVertex::set_vertex(path.steps.front(), 0))) {
          ++report.paths_without_root;
          continue;
        }
        EntitySet current = path.steps.front();
        for (std::uint32_t d = 0; d + 1 < path.steps.size(); ++d) {
          const auto prediction = predict_next(view, current, d, label);
          if (prediction.dead_end()) {
            ++report.dead_ends;
            break;
          }
          const auto& predicted = train.vertex(prediction.argmax(train)).members;
          const auto& actual = path.steps[d + 1];
          if (auto distance = wmd(predicted, actual, embeddings)) {
            samples[d + 1].push_back(*distance);
          } else {
            ++report.undefined_distances;
          }
          if (d + 2 == path.steps.size()) break;
          if (view.overlapping_sets(actual, d + 1).empty()) {
            ++report.unanchored;
            break;
          }
          current = actual;
        }
      }
    }
  }

  for (auto& [depth, values] : samples) {
    WmdRow row;
    row.depth = depth;
    row.box = box_stats(values);
    row.samples = std::move(values);
    report.rows.push_back(std::move(row));
  }
  return report;
}

}  // namespace entgraph
