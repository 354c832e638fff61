#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "entgraph/linking.hpp"

namespace entgraph {

// Dense row-major cost matrix for a transportation problem.
struct CostMatrix {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<double> values;

  double operator()(std::size_t r, std::size_t c) const { return values[r * cols + c]; }
};

// Minimum total cost of shipping integer `supply` (one entry per row) to integer
// `demand` (one entry per column). Supplies and demands must have equal, positive
// totals and costs must be non-negative. Solved exactly by successive shortest paths.
double min_cost_transport(std::span<const std::uint64_t> supply, std::span<const std::uint64_t> demand,
                          const CostMatrix& cost);

// Earth mover's distance between uniform distributions over two point sets,
// Euclidean ground distance.
double uniform_emd(const std::vector<std::vector<double>>& a, const std::vector<std::vector<double>>& b);

// Word Mover's Distance between two entity sets with uniform mass over members.
// Entities without an embedding are dropped first; nullopt when either side ends
// up empty.
std::optional<double> wmd(const EntitySet& a, const EntitySet& b, const EmbeddingTable& embeddings);

double euclidean(std::span<const double> x, std::span<const double> y);

}  // namespace entgraph
