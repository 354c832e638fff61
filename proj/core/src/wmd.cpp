#include "entgraph/wmd.hpp"

#include <cmath>
#include <limits>
#include <numeric>

#include "entgraph/error.hpp"

namespace entgraph {

namespace {

struct Arc {
  std::size_t to;
  std::size_t rev;
  std::uint64_t cap;
  double cost;
};

class FlowNetwork {
 public:
  explicit FlowNetwork(std::size_t nodes) : adj_(nodes) {}

  void add_arc(std::size_t from, std::size_t to, std::uint64_t cap, double cost) {
    adj_[from].push_back(Arc{to, adj_[to].size(), cap, cost});
    adj_[to].push_back(Arc{from, adj_[from].size() - 1, 0, -cost});
  }

  // Successive shortest augmenting paths (Bellman-Ford: residual costs may be negative).
  double min_cost_flow(std::size_t source, std::size_t sink, std::uint64_t required) {
    constexpr double kInf = std::numeric_limits<double>::infinity();
    const auto n = adj_.size();
    double total = 0.0;
    std::uint64_t sent = 0;
    std::vector<double> dist(n);
    std::vector<std::size_t> prev_node(n), prev_arc(n);
    while (sent < required) {
      std::fill(dist.begin(), dist.end(), kInf);
      dist[source] = 0.0;
      for (std::size_t pass = 0; pass + 1 < n; ++pass) {
        bool changed = false;
        for (std::size_t u = 0; u < n; ++u) {
          if (dist[u] == kInf) continue;
          for (std::size_t k = 0; k < adj_[u].size(); ++k) {
            const auto& arc = adj_[u][k];
            if (arc.cap == 0) continue;
            const double nd = dist[u] + arc.cost;
            if (nd < dist[arc.to] - 1e-12) {
              dist[arc.to] = nd;
              prev_node[arc.to] = u;
              prev_arc[arc.to] = k;
              changed = true;
            }
          }
        }
        if (!changed) break;
      }
      if (dist[sink] == kInf) throw ParameterError("transport problem is infeasible");

      std::uint64_t push = required - sent;
      for (auto v = sink; v != source; v = prev_node[v]) {
        push = std::min(push, adj_[prev_node[v]][prev_arc[v]].cap);
      }
      for (auto v = sink; v != source; v = prev_node[v]) {
        auto& arc = adj_[prev_node[v]][prev_arc[v]];
        arc.cap -= push;
        adj_[v][arc.rev].cap += push;
        total += static_cast<double>(push) * arc.cost;
      }
      sent += push;
    }
    return total;
  }

 private:
  std::vector<std::vector<Arc>> adj_;
};

}  // namespace

double min_cost_transport(std::span<const std::uint64_t> supply, std::span<const std::uint64_t> demand,
                          const CostMatrix& cost) {
  if (supply.size() != cost.rows || demand.size() != cost.cols || cost.values.size() != cost.rows * cost.cols) {
    throw ParameterError("cost matrix shape does not match supply/demand");
  }
  const auto total_supply = std::accumulate(supply.begin(), supply.end(), std::uint64_t{0});
  const auto total_demand = std::accumulate(demand.begin(), demand.end(), std::uint64_t{0});
  if (total_supply == 0 || total_supply != total_demand) {
    throw ParameterError("supply and demand totals must be equal and positive");
  }
  for (double c : cost.values) {
    if (!(c >= 0.0) || !std::isfinite(c)) throw ParameterError("transport costs must be finite and non-negative");
  }

  const auto rows = cost.rows;
  const auto cols = cost.cols;
  const std::size_t source = rows + cols;
  const std::size_t sink = source + 1;
  FlowNetwork net(rows + cols + 2);
  for (std::size_t r = 0; r < rows; ++r) net.add_arc(source, r, supply[r], 0.0);
  for (std::size_t c = 0; c < cols; ++c) net.add_arc(rows + c, sink, demand[c], 0.0);
  for (std::size_t r = 0; r < rows; ++r) {
    for (std::size_t c = 0; c < cols; ++c) net.add_arc(r, rows + c, total_supply, cost(r, c));
  }
  return net.min_cost_flow(source, sink, total_supply);
}

double euclidean(std::span<const double> x, std::span<const double> y) {
  double sum = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double d = x[i] - y[i];
    sum += d * d;
  }
  return std::sqrt(sum);
}

double uniform_emd(const std::vector<std::vector<double>>& a, const std::vector<std::vector<double>>& b) {
  if (a.empty() || b.empty()) throw ParameterError("earth mover's distance needs two non-empty point sets");
  CostMatrix cost{a.size(), b.size(), {}};
  cost.values.reserve(a.size() * b.size());
  for (const auto& p : a) {
    for (const auto& q : b) cost.values.push_back(euclidean(p, q));
  }
  // Uniform masses 1/n and 1/m scaled to integers m/g and n/g.
  const auto g = std::gcd(a.size(), b.size());
  const std::vector<std::uint64_t> supply(a.size(), b.size() / g);
  const std::vector<std::uint64_t> demand(b.size(), a.size() / g);
  const auto total = static_cast<double>(a.size() / g * b.size());
  return min_cost_transport(supply, demand, cost) / total;
}

std::optional<double> wmd(const EntitySet& a, const EntitySet& b, const EmbeddingTable& embeddings) {
  std::vector<EntityId> kept_a, kept_b;
  std::vector<std::vector<double>> pa, pb;
  for (const auto& e : a) {
    if (const auto* v = embeddings.find(e)) {
      kept_a.push_back(e);
      pa.push_back(*v);
    }
  }
  for (const auto& e : b) {
    if (const auto* v = embeddings.find(e)) {
      kept_b.push_back(e);
      pb.push_back(*v);
    }
  }
  if (pa.empty() || pb.empty()) return std::nullopt;
  if (kept_a == kept_b) return 0.0;
  // Solve in a fixed orientation so wmd(a, b) and wmd(b, a) run the same arithmetic.
  if (kept_b < kept_a) return uniform_emd(pb, pa);
  return uniform_emd(pa, pb);
}

}  // namespace entgraph
