#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace wordgraph {
class SimilarityGraph;
}

namespace wordgraph::detail {

// Working graph for community detection. Unlike SimilarityGraph it carries
// self-loop weights (counted once toward the total weight m) and arbitrary
// positive edge weights, which is what aggregation produces.
struct LevelGraph {
  std::vector<std::size_t> offsets;  // n + 1
  std::vector<std::uint32_t> nbr;    // no self entries
  std::vector<double> weight;
  std::vector<double> self_weight;   // intra weight, counted once in m
  std::vector<double> degree;        // k_i = sum of incident w + 2 * self
  double total_weight = 0.0;         // m

  std::size_t node_count() const { return self_weight.size(); }

  std::span<const std::uint32_t> neighbors(std::uint32_t i) const {
    return {nbr.data() + offsets[i], offsets[i + 1] - offsets[i]};
  }
  std::span<const double> weights(std::uint32_t i) const {
    return {weight.data() + offsets[i], offsets[i + 1] - offsets[i]};
  }

  static LevelGraph from_similarity(const SimilarityGraph& g);
};

// sigma_in / sigma_tot sums per community for an assignment over lg's nodes.
struct CommunitySums {
  std::vector<double> sigma_tot;
  std::vector<double> sigma_in;
};

CommunitySums community_sums(const LevelGraph& lg,
                             std::span<const std::uint32_t> assignment,
                             std::uint32_t community_count);

// Q = sum_c [sigma_in_c / 2m - (sigma_tot_c / 2m)^2].
double modularity_of(const LevelGraph& lg, std::span<const std::uint32_t> assignment,
                     std::uint32_t community_count);

// Collapses communities into nodes: inter-community weights summed, intra
// weight (plus member self-loops) kept as the new node's self-loop. The
// assignment must be compact.
LevelGraph aggregate_level(const LevelGraph& lg,
                           std::span<const std::uint32_t> assignment,
                           std::uint32_t community_count);

}  // namespace wordgraph::detail
