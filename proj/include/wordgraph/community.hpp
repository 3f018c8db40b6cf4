#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "wordgraph/detail/level_graph.hpp"
#include "wordgraph/graph.hpp"

namespace wordgraph {

/// Assignment of every node to exactly one community. Ids are compact
/// 0..community_count-1, relabeled by ascending original label value.
class Partition {
 public:
  static Partition singletons(std::size_t n);

  /// Compacts arbitrary labels into 0..count-1, preserving the relative
  /// order of the original label values.
  static Partition from_assignment(std::vector<std::uint32_t> assignment);

  std::uint32_t community_of(NodeId id) const;
  std::uint32_t community_count() const noexcept { return count_; }
  std::size_t size() const noexcept { return assignment_.size(); }
  std::span<const std::uint32_t> assignment() const noexcept { return assignment_; }

  /// Member node ids per community, ascending.
  std::vector<std::vector<NodeId>> members() const;

 private:
  std::vector<std::uint32_t> assignment_;
  std::uint32_t count_ = 0;
};

struct CommunityWeights {
  std::vector<double> sigma_tot;  // sum of weighted degrees of members
  std::vector<double> sigma_in;   // 2x sum of intra-community edge weights
};

CommunityWeights community_weights(const SimilarityGraph& g, const Partition& p);

/// Weighted modularity Q of a partition, evaluated in the per-community
/// sigma_in/sigma_tot form. Throws DomainError on an edgeless graph.
double modularity(const SimilarityGraph& g, const Partition& p);

/// Community-level graph: one node per community, inter-community edge
/// weights summed, intra-community weight kept as a self-loop counted once
/// toward the total weight, so m is invariant across levels.
class AggregatedGraph {
 public:
  std::size_t node_count() const { return lg_.node_count(); }
  double total_weight() const { return lg_.total_weight; }
  double self_loop(NodeId c) const;
  double weighted_degree(NodeId c) const;
  std::span<const std::uint32_t> neighbor_ids(NodeId c) const;
  std::span<const double> neighbor_weights(NodeId c) const;

  /// Modularity of a partition over the aggregate's nodes; the trivial
  /// (singleton) partition reproduces the modularity of the collapsed
  /// partition on the original graph.
  double modularity(const Partition& p) const;

 private:
  friend AggregatedGraph aggregate(const SimilarityGraph&, const Partition&);
  detail::LevelGraph lg_;
};

AggregatedGraph aggregate(const SimilarityGraph& g, const Partition& p);

struct LouvainLevel {
  std::size_t level;       // 1-based
  std::size_t node_count;  // nodes of the graph this level ran on
  double modularity;       // Q after the level's local-move phase
};

struct LouvainResult {
  Partition partition;
  double modularity;
  std::vector<LouvainLevel> levels;
};

/// Louvain modularity maximization: local-move sweeps then aggregation,
/// iterated until a level yields no improving move. Node visit order is
/// ascending id by default; a seeded shuffle is used when rng_seed is set.
/// A move requires a modularity gain strictly above min_gain; equal-gain
/// targets resolve to the lowest community id, and staying put wins over
/// zero-gain moves. Deterministic (bit-reproducible) for fixed inputs.
LouvainResult louvain(const SimilarityGraph& g, double min_gain = 1e-7,
                      std::optional<std::uint64_t> rng_seed = std::nullopt);

/// Partition TSV: "word<TAB>community_id", sorted by word.
void save_partition(const SimilarityGraph& g, const Partition& p, std::ostream& out);
void save_partition_file(const SimilarityGraph& g, const Partition& p,
                         const std::string& path);

/// Reads a partition TSV back against a graph's vocabulary. Every graph
/// node must be assigned exactly once; community ids are compacted by
/// ascending file id (already-compact files round-trip unchanged).
Partition load_partition(const SimilarityGraph& g, std::istream& in);
Partition load_partition_file(const SimilarityGraph& g, const std::string& path);

/// Pair-counting agreement between two labelings of the same nodes,
/// adjusted for chance (1 = identical up to relabeling, ~0 = random).
double adjusted_rand_index(std::span<const std::uint32_t> a,
                           std::span<const std::uint32_t> b);

}  // namespace wordgraph
