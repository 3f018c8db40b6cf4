#pragma once

#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "wordgraph/embedding.hpp"

namespace wordgraph {

struct WeightedEdge {
  NodeId a;
  NodeId b;
  double weight;
};

/// Undirected weighted word graph. Immutable once built. Adjacency is CSR
/// with per-node neighbor lists sorted by id; every edge appears in both
/// lists with the identical weight. No self-loops, no parallel edges,
/// weights in (0, 1].
class SimilarityGraph {
 public:
  /// Validates and assembles the CSR form. Edges may arrive in any order
  /// and with either endpoint first.
  static SimilarityGraph build(std::vector<std::string> labels,
                               std::vector<WeightedEdge> edges);

  std::size_t node_count() const noexcept { return labels_.size(); }
  std::size_t edge_count() const noexcept { return nbr_.size() / 2; }

  const std::string& label(NodeId id) const;
  const std::vector<std::string>& labels() const noexcept { return labels_; }
  std::optional<NodeId> find(std::string_view word) const;

  std::span<const NodeId> neighbor_ids(NodeId id) const;
  std::span<const double> neighbor_weights(NodeId id) const;

  /// k_i: sum of incident edge weights; 0 for isolated nodes.
  double weighted_degree(NodeId id) const;

  /// m: sum of all edge weights, each undirected edge counted once.
  double total_edge_weight() const noexcept { return total_weight_; }

  /// Edge list with a < b, sorted by (a, b).
  std::vector<WeightedEdge> edges() const;

 private:
  SimilarityGraph() = default;

  struct StringHash {
    using is_transparent = void;
    std::size_t operator()(std::string_view s) const {
      return std::hash<std::string_view>{}(s);
    }
  };

  std::vector<std::string> labels_;
  std::unordered_map<std::string, NodeId, StringHash, std::equal_to<>> index_;
  std::vector<std::size_t> offsets_;  // node_count + 1
  std::vector<NodeId> nbr_;
  std::vector<double> weight_;
  std::vector<double> degree_;
  double total_weight_ = 0.0;
};

/// Builds the pruned similarity graph: nodes are the full vocabulary
/// (isolated nodes permitted); an edge {i, j} exists iff j is in the top-k
/// list of i or i is in the top-k list of j (union symmetrization), with the
/// cosine similarity as weight. Neighbor lists are computed in parallel;
/// the result does not depend on the thread count.
SimilarityGraph build_graph(const EmbeddingStore& store, std::size_t k,
                            double floor, unsigned threads = 0);

struct InducedSubgraph {
  SimilarityGraph graph;
  std::vector<NodeId> original_ids;  // new id -> id in the parent graph
};

/// Induced subgraph on a node set, with compact re-indexed ids (ascending
/// original id) and the original labels retained. Throws on unknown ids.
InducedSubgraph induced_subgraph(const SimilarityGraph& g,
                                 std::span<const NodeId> nodes);

/// Edge TSV: "word_a<TAB>word_b<TAB>weight" per undirected edge. Loading
/// accepts edges in any order; node ids are assigned by sorted word order.
/// Saving emits the canonical form: word_a < word_b, lines sorted, weights
/// with 6 decimals.
SimilarityGraph load_edges(std::istream& in);
SimilarityGraph load_edges_file(const std::string& path);
void save_edges(const SimilarityGraph& g, std::ostream& out);
void save_edges_file(const SimilarityGraph& g, const std::string& path);

/// GraphML with a string "label" attribute per node and a double "weight"
/// attribute per edge.
void write_graphml(const SimilarityGraph& g, std::ostream& out);

/// Graphviz DOT with the weight as edge label.
void write_dot(const SimilarityGraph& g, std::ostream& out);

}  // namespace wordgraph
