#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace wordgraph {

using NodeId = std::uint32_t;

/// One neighbor of a query word. Similarity is always positive; neighbors
/// with non-positive cosine are never emitted.
struct SimilarNeighbor {
  NodeId word_index;
  double similarity;
};

/// Immutable vocabulary of words with one fixed-dimension real vector per
/// word. Node ids equal insertion order. Vectors are stored exactly as
/// ingested; normalization happens inside the similarity computation.
class EmbeddingStore {
 public:
  /// Takes ownership of the words and the row-major |words| x dim component
  /// matrix. Rejects duplicate words, wrong-size matrices, non-finite
  /// components and rows whose norm is zero (or underflows to zero).
  EmbeddingStore(std::vector<std::string> words, std::vector<double> components,
                 std::size_t dim);

  std::size_t size() const noexcept { return words_.size(); }
  std::size_t dim() const noexcept { return dim_; }

  const std::string& word(NodeId id) const;
  const std::vector<std::string>& words() const noexcept { return words_; }
  std::optional<NodeId> find(std::string_view token) const;

  std::span<const double> vector(NodeId id) const;

  /// Cosine similarity between two stored vectors, using cached norms.
  /// Symmetric bit-for-bit and clamped to [-1, 1].
  double similarity(NodeId a, NodeId b) const;

 private:
  struct StringHash {
    using is_transparent = void;
    std::size_t operator()(std::string_view s) const {
      return std::hash<std::string_view>{}(s);
    }
  };

  std::vector<std::string> words_;
  std::vector<double> components_;  // size() x dim(), row-major
  std::vector<double> squared_norms_;
  std::size_t dim_;
  std::unordered_map<std::string, NodeId, StringHash, std::equal_to<>> index_;
};

/// Reads word2vec text format: a "<count> <dim>" header line, then one line
/// per word with single-space separated decimal components. Tolerates CRLF.
/// Throws ParseError with a 1-based line number on any malformed input.
EmbeddingStore parse_vectors(std::istream& in);
EmbeddingStore load_vectors(const std::string& path);

/// Re-emits the same format with fixed 6-decimal components.
void save_vectors(const EmbeddingStore& store, std::ostream& out);
void save_vectors_file(const EmbeddingStore& store, const std::string& path);

/// dot(a,b) / (|a| * |b|), symmetric in its arguments and clamped to
/// [-1, 1]; exact Cauchy-Schwarz equality (e.g. identical vectors) yields
/// exactly +-1. Throws DomainError on dimension mismatch or zero norm.
double cosine_similarity(std::span<const double> a, std::span<const double> b);

/// At most k neighbors of the query word with similarity >= floor, sorted by
/// descending similarity, ties broken by ascending node id. The query itself
/// is excluded. Requires 0 < floor < 1.
std::vector<SimilarNeighbor> top_k_neighbors(const EmbeddingStore& store,
                                             NodeId query, std::size_t k,
                                             double floor);

struct SyntheticEmbeddings {
  EmbeddingStore store;
  std::vector<std::uint32_t> labels;  // planted cluster per node id
};

/// Deterministic synthetic vocabulary with planted cluster structure: words
/// are named "c<i>_w<j>", vectors are a unit-norm cluster center plus
/// isotropic gaussian noise, renormalized. Cluster centers are orthonormal
/// while num_clusters <= dim, so the planted margin is large.
SyntheticEmbeddings generate_synthetic(std::size_t num_clusters,
                                       std::size_t words_per_cluster,
                                       std::size_t dim, double noise,
                                       std::uint64_t rng_seed);

}  // namespace wordgraph
