#include "wordgraph/embedding.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <ostream>
#include <sstream>

#include "wordgraph/detail/rng.hpp"
#include "wordgraph/detail/textio.hpp"
#include "wordgraph/errors.hpp"

namespace wordgraph {

namespace {

// Shared cosine kernel. Exact Cauchy-Schwarz equality (dot^2 == |a|^2 |b|^2)
// is reported as +-1 so that bit-identical vectors score exactly 1.0.
double cosine_from(double dot, double a_sq, double b_sq) {
  if (dot * dot == a_sq * b_sq) return dot >= 0.0 ? 1.0 : -1.0;
  const double c = dot / std::sqrt(a_sq * b_sq);
  return std::clamp(c, -1.0, 1.0);
}

double dot_product(const double* a, const double* b, std::size_t n) {
  double sum = 0.0;
  for (std::size_t i = 0; i < n; ++i) sum += a[i] * b[i];
  return sum;
}

}  // namespace

EmbeddingStore::EmbeddingStore(std::vector<std::string> words,
                               std::vector<double> components, std::size_t dim)
    : words_(std::move(words)), components_(std::move(components)), dim_(dim) {
  if (dim_ == 0) throw DomainError("embedding dimension must be positive");
  if (components_.size() != words_.size() * dim_)
    throw DomainError("component matrix size does not match |words| x dim");

  squared_norms_.resize(words_.size());
  index_.reserve(words_.size());
  for (std::size_t i = 0; i < words_.size(); ++i) {
    if (words_[i].empty()) throw DomainError("empty token at row " + std::to_string(i));
    if (!index_.emplace(words_[i], static_cast<NodeId>(i)).second)
      throw DomainError("duplicate token: " + words_[i]);
    double sq = 0.0;
    for (std::size_t d = 0; d < dim_; ++d) {
      const double c = components_[i * dim_ + d];
      if (!std::isfinite(c))
        throw DomainError("non-finite component in vector for: " + words_[i]);
      sq += c * c;
    }
    if (sq == 0.0)
      throw DomainError("zero-norm vector for: " + words_[i]);
    squared_norms_[i] = sq;
  }
}

const std::string& EmbeddingStore::word(NodeId id) const {
  if (id >= words_.size()) throw DomainError("invalid node id " + std::to_string(id));
  return words_[id];
}

std::optional<NodeId> EmbeddingStore::find(std::string_view token) const {
  const auto it = index_.find(token);
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

std::span<const double> EmbeddingStore::vector(NodeId id) const {
  if (id >= words_.size()) throw DomainError("invalid node id " + std::to_string(id));
  return {components_.data() + static_cast<std::size_t>(id) * dim_, dim_};
}

double EmbeddingStore::similarity(NodeId a, NodeId b) const {
  if (a >= words_.size() || b >= words_.size())
    throw DomainError("invalid node id");
  const double dot = dot_product(components_.data() + static_cast<std::size_t>(a) * dim_,
                                 components_.data() + static_cast<std::size_t>(b) * dim_, dim_);
  return cosine_from(dot, squared_norms_[a], squared_norms_[b]);
}

double cosine_similarity(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size())
    throw DomainError("cosine similarity: dimension mismatch (" +
                      std::to_string(a.size()) + " vs " + std::to_string(b.size()) + ")");
  if (a.empty()) throw DomainError("cosine similarity: empty vectors");
  const double dot = dot_product(a.data(), b.data(), a.size());
  const double a_sq = dot_product(a.data(), a.data(), a.size());
  const double b_sq = dot_product(b.data(), b.data(), b.size());
  if (a_sq == 0.0 || b_sq == 0.0)
    throw DomainError("cosine similarity: zero-norm input");
  return cosine_from(dot, a_sq, b_sq);
}

std::vector<SimilarNeighbor> top_k_neighbors(const EmbeddingStore& store,
                                             NodeId query, std::size_t k,
                                             double floor) {
  if (query >= store.size())
    throw DomainError("invalid node id " + std::to_string(query));
  if (!(floor > 0.0 && floor < 1.0))
    throw DomainError("similarity floor must be in (0, 1)");
  if (k == 0) return {};

  std::vector<SimilarNeighbor> candidates;
  for (NodeId j = 0; j < store.size(); ++j) {
    if (j == query) continue;
    const double sim = store.similarity(query, j);
    if (sim >= floor) candidates.push_back({j, sim});
  }
  const auto better = [](const SimilarNeighbor& x, const SimilarNeighbor& y) {
    if (x.similarity != y.similarity) return x.similarity > y.similarity;
    return x.word_index < y.word_index;
  };
  if (candidates.size() > k) {
    std::partial_sort(candidates.begin(), candidates.begin() + k, candidates.end(), better);
    candidates.resize(k);
  } else {
    std::sort(candidates.begin(), candidates.end(), better);
  }
  return candidates;
}

EmbeddingStore parse_vectors(std::istream& in) {
  std::string line;
  std::size_t line_no = 1;
  if (!detail::getline_crlf(in, line))
    throw ParseError("missing header line", line_no);

  const auto header = detail::split(line, ' ');
  std::uint64_t count = 0;
  std::uint64_t dim = 0;
  if (header.size() != 2 || !detail::parse_u64(header[0], count) ||
      !detail::parse_u64(header[1], dim))
    throw ParseError("malformed header, expected \"<count> <dim>\"", line_no);
  if (dim == 0) throw ParseError("dimension must be positive", line_no);

  std::vector<std::string> words;
  std::vector<double> components;
  words.reserve(count);
  components.reserve(count * dim);

  std::unordered_map<std::string, std::size_t> seen;
  seen.reserve(count);

  while (words.size() < count) {
    ++line_no;
    if (!detail::getline_crlf(in, line))
      throw ParseError("count mismatch: header says " + std::to_string(count) +
                           " rows but stream ended after " + std::to_string(words.size()),
                       line_no);
    const auto fields = detail::split(line, ' ');
    if (fields.size() != dim + 1)
      throw ParseError("row has " + std::to_string(fields.size() ? fields.size() - 1 : 0) +
                           " of " + std::to_string(dim) + " components",
                       line_no);
    if (fields[0].empty()) throw ParseError("empty token", line_no);
    if (fields[0].find('\t') != std::string_view::npos)
      throw ParseError("token contains a tab character", line_no);
    std::string token(fields[0]);
    if (!seen.emplace(token, line_no).second)
      throw ParseError("duplicate token: " + token, line_no);

    double sq = 0.0;
    for (std::size_t d = 1; d <= dim; ++d) {
      double value = 0.0;
      if (!detail::parse_double(fields[d], value))
        throw ParseError("malformed component " + std::to_string(d), line_no);
      if (!std::isfinite(value))
        throw ParseError("non-finite component " + std::to_string(d), line_no);
      components.push_back(value);
      sq += value * value;
    }
    if (sq == 0.0)
      throw ParseError("zero vector for token: " + token, line_no);
    words.push_back(std::move(token));
  }

  // Anything but trailing blank lines means the header count was wrong.
  while (detail::getline_crlf(in, line)) {
    ++line_no;
    if (!line.empty())
      throw ParseError("count mismatch: more rows than the header's " +
                           std::to_string(count),
                       line_no);
  }

  return EmbeddingStore(std::move(words), std::move(components),
                        static_cast<std::size_t>(dim));
}

EmbeddingStore load_vectors(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open vectors file: " + path);
  return parse_vectors(in);
}

void save_vectors(const EmbeddingStore& store, std::ostream& out) {
  out << store.size() << ' ' << store.dim() << '\n';
  for (NodeId i = 0; i < store.size(); ++i) {
    out << store.word(i);
    for (const double c : store.vector(i)) out << ' ' << detail::format_fixed(c);
    out << '\n';
  }
}

void save_vectors_file(const EmbeddingStore& store, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open for writing: " + path);
  save_vectors(store, out);
  if (!out) throw IoError("write failed: " + path);
}

namespace {

void normalize_in_place(std::vector<double>& v) {
  double sq = 0.0;
  for (const double c : v) sq += c * c;
  const double norm = std::sqrt(sq);
  for (double& c : v) c /= norm;
}

// Gram-Schmidt centers: orthonormal while the cluster count fits the
// dimension; later centers fall back to plain normalized draws.
std::vector<std::vector<double>> make_centers(std::size_t count, std::size_t dim,
                                              detail::Rng& rng) {
  std::vector<std::vector<double>> centers;
  centers.reserve(count);
  for (std::size_t c = 0; c < count; ++c) {
    std::vector<double> v(dim);
    bool ok = false;
    for (int attempt = 0; attempt < 16 && !ok; ++attempt) {
      for (double& x : v) x = rng.gaussian();
      for (const auto& prev : centers) {
        double proj = 0.0;
        for (std::size_t d = 0; d < dim; ++d) proj += v[d] * prev[d];
        for (std::size_t d = 0; d < dim; ++d) v[d] -= proj * prev[d];
      }
      double sq = 0.0;
      for (const double x : v) sq += x * x;
      if (sq > 1e-12) ok = true;
    }
    if (!ok) {
      // More clusters than dimensions: give up on orthogonality.
      for (double& x : v) x = rng.gaussian();
    }
    normalize_in_place(v);
    centers.push_back(std::move(v));
  }
  return centers;
}

}  // namespace

SyntheticEmbeddings generate_synthetic(std::size_t num_clusters,
                                       std::size_t words_per_cluster,
                                       std::size_t dim, double noise,
                                       std::uint64_t rng_seed) {
  if (num_clusters == 0 || words_per_cluster == 0 || dim == 0)
    throw DomainError("cluster count, words per cluster and dim must be positive");
  if (noise < 0.0) throw DomainError("noise must be >= 0");

  detail::Rng rng(rng_seed);
  const auto centers = make_centers(num_clusters, dim, rng);

  std::vector<std::string> words;
  std::vector<double> components;
  std::vector<std::uint32_t> labels;
  words.reserve(num_clusters * words_per_cluster);
  components.reserve(num_clusters * words_per_cluster * dim);
  labels.reserve(num_clusters * words_per_cluster);

  std::vector<double> v(dim);
  for (std::size_t c = 0; c < num_clusters; ++c) {
    for (std::size_t w = 0; w < words_per_cluster; ++w) {
      words.push_back("c" + std::to_string(c) + "_w" + std::to_string(w));
      labels.push_back(static_cast<std::uint32_t>(c));
      if (noise > 0.0) {
        double sq = 0.0;
        do {
          sq = 0.0;
          for (std::size_t d = 0; d < dim; ++d) {
            v[d] = centers[c][d] + noise * rng.gaussian();
            sq += v[d] * v[d];
          }
        } while (sq <= 1e-18);
        const double norm = std::sqrt(sq);
        for (std::size_t d = 0; d < dim; ++d) components.push_back(v[d] / norm);
      } else {
        // Zero noise keeps the center bytes verbatim, so vectors inside a
        // cluster are identical and their cosine is exactly 1.
        components.insert(components.end(), centers[c].begin(), centers[c].end());
      }
    }
  }

  return {EmbeddingStore(std::move(words), std::move(components), dim), std::move(labels)};
}

}  // namespace wordgraph
