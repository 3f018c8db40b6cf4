#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "wordgraph/community.hpp"
#include "wordgraph/graph.hpp"

namespace wordgraph {

// How a similarity in (0,1) becomes a shortest-path distance. Similar words
// must end up close together, so both transforms are strictly decreasing.
enum class DistanceTransform {
  kOneMinus,    // 1 - s
  kReciprocal,  // 1 / s
};

std::string to_string(DistanceTransform transform);
DistanceTransform transform_from_string(std::string_view name);

// Maps a similarity to a positive distance. Throws DomainError unless the
// similarity lies strictly inside (0,1).
double distance_of(DistanceTransform transform, double similarity);

struct CentralityTable {
  std::vector<double> scores;  // betweenness per node id
  bool normalized = false;     // true when scaled by 2/((n-1)(n-2))
};

struct BetweennessOptions {
  DistanceTransform transform = DistanceTransform::kOneMinus;
  bool normalize = false;
  int threads = 0;  // 0 = all hardware threads
};

// Exact weighted betweenness: unordered pairs counted once, endpoints
// excluded, path-length ties within 1e-12 all contribute to the path counts.
CentralityTable betweenness(const SimilarityGraph& g, const BetweennessOptions& options = {});

// Source-sampling estimate: accumulates dependencies from `samples` distinct
// sources chosen uniformly and rescales by n/samples. samples >= n degrades
// to the exact computation.
CentralityTable betweenness_sampled(const SimilarityGraph& g, std::size_t samples,
                                    std::uint64_t rng_seed,
                                    const BetweennessOptions& options = {});

struct SeedEntry {
  std::string word;
  double score = 0.0;             // betweenness inside the community subgraph
  double normalized_score = 0.0;  // same, scaled by 2/((n-1)(n-2)); 0 when n < 3
};

struct CommunitySeeds {
  std::uint32_t community_id = 0;
  std::size_t size = 0;
  bool approximate = false;  // true when scores came from source sampling
  std::vector<SeedEntry> seeds;
  std::vector<std::string> members_sample;
};

struct SeedReport {
  std::vector<CommunitySeeds> communities;
};

struct SeedOptions {
  std::size_t top_r = 10;
  DistanceTransform transform = DistanceTransform::kOneMinus;
  bool normalize = false;
  int threads = 0;
  std::size_t members_sample_size = 10;
  // Source sampling for oversized communities; disabled unless approx is set.
  bool approx = false;
  std::size_t approx_cutoff = 20000;
  std::size_t approx_samples = 256;
  std::uint64_t rng_seed = 0;
};

// Ranks each community's members by betweenness on the induced subgraph.
// Seeds are ordered by descending score, ties by ascending word; at most
// top_r entries per community. Throws DomainError when top_r is zero.
SeedReport extract_seeds(const SimilarityGraph& g, const Partition& p,
                         const SeedOptions& options = {});

// JSON serialization of a seed report (stable key order, 7-decimal scores).
void write_seed_report(const SeedReport& report, std::ostream& out);
void write_seed_report_file(const SeedReport& report, const std::string& path);

}  // namespace wordgraph
