#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>

#include "wordgraph/centrality.hpp"

namespace wordgraph {

// Run parameters shared by the file-driven stages. Loadable from a JSON
// config file; command-line flags override individual fields.
struct PipelineConfig {
  std::string vectors_path;
  std::size_t k = 25;
  double floor = 0.5;
  double min_gain = 1e-7;
  std::optional<std::uint64_t> rng_seed;  // absent = deterministic ascending order
  DistanceTransform transform = DistanceTransform::kOneMinus;
  bool normalize = false;
  std::size_t top_r = 10;
  std::string output_dir = ".";
  int threads = 0;  // 0 = all hardware threads
  bool approx = false;
  std::size_t approx_cutoff = 20000;
  std::size_t approx_samples = 256;
};

// Throws ConfigError when any field is outside its domain.
void validate(const PipelineConfig& config);

// Parses a JSON config and merges it over the defaults. Unknown keys and
// wrong types are ConfigErrors; the file must be a single JSON object.
PipelineConfig load_config(std::istream& in);
PipelineConfig load_config_file(const std::string& path);

struct BuildGraphOutputs {
  std::string edges_path;
  std::string graphml_path;
  std::string dot_path;
  std::string stats_path;
  std::size_t nodes = 0;
  std::size_t edges = 0;
};

struct CommunitiesOutputs {
  std::string partition_path;
  std::string summary_path;
  double modularity = 0.0;
  std::uint32_t community_count = 0;
};

struct SeedsOutputs {
  std::string report_path;
};

struct SyntheticParams {
  std::size_t clusters = 8;
  std::size_t words_per_cluster = 200;
  std::size_t dim = 32;
  double noise = 0.05;
  std::uint64_t seed = 42;
};

struct SyntheticOutputs {
  std::string vectors_path;
  std::string labels_path;
};

struct PipelineOutputs {
  BuildGraphOutputs build;
  CommunitiesOutputs communities;
  SeedsOutputs seeds;
  std::string manifest_path;
};

// Stage runners. Each validates its config, writes canonical artifacts under
// config.output_dir, and reports progress to `log` (pass nullptr to silence).
BuildGraphOutputs run_build_graph(const PipelineConfig& config,
                                  std::ostream* log = nullptr);
CommunitiesOutputs run_communities(const PipelineConfig& config,
                                   const std::string& edges_path,
                                   std::ostream* log = nullptr);
SeedsOutputs run_seeds(const PipelineConfig& config, const std::string& edges_path,
                       const std::string& partition_path,
                       std::ostream* log = nullptr);
SyntheticOutputs run_gen_synthetic(const SyntheticParams& params,
                                   const std::string& output_dir,
                                   std::ostream* log = nullptr);

// Full chain: build-graph, communities, seeds, then a run manifest with a
// config echo and SHA-256 digests of the input and every artifact. Stages
// communicate through their files, so each written artifact is re-read and
// re-validated by the next stage.
PipelineOutputs run_pipeline(const PipelineConfig& config, std::ostream* log = nullptr);

}  // namespace wordgraph
