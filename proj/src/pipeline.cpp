#include "wordgraph/pipeline.hpp"

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>
#include <numeric>
#include <ostream>
#include <vector>

#include "json.hpp"

#include "wordgraph/embedding.hpp"
#include "wordgraph/errors.hpp"
#include "wordgraph/graph.hpp"
#include "wordgraph/sha256.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace wordgraph {

namespace {

#ifndef WORDGRAPH_VERSION_STRING
#define WORDGRAPH_VERSION_STRING "0.0.0"
#endif

void say(std::ostream* log, const std::string& message) {
  if (log) *log << message << "\n" << std::flush;
}

std::string join_path(const std::string& dir, const std::string& name) {
  return (fs::path(dir) / name).string();
}

void ensure_dir(const std::string& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw IoError("cannot create output directory " + dir + ": " + ec.message());
}

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open for writing: " + path);
  out << text;
  if (!out) throw IoError("write failed: " + path);
}

void write_json_file(const json& j, const std::string& path) {
  write_text_file(path, j.dump(2) + "\n");
}

double round_ms(double seconds) { return std::round(seconds * 1000.0) / 1000.0; }

class StageTimer {
 public:
  StageTimer() : start_(std::chrono::steady_clock::now()) {}
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_)
        .count();
  }

 private:
  std::chrono::steady_clock::time_point start_;
};

json config_echo(const PipelineConfig& config) {
  json j;
  j["vectors_path"] = config.vectors_path;
  j["k"] = config.k;
  j["floor"] = config.floor;
  j["min_gain"] = config.min_gain;
  if (config.rng_seed)
    j["rng_seed"] = *config.rng_seed;
  else
    j["rng_seed"] = nullptr;
  j["transform"] = to_string(config.transform);
  j["normalize"] = config.normalize;
  j["top_r"] = config.top_r;
  j["output_dir"] = config.output_dir;
  j["threads"] = config.threads;
  j["approx"] = config.approx;
  j["approx_cutoff"] = config.approx_cutoff;
  j["approx_samples"] = config.approx_samples;
  return j;
}

std::uint64_t require_uint(const json& value, const std::string& key) {
  if (!value.is_number_unsigned())
    throw ConfigError("config key \"" + key + "\" must be a non-negative integer");
  return value.get<std::uint64_t>();
}

double require_number(const json& value, const std::string& key) {
  if (!value.is_number())
    throw ConfigError("config key \"" + key + "\" must be a number");
  return value.get<double>();
}

std::string require_string(const json& value, const std::string& key) {
  if (!value.is_string())
    throw ConfigError("config key \"" + key + "\" must be a string");
  return value.get<std::string>();
}

bool require_bool(const json& value, const std::string& key) {
  if (!value.is_boolean())
    throw ConfigError("config key \"" + key + "\" must be a boolean");
  return value.get<bool>();
}

}  // namespace

void validate(const PipelineConfig& config) {
  if (config.k == 0) throw ConfigError("k must be at least 1");
  if (!(config.floor > 0.0 && config.floor < 1.0))
    throw ConfigError("floor must lie strictly inside (0,1)");
  if (!(config.min_gain >= 0.0) || !std::isfinite(config.min_gain))
    throw ConfigError("min_gain must be a finite value >= 0");
  if (config.top_r == 0) throw ConfigError("top_r must be at least 1");
  if (config.threads < 0) throw ConfigError("threads must be >= 0");
  if (config.approx_samples == 0)
    throw ConfigError("approx_samples must be at least 1");
  if (config.output_dir.empty()) throw ConfigError("output_dir must not be empty");
}

PipelineConfig load_config(std::istream& in) {
  json j;
  try {
    j = json::parse(in);
  } catch (const json::parse_error& err) {
    throw ConfigError(std::string("config is not valid JSON: ") + err.what());
  }
  if (!j.is_object()) throw ConfigError("config must be a JSON object");

  PipelineConfig config;
  for (const auto& [key, value] : j.items()) {
    if (key == "vectors_path") {
      config.vectors_path = require_string(value, key);
    } else if (key == "k") {
      config.k = static_cast<std::size_t>(require_uint(value, key));
    } else if (key == "floor") {
      config.floor = require_number(value, key);
    } else if (key == "min_gain") {
      config.min_gain = require_number(value, key);
    } else if (key == "rng_seed") {
      if (value.is_null())
        config.rng_seed.reset();
      else
        config.rng_seed = require_uint(value, key);
    } else if (key == "transform") {
      try {
        config.transform = transform_from_string(require_string(value, key));
      } catch (const DomainError& err) {
        throw ConfigError(err.what());
      }
    } else if (key == "normalize") {
      config.normalize = require_bool(value, key);
    } else if (key == "top_r") {
      config.top_r = static_cast<std::size_t>(require_uint(value, key));
    } else if (key == "output_dir") {
      config.output_dir = require_string(value, key);
    } else if (key == "threads") {
      config.threads = static_cast<int>(require_uint(value, key));
    } else if (key == "approx") {
      config.approx = require_bool(value, key);
    } else if (key == "approx_cutoff") {
      config.approx_cutoff = static_cast<std::size_t>(require_uint(value, key));
    } else if (key == "approx_samples") {
      config.approx_samples = static_cast<std::size_t>(require_uint(value, key));
    } else {
      throw ConfigError("unknown config key: \"" + key + "\"");
    }
  }
  validate(config);
  return config;
}

PipelineConfig load_config_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open config file: " + path);
  return load_config(in);
}

BuildGraphOutputs run_build_graph(const PipelineConfig& config, std::ostream* log) {
  validate(config);
  if (config.vectors_path.empty())
    throw ConfigError("vectors_path is required for build-graph");

  say(log, "[build-graph] loading vectors from " + config.vectors_path);
  const EmbeddingStore store = load_vectors(config.vectors_path);
  say(log, "[build-graph] " + std::to_string(store.size()) + " words, dim " +
               std::to_string(store.dim()));

  const SimilarityGraph graph =
      build_graph(store, config.k, config.floor, config.threads);
  say(log, "[build-graph] graph: " + std::to_string(graph.node_count()) +
               " nodes, " + std::to_string(graph.edge_count()) + " edges");

  ensure_dir(config.output_dir);
  BuildGraphOutputs out;
  out.nodes = graph.node_count();
  out.edges = graph.edge_count();
  out.edges_path = join_path(config.output_dir, "edges.tsv");
  save_edges_file(graph, out.edges_path);

  out.graphml_path = join_path(config.output_dir, "graph.graphml");
  {
    std::ofstream file(out.graphml_path, std::ios::binary);
    if (!file) throw IoError("cannot open for writing: " + out.graphml_path);
    write_graphml(graph, file);
    if (!file) throw IoError("write failed: " + out.graphml_path);
  }

  out.dot_path = join_path(config.output_dir, "graph.dot");
  {
    std::ofstream file(out.dot_path, std::ios::binary);
    if (!file) throw IoError("cannot open for writing: " + out.dot_path);
    write_dot(graph, file);
    if (!file) throw IoError("write failed: " + out.dot_path);
  }

  std::array<std::uint64_t, 10> histogram{};
  for (const auto& edge : graph.edges()) {
    auto bin = static_cast<std::size_t>(edge.weight * 10.0);
    histogram[std::min<std::size_t>(bin, 9)] += 1;
  }
  json stats;
  stats["schema_version"] = 1;
  stats["nodes"] = out.nodes;
  stats["edges"] = out.edges;
  stats["mean_degree"] =
      out.nodes == 0 ? 0.0 : 2.0 * static_cast<double>(out.edges) / out.nodes;
  stats["weight_histogram"]["bin_width"] = 0.1;
  stats["weight_histogram"]["counts"] = histogram;
  out.stats_path = join_path(config.output_dir, "build_stats.json");
  write_json_file(stats, out.stats_path);

  say(log, "[build-graph] wrote " + out.edges_path);
  return out;
}

CommunitiesOutputs run_communities(const PipelineConfig& config,
                                   const std::string& edges_path,
                                   std::ostream* log) {
  validate(config);
  say(log, "[communities] loading graph from " + edges_path);
  const SimilarityGraph graph = load_edges_file(edges_path);
  say(log, "[communities] " + std::to_string(graph.node_count()) + " nodes, " +
               std::to_string(graph.edge_count()) + " edges");

  const LouvainResult result = louvain(graph, config.min_gain, config.rng_seed);
  for (const auto& level : result.levels)
    say(log, "[communities] level " + std::to_string(level.level) + ": " +
                 std::to_string(level.node_count) + " nodes, Q=" +
                 std::to_string(level.modularity));

  ensure_dir(config.output_dir);
  CommunitiesOutputs out;
  out.modularity = result.modularity;
  out.community_count = result.partition.community_count();
  out.partition_path = join_path(config.output_dir, "partition.tsv");
  save_partition_file(graph, result.partition, out.partition_path);

  std::vector<std::size_t> sizes(result.partition.community_count(), 0);
  for (const std::uint32_t c : result.partition.assignment()) sizes[c] += 1;
  json summary;
  summary["schema_version"] = 1;
  json levels = json::array();
  for (const auto& level : result.levels) {
    json entry;
    entry["level"] = level.level;
    entry["nodes"] = level.node_count;
    entry["modularity"] = level.modularity;
    levels.push_back(entry);
  }
  summary["levels"] = levels;
  summary["modularity"] = result.modularity;
  summary["community_count"] = out.community_count;
  summary["community_sizes"] = sizes;
  out.summary_path = join_path(config.output_dir, "communities_summary.json");
  write_json_file(summary, out.summary_path);

  say(log, "[communities] " + std::to_string(out.community_count) +
               " communities, Q=" + std::to_string(out.modularity));
  return out;
}

SeedsOutputs run_seeds(const PipelineConfig& config, const std::string& edges_path,
                       const std::string& partition_path, std::ostream* log) {
  validate(config);
  say(log, "[seeds] loading graph from " + edges_path);
  const SimilarityGraph graph = load_edges_file(edges_path);
  say(log, "[seeds] loading partition from " + partition_path);
  const Partition partition = load_partition_file(graph, partition_path);

  SeedOptions options;
  options.top_r = config.top_r;
  options.transform = config.transform;
  options.normalize = config.normalize;
  options.threads = config.threads;
  options.approx = config.approx;
  options.approx_cutoff = config.approx_cutoff;
  options.approx_samples = config.approx_samples;
  options.rng_seed = config.rng_seed.value_or(0);

  say(log, "[seeds] ranking " + std::to_string(partition.community_count()) +
               " communities");
  const SeedReport report = extract_seeds(graph, partition, options);

  ensure_dir(config.output_dir);
  SeedsOutputs out;
  out.report_path = join_path(config.output_dir, "seed_report.json");
  write_seed_report_file(report, out.report_path);
  say(log, "[seeds] wrote " + out.report_path);
  return out;
}

SyntheticOutputs run_gen_synthetic(const SyntheticParams& params,
                                   const std::string& output_dir,
                                   std::ostream* log) {
  if (params.clusters == 0) throw ConfigError("clusters must be at least 1");
  if (params.words_per_cluster == 0)
    throw ConfigError("words_per_cluster must be at least 1");
  if (params.dim == 0) throw ConfigError("dim must be at least 1");
  if (!(params.noise >= 0.0) || !std::isfinite(params.noise))
    throw ConfigError("noise must be a finite value >= 0");
  if (output_dir.empty()) throw ConfigError("output_dir must not be empty");

  say(log, "[gen-synthetic] " + std::to_string(params.clusters) + " clusters x " +
               std::to_string(params.words_per_cluster) + " words, dim " +
               std::to_string(params.dim));
  const SyntheticEmbeddings data =
      generate_synthetic(params.clusters, params.words_per_cluster, params.dim,
                         params.noise, params.seed);

  ensure_dir(output_dir);
  SyntheticOutputs out;
  out.vectors_path = join_path(output_dir, "vectors.txt");
  save_vectors_file(data.store, out.vectors_path);

  std::vector<std::size_t> order(data.store.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return data.store.word(static_cast<NodeId>(a)) <
           data.store.word(static_cast<NodeId>(b));
  });
  std::string labels;
  for (const std::size_t i : order) {
    labels += data.store.word(static_cast<NodeId>(i));
    labels += '\t';
    labels += std::to_string(data.labels[i]);
    labels += '\n';
  }
  out.labels_path = join_path(output_dir, "labels.tsv");
  write_text_file(out.labels_path, labels);

  say(log, "[gen-synthetic] wrote " + out.vectors_path);
  return out;
}

PipelineOutputs run_pipeline(const PipelineConfig& config, std::ostream* log) {
  validate(config);
  if (config.vectors_path.empty())
    throw ConfigError("vectors_path is required for the pipeline");

  PipelineOutputs out;
  std::map<std::string, double> timings;

  {
    StageTimer timer;
    out.build = run_build_graph(config, log);
    timings["build_graph"] = round_ms(timer.seconds());
  }
  {
    StageTimer timer;
    out.communities = run_communities(config, out.build.edges_path, log);
    timings["communities"] = round_ms(timer.seconds());
  }
  {
    StageTimer timer;
    out.seeds = run_seeds(config, out.build.edges_path,
                          out.communities.partition_path, log);
    timings["seeds"] = round_ms(timer.seconds());
  }

  json manifest;
  manifest["schema_version"] = 1;
  manifest["tool"]["name"] = "wordgraph";
  manifest["tool"]["version"] = WORDGRAPH_VERSION_STRING;
  manifest["config"] = config_echo(config);
  manifest["input"]["vectors_path"] = config.vectors_path;
  manifest["input"]["sha256"] = Sha256::hex_digest_file(config.vectors_path);

  // Digests are keyed by file name, not path, so identical runs in different
  // directories still produce identical artifact maps.
  json artifacts;
  for (const std::string& path :
       {out.build.edges_path, out.build.graphml_path, out.build.dot_path,
        out.build.stats_path, out.communities.partition_path,
        out.communities.summary_path, out.seeds.report_path})
    artifacts[fs::path(path).filename().string()] = Sha256::hex_digest_file(path);
  manifest["artifacts"] = artifacts;
  manifest["timings_seconds"] = timings;

  out.manifest_path = join_path(config.output_dir, "manifest.json");
  write_json_file(manifest, out.manifest_path);
  say(log, "[pipeline] wrote " + out.manifest_path);
  return out;
}

}  // namespace wordgraph
