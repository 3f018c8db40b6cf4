// Command-line front end: build-graph, communities, seeds, pipeline, and
// gen-synthetic subcommands over the wordgraph library. A JSON config file
// may supply any pipeline setting; explicitly passed flags win over it.

#include <cstdint>
#include <iostream>
#include <string>

#include "CLI11.hpp"

#include "wordgraph/errors.hpp"
#include "wordgraph/pipeline.hpp"

namespace {

using wordgraph::PipelineConfig;

// Flag values live in their own PipelineConfig; resolve_config() copies just
// the flags the user actually typed on top of the config-file values.
struct StageFlags {
  PipelineConfig values;
  std::string config_path;
  std::uint64_t seed = 0;
  std::string transform_name = "one_minus_s";
};

void add_common_flags(CLI::App* sub, StageFlags& flags) {
  sub->add_option("--config", flags.config_path,
                  "JSON config file; explicit flags override its values");
  sub->add_option("--out", flags.values.output_dir, "Output directory");
  sub->add_option("--threads", flags.values.threads,
                  "Worker threads (0 = all hardware threads)");
}

void add_build_flags(CLI::App* sub, StageFlags& flags) {
  sub->add_option("--vectors", flags.values.vectors_path,
                  "Input vectors in word2vec text format");
  sub->add_option("--k", flags.values.k, "Neighbors per word before symmetrization");
  sub->add_option("--floor", flags.values.floor,
                  "Minimum similarity for an edge, in (0,1)");
}

void add_community_flags(CLI::App* sub, StageFlags& flags) {
  sub->add_option("--min-gain", flags.values.min_gain,
                  "Minimum modularity gain for a local move");
  sub->add_option("--seed", flags.seed,
                  "Shuffle node visit order with this seed (default: ascending)");
}

void add_seed_flags(CLI::App* sub, StageFlags& flags) {
  sub->add_option("--top-r", flags.values.top_r, "Seed words reported per community");
  sub->add_option("--transform", flags.transform_name,
                  "Similarity-to-distance transform: one_minus_s or reciprocal");
  sub->add_flag("--normalize,!--no-normalize", flags.values.normalize,
                "Scale betweenness by 2/((n-1)(n-2))");
  sub->add_flag("--approx,!--no-approx", flags.values.approx,
                "Sample sources in communities larger than the cutoff");
  sub->add_option("--approx-cutoff", flags.values.approx_cutoff,
                  "Community size above which sampling kicks in");
  sub->add_option("--approx-samples", flags.values.approx_samples,
                  "Sources sampled per oversized community");
}

PipelineConfig resolve_config(const CLI::App* sub, const StageFlags& flags) {
  PipelineConfig config;
  if (!flags.config_path.empty())
    config = wordgraph::load_config_file(flags.config_path);

  const auto given = [&](const std::string& name) {
    return sub->get_option_no_throw(name) != nullptr && sub->count(name) > 0;
  };
  if (given("--vectors")) config.vectors_path = flags.values.vectors_path;
  if (given("--k")) config.k = flags.values.k;
  if (given("--floor")) config.floor = flags.values.floor;
  if (given("--min-gain")) config.min_gain = flags.values.min_gain;
  if (given("--seed")) config.rng_seed = flags.seed;
  if (given("--transform")) {
    try {
      config.transform = wordgraph::transform_from_string(flags.transform_name);
    } catch (const wordgraph::DomainError& err) {
      throw wordgraph::ConfigError(err.what());
    }
  }
  if (given("--normalize")) config.normalize = flags.values.normalize;
  if (given("--top-r")) config.top_r = flags.values.top_r;
  if (given("--out")) config.output_dir = flags.values.output_dir;
  if (given("--threads")) config.threads = flags.values.threads;
  if (given("--approx")) config.approx = flags.values.approx;
  if (given("--approx-cutoff")) config.approx_cutoff = flags.values.approx_cutoff;
  if (given("--approx-samples")) config.approx_samples = flags.values.approx_samples;

  wordgraph::validate(config);
  return config;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"word similarity graphs, Louvain communities, and betweenness seed words"};
  app.set_version_flag("--version", WORDGRAPH_VERSION_STRING);
  app.require_subcommand(1);

  StageFlags build_flags;
  auto* build = app.add_subcommand(
      "build-graph", "Build the pruned similarity graph from word vectors");
  add_common_flags(build, build_flags);
  add_build_flags(build, build_flags);
  build->callback([&] {
    wordgraph::run_build_graph(resolve_config(build, build_flags), &std::cerr);
  });

  StageFlags comm_flags;
  std::string comm_edges;
  auto* communities = app.add_subcommand(
      "communities", "Partition an edge list with Louvain modularity maximization");
  communities->add_option("--edges", comm_edges, "Edge TSV from build-graph")
      ->required();
  add_common_flags(communities, comm_flags);
  add_community_flags(communities, comm_flags);
  communities->callback([&] {
    wordgraph::run_communities(resolve_config(communities, comm_flags), comm_edges,
                               &std::cerr);
  });

  StageFlags seed_flags;
  std::string seed_edges;
  std::string seed_partition;
  auto* seeds = app.add_subcommand(
      "seeds", "Rank seed words per community by betweenness centrality");
  seeds->add_option("--edges", seed_edges, "Edge TSV from build-graph")->required();
  seeds->add_option("--partition", seed_partition, "Partition TSV from communities")
      ->required();
  add_common_flags(seeds, seed_flags);
  add_community_flags(seeds, seed_flags);
  add_seed_flags(seeds, seed_flags);
  seeds->callback([&] {
    wordgraph::run_seeds(resolve_config(seeds, seed_flags), seed_edges,
                         seed_partition, &std::cerr);
  });

  StageFlags pipe_flags;
  auto* pipeline = app.add_subcommand(
      "pipeline", "Run build-graph, communities, and seeds, then write a manifest");
  add_common_flags(pipeline, pipe_flags);
  add_build_flags(pipeline, pipe_flags);
  add_community_flags(pipeline, pipe_flags);
  add_seed_flags(pipeline, pipe_flags);
  pipeline->callback([&] {
    wordgraph::run_pipeline(resolve_config(pipeline, pipe_flags), &std::cerr);
  });

  wordgraph::SyntheticParams synth;
  std::string synth_out;
  auto* gen = app.add_subcommand(
      "gen-synthetic", "Write a synthetic vector file with planted clusters");
  gen->add_option("--clusters", synth.clusters, "Number of planted clusters");
  gen->add_option("--words-per-cluster", synth.words_per_cluster, "Words per cluster");
  gen->add_option("--dim", synth.dim, "Vector dimension");
  gen->add_option("--noise", synth.noise, "Noise scale added to each unit center");
  gen->add_option("--seed", synth.seed, "RNG seed");
  gen->add_option("--out", synth_out, "Output directory")->required();
  gen->callback([&] { wordgraph::run_gen_synthetic(synth, synth_out, &std::cerr); });

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  } catch (const wordgraph::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const wordgraph::ParseError& e) {
    std::cerr << "parse error: " << e.what() << "\n";
    return 3;
  } catch (const wordgraph::IoError& e) {
    std::cerr << "io error: " << e.what() << "\n";
    return 4;
  } catch (const wordgraph::DomainError& e) {
    std::cerr << "domain error: " << e.what() << "\n";
    return 5;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
