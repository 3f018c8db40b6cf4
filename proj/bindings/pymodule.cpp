// Python bindings: thin wrappers over the stage runners plus a few direct
// numeric entry points. File-oriented on purpose — the Python layer drives
// the same artifacts the CLI produces.

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <optional>

#include "wordgraph/community.hpp"
#include "wordgraph/embedding.hpp"
#include "wordgraph/errors.hpp"
#include "wordgraph/pipeline.hpp"

namespace py = pybind11;

namespace {

wordgraph::PipelineConfig make_config(const std::string& vectors_path,
                                      const std::string& out_dir, std::size_t k,
                                      double floor, double min_gain,
                                      std::optional<std::uint64_t> seed,
                                      const std::string& transform, bool normalize,
                                      std::size_t top_r, int threads) {
  wordgraph::PipelineConfig config;
  config.vectors_path = vectors_path;
  config.output_dir = out_dir;
  config.k = k;
  config.floor = floor;
  config.min_gain = min_gain;
  config.rng_seed = seed;
  config.transform = wordgraph::transform_from_string(transform);
  config.normalize = normalize;
  config.top_r = top_r;
  config.threads = threads;
  wordgraph::validate(config);
  return config;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "word similarity graphs, Louvain communities, betweenness seed words";
  m.attr("__version__") = WORDGRAPH_VERSION_STRING;

  py::register_exception<wordgraph::ConfigError>(m, "ConfigError");
  py::register_exception<wordgraph::ParseError>(m, "ParseError");
  py::register_exception<wordgraph::IoError>(m, "IoError");
  py::register_exception<wordgraph::DomainError>(m, "DomainError");

  m.def(
      "cosine_similarity",
      [](const std::vector<double>& a, const std::vector<double>& b) {
        return wordgraph::cosine_similarity(a, b);
      },
      py::arg("a"), py::arg("b"));

  m.def(
      "adjusted_rand_index",
      [](const std::vector<std::uint32_t>& a, const std::vector<std::uint32_t>& b) {
        return wordgraph::adjusted_rand_index(a, b);
      },
      py::arg("a"), py::arg("b"));

  m.def(
      "gen_synthetic",
      [](std::size_t clusters, std::size_t words_per_cluster, std::size_t dim,
         double noise, std::uint64_t seed, const std::string& out_dir) {
        wordgraph::SyntheticParams params{clusters, words_per_cluster, dim, noise,
                                          seed};
        const auto out = wordgraph::run_gen_synthetic(params, out_dir);
        py::dict result;
        result["vectors"] = out.vectors_path;
        result["labels"] = out.labels_path;
        return result;
      },
      py::arg("clusters"), py::arg("words_per_cluster"), py::arg("dim"),
      py::arg("noise"), py::arg("seed"), py::arg("out_dir"));

  m.def(
      "build_graph",
      [](const std::string& vectors, const std::string& out_dir, std::size_t k,
         double floor, int threads) {
        const auto config = make_config(vectors, out_dir, k, floor, 1e-7,
                                        std::nullopt, "one_minus_s", false, 10,
                                        threads);
        const auto out = wordgraph::run_build_graph(config);
        py::dict result;
        result["edges"] = out.edges_path;
        result["graphml"] = out.graphml_path;
        result["dot"] = out.dot_path;
        result["stats"] = out.stats_path;
        result["nodes"] = out.nodes;
        result["edge_count"] = out.edges;
        return result;
      },
      py::arg("vectors"), py::arg("out_dir"), py::arg("k") = 25,
      py::arg("floor") = 0.5, py::arg("threads") = 0);

  m.def(
      "communities",
      [](const std::string& edges, const std::string& out_dir, double min_gain,
         std::optional<std::uint64_t> seed) {
        auto config = make_config("", out_dir, 25, 0.5, min_gain, seed,
                                  "one_minus_s", false, 10, 0);
        const auto out = wordgraph::run_communities(config, edges);
        py::dict result;
        result["partition"] = out.partition_path;
        result["summary"] = out.summary_path;
        result["modularity"] = out.modularity;
        result["community_count"] = out.community_count;
        return result;
      },
      py::arg("edges"), py::arg("out_dir"), py::arg("min_gain") = 1e-7,
      py::arg("seed") = std::nullopt);

  m.def(
      "seeds",
      [](const std::string& edges, const std::string& partition,
         const std::string& out_dir, std::size_t top_r, const std::string& transform,
         bool normalize, int threads) {
        const auto config = make_config("", out_dir, 25, 0.5, 1e-7, std::nullopt,
                                        transform, normalize, top_r, threads);
        return wordgraph::run_seeds(config, edges, partition).report_path;
      },
      py::arg("edges"), py::arg("partition"), py::arg("out_dir"),
      py::arg("top_r") = 10, py::arg("transform") = "one_minus_s",
      py::arg("normalize") = false, py::arg("threads") = 0);

  m.def(
      "pipeline",
      [](const std::string& vectors, const std::string& out_dir, std::size_t k,
         double floor, double min_gain, std::optional<std::uint64_t> seed,
         const std::string& transform, bool normalize, std::size_t top_r,
         int threads) {
        const auto config = make_config(vectors, out_dir, k, floor, min_gain, seed,
                                        transform, normalize, top_r, threads);
        const auto out = wordgraph::run_pipeline(config);
        py::dict result;
        result["edges"] = out.build.edges_path;
        result["partition"] = out.communities.partition_path;
        result["seed_report"] = out.seeds.report_path;
        result["manifest"] = out.manifest_path;
        result["modularity"] = out.communities.modularity;
        result["community_count"] = out.communities.community_count;
        return result;
      },
      py::arg("vectors"), py::arg("out_dir"), py::arg("k") = 25,
      py::arg("floor") = 0.5, py::arg("min_gain") = 1e-7,
      py::arg("seed") = std::nullopt, py::arg("transform") = "one_minus_s",
      py::arg("normalize") = false, py::arg("top_r") = 10, py::arg("threads") = 0);
}
