#include "wordgraph/centrality.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <numeric>
#include <ostream>
#include <queue>
#include <utility>

#include "wordgraph/detail/parallel.hpp"
#include "wordgraph/detail/rng.hpp"
#include "wordgraph/detail/textio.hpp"
#include "wordgraph/errors.hpp"

namespace wordgraph {

namespace {

// Two candidate path lengths within this absolute margin count as equal, so
// near-degenerate alternatives all contribute to the path counts.
constexpr double kTieTolerance = 1e-12;

constexpr double kInf = std::numeric_limits<double>::infinity();

}  // namespace

std::string to_string(DistanceTransform transform) {
  switch (transform) {
    case DistanceTransform::kOneMinus: return "one_minus_s";
    case DistanceTransform::kReciprocal: return "reciprocal";
  }
  throw DomainError("unknown distance transform");
}

DistanceTransform transform_from_string(std::string_view name) {
  if (name == "one_minus_s") return DistanceTransform::kOneMinus;
  if (name == "reciprocal") return DistanceTransform::kReciprocal;
  throw DomainError("unknown distance transform: " + std::string(name) +
                    " (expected one_minus_s or reciprocal)");
}

double distance_of(DistanceTransform transform, double similarity) {
  if (!(similarity > 0.0 && similarity < 1.0))
    throw DomainError("similarity " + detail::format_fixed(similarity) +
                      " outside (0,1); cannot derive a distance");
  switch (transform) {
    case DistanceTransform::kOneMinus: return 1.0 - similarity;
    case DistanceTransform::kReciprocal: return 1.0 / similarity;
  }
  throw DomainError("unknown distance transform");
}

namespace {

struct DistanceView {
  std::vector<std::size_t> offsets;
  std::vector<double> lengths;  // aligned with neighbor_weights order
};

DistanceView make_distances(const SimilarityGraph& g, DistanceTransform transform) {
  const std::size_t n = g.node_count();
  DistanceView view;
  view.offsets.assign(n + 1, 0);
  for (std::size_t i = 0; i < n; ++i)
    view.offsets[i + 1] = view.offsets[i] + g.neighbor_weights(static_cast<NodeId>(i)).size();
  view.lengths.resize(view.offsets[n]);
  for (std::size_t i = 0; i < n; ++i) {
    const auto ws = g.neighbor_weights(static_cast<NodeId>(i));
    for (std::size_t p = 0; p < ws.size(); ++p)
      view.lengths[view.offsets[i] + p] = distance_of(transform, ws[p]);
  }
  return view;
}

// Scratch buffers for one single-source pass, reused across sources.
struct BrandesScratch {
  std::vector<double> dist;
  std::vector<double> sigma;
  std::vector<double> delta;
  std::vector<std::vector<std::uint32_t>> preds;
  std::vector<std::uint32_t> settled;

  explicit BrandesScratch(std::size_t n)
      : dist(n, kInf), sigma(n, 0.0), delta(n, 0.0), preds(n) {
    settled.reserve(n);
  }

  void reset() {
    for (const std::uint32_t v : settled) {
      dist[v] = kInf;
      sigma[v] = 0.0;
      delta[v] = 0.0;
      preds[v].clear();
    }
    settled.clear();
  }
};

// One Brandes pass from `source`: Dijkstra with tie-tolerant path counting,
// then dependency accumulation in reverse settle order. Adds delta values
// into `accum` (source excluded).
void accumulate_from_source(const SimilarityGraph& g, const DistanceView& view,
                            std::uint32_t source, BrandesScratch& s,
                            std::vector<double>& accum) {
  using Entry = std::pair<double, std::uint32_t>;
  std::priority_queue<Entry, std::vector<Entry>, std::greater<Entry>> queue;

  s.dist[source] = 0.0;
  s.sigma[source] = 1.0;
  queue.emplace(0.0, source);

  while (!queue.empty()) {
    const auto [d, v] = queue.top();
    queue.pop();
    if (d > s.dist[v]) continue;  // stale entry
    s.settled.push_back(v);

    const auto ids = g.neighbor_ids(v);
    const std::size_t base = view.offsets[v];
    for (std::size_t p = 0; p < ids.size(); ++p) {
      const std::uint32_t w = ids[p];
      const double cand = d + view.lengths[base + p];
      if (cand < s.dist[w] - kTieTolerance) {
        s.dist[w] = cand;
        s.sigma[w] = s.sigma[v];
        s.preds[w].clear();
        s.preds[w].push_back(v);
        queue.emplace(cand, w);
      } else if (cand <= s.dist[w] + kTieTolerance) {
        s.sigma[w] += s.sigma[v];
        s.preds[w].push_back(v);
      }
    }
  }

  for (std::size_t i = s.settled.size(); i-- > 0;) {
    const std::uint32_t w = s.settled[i];
    const double coeff = (1.0 + s.delta[w]) / s.sigma[w];
    for (const std::uint32_t v : s.preds[w]) s.delta[v] += s.sigma[v] * coeff;
    if (w != source) accum[w] += s.delta[w];
  }
  s.reset();
}

void validate_weights(const SimilarityGraph& g) {
  const std::size_t n = g.node_count();
  for (std::size_t i = 0; i < n; ++i)
    for (const double w : g.neighbor_weights(static_cast<NodeId>(i)))
      if (!(w > 0.0 && w < 1.0))
        throw DomainError("betweenness requires edge weights strictly inside "
                          "(0,1); found " + detail::format_fixed(w));
}

// Shared driver: runs single-source passes for every id in `sources`
// (ascending), combining per-chunk partial sums in chunk order so the result
// is identical for any thread count.
std::vector<double> accumulate_sources(const SimilarityGraph& g,
                                       const DistanceView& view,
                                       const std::vector<std::uint32_t>& sources,
                                       int threads) {
  const std::size_t n = g.node_count();
  const std::size_t count = sources.size();
  // Bound the number of retained partial vectors; the chunk layout depends
  // only on the source count, never on the thread count.
  const std::size_t chunk = std::max<std::size_t>(64, (count + 127) / 128);
  const std::size_t n_chunks = count == 0 ? 0 : (count + chunk - 1) / chunk;

  std::vector<std::vector<double>> partials(n_chunks);
  detail::for_chunks(count, chunk, threads,
                     [&](std::size_t begin, std::size_t end, std::size_t chunk_idx) {
                       auto& partial = partials[chunk_idx];
                       partial.assign(n, 0.0);
                       BrandesScratch scratch(n);
                       for (std::size_t i = begin; i < end; ++i)
                         accumulate_from_source(g, view, sources[i], scratch, partial);
                     });

  std::vector<double> total(n, 0.0);
  for (const auto& partial : partials)
    for (std::size_t v = 0; v < n; ++v) total[v] += partial[v];
  return total;
}

void finalize_scores(std::vector<double>& scores, double scale, bool normalize) {
  const std::size_t n = scores.size();
  double factor = 0.5 * scale;  // each unordered pair was seen from both ends
  if (normalize)
    factor *= n >= 3 ? 2.0 / (static_cast<double>(n - 1) * static_cast<double>(n - 2))
                     : 0.0;
  for (double& s : scores) s *= factor;
}

}  // namespace

CentralityTable betweenness(const SimilarityGraph& g, const BetweennessOptions& options) {
  validate_weights(g);
  const DistanceView view = make_distances(g, options.transform);

  std::vector<std::uint32_t> sources(g.node_count());
  std::iota(sources.begin(), sources.end(), 0u);
  CentralityTable table;
  table.scores = accumulate_sources(g, view, sources, options.threads);
  finalize_scores(table.scores, 1.0, options.normalize);
  table.normalized = options.normalize;
  return table;
}

CentralityTable betweenness_sampled(const SimilarityGraph& g, std::size_t samples,
                                    std::uint64_t rng_seed,
                                    const BetweennessOptions& options) {
  if (samples == 0) throw DomainError("sample count must be positive");
  const std::size_t n = g.node_count();
  if (samples >= n) return betweenness(g, options);

  validate_weights(g);
  const DistanceView view = make_distances(g, options.transform);

  std::vector<std::uint32_t> ids(n);
  std::iota(ids.begin(), ids.end(), 0u);
  detail::Rng rng(rng_seed);
  rng.shuffle(ids);
  std::vector<std::uint32_t> sources(ids.begin(), ids.begin() + samples);
  std::sort(sources.begin(), sources.end());

  CentralityTable table;
  table.scores = accumulate_sources(g, view, sources, options.threads);
  finalize_scores(table.scores,
                  static_cast<double>(n) / static_cast<double>(samples),
                  options.normalize);
  table.normalized = options.normalize;
  return table;
}

SeedReport extract_seeds(const SimilarityGraph& g, const Partition& p,
                         const SeedOptions& options) {
  if (options.top_r == 0) throw DomainError("top_r must be positive");
  if (p.size() != g.node_count())
    throw DomainError("partition covers " + std::to_string(p.size()) +
                      " nodes, graph has " + std::to_string(g.node_count()));

  BetweennessOptions bw;
  bw.transform = options.transform;
  bw.normalize = false;  // the report carries raw and normalized side by side
  bw.threads = options.threads;

  SeedReport report;
  const auto members = p.members();
  report.communities.reserve(members.size());
  for (std::uint32_t c = 0; c < members.size(); ++c) {
    const auto sub = induced_subgraph(g, members[c]);
    const std::size_t size = sub.graph.node_count();

    CommunitySeeds entry;
    entry.community_id = c;
    entry.size = size;
    CentralityTable table;
    if (options.approx && size > options.approx_cutoff) {
      table = betweenness_sampled(sub.graph, options.approx_samples,
                                  options.rng_seed + c, bw);
      entry.approximate = true;
    } else {
      table = betweenness(sub.graph, bw);
    }

    std::vector<std::uint32_t> order(size);
    std::iota(order.begin(), order.end(), 0u);
    std::sort(order.begin(), order.end(), [&](std::uint32_t a, std::uint32_t b) {
      if (table.scores[a] != table.scores[b]) return table.scores[a] > table.scores[b];
      return sub.graph.label(a) < sub.graph.label(b);
    });

    const double norm_factor =
        size >= 3 ? 2.0 / (static_cast<double>(size - 1) * static_cast<double>(size - 2))
                  : 0.0;
    const std::size_t take = std::min<std::size_t>(options.top_r, size);
    entry.seeds.reserve(take);
    for (std::size_t i = 0; i < take; ++i) {
      const std::uint32_t v = order[i];
      entry.seeds.push_back({sub.graph.label(v), table.scores[v],
                             table.scores[v] * norm_factor});
    }

    std::vector<std::string> sample;
    sample.reserve(size);
    for (std::uint32_t v = 0; v < size; ++v) sample.push_back(sub.graph.label(v));
    std::sort(sample.begin(), sample.end());
    if (sample.size() > options.members_sample_size)
      sample.resize(options.members_sample_size);
    entry.members_sample = std::move(sample);

    report.communities.push_back(std::move(entry));
  }
  return report;
}

namespace {

void write_json_string(std::ostream& out, std::string_view text) {
  out << '"';
  for (const char ch : text) {
    const unsigned char u = static_cast<unsigned char>(ch);
    switch (ch) {
      case '"': out << "\\\""; break;
      case '\\': out << "\\\\"; break;
      case '\b': out << "\\b"; break;
      case '\f': out << "\\f"; break;
      case '\n': out << "\\n"; break;
      case '\r': out << "\\r"; break;
      case '\t': out << "\\t"; break;
      default:
        if (u < 0x20) {
          char buf[8];
          std::snprintf(buf, sizeof buf, "\\u%04x", u);
          out << buf;
        } else {
          out << ch;
        }
    }
  }
  out << '"';
}

}  // namespace

void write_seed_report(const SeedReport& report, std::ostream& out) {
  out << "{\n  \"schema_version\": 1,\n  \"communities\": [";
  for (std::size_t i = 0; i < report.communities.size(); ++i) {
    const auto& c = report.communities[i];
    out << (i == 0 ? "\n" : ",\n");
    out << "    {\n";
    out << "      \"id\": " << c.community_id << ",\n";
    out << "      \"size\": " << c.size << ",\n";
    out << "      \"approximate\": " << (c.approximate ? "true" : "false") << ",\n";
    out << "      \"seeds\": [";
    for (std::size_t j = 0; j < c.seeds.size(); ++j) {
      const auto& seed = c.seeds[j];
      out << (j == 0 ? "\n" : ",\n") << "        { \"word\": ";
      write_json_string(out, seed.word);
      out << ", \"score\": " << detail::format_fixed(seed.score, 7)
          << ", \"normalized_score\": "
          << detail::format_fixed(seed.normalized_score, 7) << " }";
    }
    out << (c.seeds.empty() ? "],\n" : "\n      ],\n");
    out << "      \"members_sample\": [";
    for (std::size_t j = 0; j < c.members_sample.size(); ++j) {
      out << (j == 0 ? "" : ", ");
      write_json_string(out, c.members_sample[j]);
    }
    out << "]\n    }";
  }
  out << (report.communities.empty() ? "]\n}\n" : "\n  ]\n}\n");
}

void write_seed_report_file(const SeedReport& report, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open for writing: " + path);
  write_seed_report(report, out);
  if (!out) throw IoError("write failed: " + path);
}

}  // namespace wordgraph
