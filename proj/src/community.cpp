#include "wordgraph/community.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <ostream>
#include <unordered_map>

#include "wordgraph/detail/rng.hpp"
#include "wordgraph/detail/textio.hpp"
#include "wordgraph/errors.hpp"

namespace wordgraph {

namespace detail {

LevelGraph LevelGraph::from_similarity(const SimilarityGraph& g) {
  LevelGraph lg;
  const std::size_t n = g.node_count();
  lg.offsets.assign(n + 1, 0);
  lg.self_weight.assign(n, 0.0);
  lg.degree.assign(n, 0.0);
  for (std::size_t i = 0; i < n; ++i)
    lg.offsets[i + 1] = lg.offsets[i] + g.neighbor_ids(static_cast<NodeId>(i)).size();
  lg.nbr.resize(lg.offsets[n]);
  lg.weight.resize(lg.offsets[n]);
  for (std::size_t i = 0; i < n; ++i) {
    const auto ids = g.neighbor_ids(static_cast<NodeId>(i));
    const auto ws = g.neighbor_weights(static_cast<NodeId>(i));
    std::copy(ids.begin(), ids.end(), lg.nbr.begin() + lg.offsets[i]);
    std::copy(ws.begin(), ws.end(), lg.weight.begin() + lg.offsets[i]);
    lg.degree[i] = g.weighted_degree(static_cast<NodeId>(i));
  }
  lg.total_weight = g.total_edge_weight();
  return lg;
}

CommunitySums community_sums(const LevelGraph& lg,
                             std::span<const std::uint32_t> assignment,
                             std::uint32_t community_count) {
  CommunitySums sums;
  sums.sigma_tot.assign(community_count, 0.0);
  sums.sigma_in.assign(community_count, 0.0);
  for (std::size_t i = 0; i < lg.node_count(); ++i) {
    const std::uint32_t c = assignment[i];
    sums.sigma_tot[c] += lg.degree[i];
    sums.sigma_in[c] += 2.0 * lg.self_weight[i];
    const auto ids = lg.neighbors(static_cast<std::uint32_t>(i));
    const auto ws = lg.weights(static_cast<std::uint32_t>(i));
    for (std::size_t p = 0; p < ids.size(); ++p)
      if (assignment[ids[p]] == c) sums.sigma_in[c] += ws[p];
  }
  return sums;
}

double modularity_of(const LevelGraph& lg, std::span<const std::uint32_t> assignment,
                     std::uint32_t community_count) {
  const double two_m = 2.0 * lg.total_weight;
  const auto sums = community_sums(lg, assignment, community_count);
  double q = 0.0;
  for (std::uint32_t c = 0; c < community_count; ++c) {
    const double frac_tot = sums.sigma_tot[c] / two_m;
    q += sums.sigma_in[c] / two_m - frac_tot * frac_tot;
  }
  return q;
}

LevelGraph aggregate_level(const LevelGraph& lg,
                           std::span<const std::uint32_t> assignment,
                           std::uint32_t community_count) {
  const std::size_t n = lg.node_count();
  std::vector<std::vector<std::uint32_t>> members(community_count);
  for (std::size_t i = 0; i < n; ++i)
    members[assignment[i]].push_back(static_cast<std::uint32_t>(i));

  LevelGraph out;
  out.offsets.assign(community_count + 1, 0);
  out.self_weight.assign(community_count, 0.0);
  out.degree.assign(community_count, 0.0);

  // Each inter-community weight is accumulated once, from the lower
  // community id, then mirrored, so both directions carry identical bits.
  std::vector<double> acc(community_count, 0.0);
  std::vector<std::uint32_t> touched;
  std::vector<std::vector<std::pair<std::uint32_t, double>>> upper(community_count);
  for (std::uint32_t c = 0; c < community_count; ++c) {
    double self = 0.0;
    double intra = 0.0;
    touched.clear();
    for (const std::uint32_t v : members[c]) {
      self += lg.self_weight[v];
      const auto ids = lg.neighbors(v);
      const auto ws = lg.weights(v);
      for (std::size_t p = 0; p < ids.size(); ++p) {
        const std::uint32_t d = assignment[ids[p]];
        if (d == c) {
          intra += ws[p];  // both directions seen, halved below
        } else if (d > c) {
          if (acc[d] == 0.0) touched.push_back(d);  // weights are positive
          acc[d] += ws[p];
        }
      }
    }
    out.self_weight[c] = self + intra / 2.0;
    std::sort(touched.begin(), touched.end());
    for (const std::uint32_t d : touched) {
      upper[c].emplace_back(d, acc[d]);
      acc[d] = 0.0;
    }
  }

  std::vector<std::vector<std::pair<std::uint32_t, double>>> adj(community_count);
  for (std::uint32_t c = 0; c < community_count; ++c)
    for (const auto& [d, w] : upper[c]) {
      adj[c].emplace_back(d, w);
      adj[d].emplace_back(c, w);
    }
  for (std::uint32_t c = 0; c < community_count; ++c)
    std::sort(adj[c].begin(), adj[c].end());

  for (std::uint32_t c = 0; c < community_count; ++c)
    out.offsets[c + 1] = out.offsets[c] + adj[c].size();
  out.nbr.resize(out.offsets[community_count]);
  out.weight.resize(out.offsets[community_count]);
  for (std::uint32_t c = 0; c < community_count; ++c) {
    std::size_t p = out.offsets[c];
    double deg = 2.0 * out.self_weight[c];
    for (const auto& [d, w] : adj[c]) {
      out.nbr[p] = d;
      out.weight[p] = w;
      deg += w;
      ++p;
    }
    out.degree[c] = deg;
  }

  double m = 0.0;
  for (std::uint32_t c = 0; c < community_count; ++c) {
    m += out.self_weight[c];
    for (const auto& [d, w] : upper[c]) {
      (void)d;
      m += w;
    }
  }
  out.total_weight = m;
  return out;
}

}  // namespace detail

Partition Partition::singletons(std::size_t n) {
  Partition p;
  p.assignment_.resize(n);
  std::iota(p.assignment_.begin(), p.assignment_.end(), 0u);
  p.count_ = static_cast<std::uint32_t>(n);
  return p;
}

Partition Partition::from_assignment(std::vector<std::uint32_t> assignment) {
  Partition p;
  if (assignment.empty()) return p;
  std::vector<std::uint32_t> sorted(assignment);
  std::sort(sorted.begin(), sorted.end());
  sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());
  std::unordered_map<std::uint32_t, std::uint32_t> compact;
  compact.reserve(sorted.size());
  for (std::size_t i = 0; i < sorted.size(); ++i)
    compact.emplace(sorted[i], static_cast<std::uint32_t>(i));
  for (auto& a : assignment) a = compact.at(a);
  p.assignment_ = std::move(assignment);
  p.count_ = static_cast<std::uint32_t>(sorted.size());
  return p;
}

std::uint32_t Partition::community_of(NodeId id) const {
  if (id >= assignment_.size())
    throw DomainError("invalid node id " + std::to_string(id));
  return assignment_[id];
}

std::vector<std::vector<NodeId>> Partition::members() const {
  std::vector<std::vector<NodeId>> out(count_);
  for (std::size_t i = 0; i < assignment_.size(); ++i)
    out[assignment_[i]].push_back(static_cast<NodeId>(i));
  return out;
}

namespace {

void check_partition(const SimilarityGraph& g, const Partition& p) {
  if (p.size() != g.node_count())
    throw DomainError("partition covers " + std::to_string(p.size()) +
                      " nodes, graph has " + std::to_string(g.node_count()));
}

}  // namespace

CommunityWeights community_weights(const SimilarityGraph& g, const Partition& p) {
  check_partition(g, p);
  const auto lg = detail::LevelGraph::from_similarity(g);
  auto sums = detail::community_sums(lg, p.assignment(), p.community_count());
  return {std::move(sums.sigma_tot), std::move(sums.sigma_in)};
}

double modularity(const SimilarityGraph& g, const Partition& p) {
  check_partition(g, p);
  if (!(g.total_edge_weight() > 0.0))
    throw DomainError("modularity undefined: graph has no edges (m = 0)");
  const auto lg = detail::LevelGraph::from_similarity(g);
  return detail::modularity_of(lg, p.assignment(), p.community_count());
}

double AggregatedGraph::self_loop(NodeId c) const {
  if (c >= lg_.node_count()) throw DomainError("invalid community id");
  return lg_.self_weight[c];
}

double AggregatedGraph::weighted_degree(NodeId c) const {
  if (c >= lg_.node_count()) throw DomainError("invalid community id");
  return lg_.degree[c];
}

std::span<const std::uint32_t> AggregatedGraph::neighbor_ids(NodeId c) const {
  if (c >= lg_.node_count()) throw DomainError("invalid community id");
  return lg_.neighbors(c);
}

std::span<const double> AggregatedGraph::neighbor_weights(NodeId c) const {
  if (c >= lg_.node_count()) throw DomainError("invalid community id");
  return lg_.weights(c);
}

double AggregatedGraph::modularity(const Partition& p) const {
  if (p.size() != lg_.node_count())
    throw DomainError("partition size does not match aggregate node count");
  if (!(lg_.total_weight > 0.0))
    throw DomainError("modularity undefined: graph has no edges (m = 0)");
  return detail::modularity_of(lg_, p.assignment(), p.community_count());
}

AggregatedGraph aggregate(const SimilarityGraph& g, const Partition& p) {
  check_partition(g, p);
  const auto lg = detail::LevelGraph::from_similarity(g);
  AggregatedGraph out;
  out.lg_ = detail::aggregate_level(lg, p.assignment(), p.community_count());
  return out;
}

namespace {

// One local-move phase. Returns the number of moves applied. comm must be
// the singleton assignment on entry; sums are maintained incrementally with
// remove-then-insert accounting.
std::size_t local_move_phase(const detail::LevelGraph& lg,
                             std::vector<std::uint32_t>& comm, double min_gain,
                             detail::Rng* rng) {
  const std::size_t n = lg.node_count();
  const double two_m = 2.0 * lg.total_weight;

  std::vector<double> sigma_tot(n, 0.0);
  std::vector<double> sigma_in(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    sigma_tot[comm[i]] += lg.degree[i];
    sigma_in[comm[i]] += 2.0 * lg.self_weight[i];
  }

  std::vector<std::uint32_t> order(n);
  std::iota(order.begin(), order.end(), 0u);
  if (rng) rng->shuffle(order);

  std::vector<double> comm_weight(n, 0.0);  // weight from the node to each community
  std::vector<std::uint32_t> touched;

  std::size_t total_moves = 0;
  for (;;) {
    std::size_t sweep_moves = 0;
    for (const std::uint32_t node : order) {
      const std::uint32_t c_old = comm[node];
      const double k = lg.degree[node];

      touched.clear();
      const auto ids = lg.neighbors(node);
      const auto ws = lg.weights(node);
      for (std::size_t p = 0; p < ids.size(); ++p) {
        const std::uint32_t c = comm[ids[p]];
        if (comm_weight[c] == 0.0) touched.push_back(c);
        comm_weight[c] += ws[p];
      }
      const double w_old = comm_weight[c_old];

      // Remove the node from its community before evaluating any target,
      // otherwise its own contribution is double counted.
      sigma_tot[c_old] -= k;
      sigma_in[c_old] -= 2.0 * w_old + 2.0 * lg.self_weight[node];

      const double gain_stay = w_old - sigma_tot[c_old] * k / two_m;
      double best_gain = -std::numeric_limits<double>::infinity();
      std::uint32_t best_c = c_old;
      for (const std::uint32_t c : touched) {
        if (c == c_old) continue;
        const double gain = comm_weight[c] - sigma_tot[c] * k / two_m;
        if (gain > best_gain || (gain == best_gain && c < best_c)) {
          best_gain = gain;
          best_c = c;
        }
      }

      // delta-Q of the move is (best_gain - gain_stay) / m; staying wins
      // unless the move clears min_gain.
      std::uint32_t target = c_old;
      if (best_c != c_old && best_gain - gain_stay > min_gain * lg.total_weight)
        target = best_c;

      sigma_tot[target] += k;
      sigma_in[target] += 2.0 * comm_weight[target] + 2.0 * lg.self_weight[node];
      if (target != c_old) {
        comm[node] = target;
        ++sweep_moves;
      }

      for (const std::uint32_t c : touched) comm_weight[c] = 0.0;
    }
    total_moves += sweep_moves;
    if (sweep_moves == 0) break;
  }
  return total_moves;
}

// Compacts in place preserving relative label order; returns the count.
std::uint32_t compact_labels(std::vector<std::uint32_t>& labels) {
  std::vector<std::uint32_t> sorted(labels);
  std::sort(sorted.begin(), sorted.end());
  sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());
  std::unordered_map<std::uint32_t, std::uint32_t> compact;
  compact.reserve(sorted.size());
  for (std::size_t i = 0; i < sorted.size(); ++i)
    compact.emplace(sorted[i], static_cast<std::uint32_t>(i));
  for (auto& l : labels) l = compact.at(l);
  return static_cast<std::uint32_t>(sorted.size());
}

}  // namespace

LouvainResult louvain(const SimilarityGraph& g, double min_gain,
                      std::optional<std::uint64_t> rng_seed) {
  if (min_gain < 0.0) throw DomainError("min_gain must be >= 0");
  if (!(g.total_edge_weight() > 0.0))
    throw DomainError("modularity undefined: graph has no edges (m = 0)");

  detail::LevelGraph lg = detail::LevelGraph::from_similarity(g);
  std::optional<detail::Rng> rng;
  if (rng_seed) rng.emplace(*rng_seed);

  std::vector<std::uint32_t> flat(g.node_count());
  std::iota(flat.begin(), flat.end(), 0u);

  LouvainResult result;
  std::size_t level = 1;
  for (;;) {
    std::vector<std::uint32_t> comm(lg.node_count());
    std::iota(comm.begin(), comm.end(), 0u);
    const std::size_t moves =
        local_move_phase(lg, comm, min_gain, rng ? &*rng : nullptr);
    const std::uint32_t n_comm = compact_labels(comm);
    const double q = detail::modularity_of(lg, comm, n_comm);
    result.levels.push_back({level, lg.node_count(), q});

    for (auto& f : flat) f = comm[f];

    if (moves == 0 || n_comm == lg.node_count()) break;
    lg = detail::aggregate_level(lg, comm, n_comm);
    ++level;
  }

  result.partition = Partition::from_assignment(std::move(flat));
  result.modularity = result.levels.back().modularity;
  return result;
}

void save_partition(const SimilarityGraph& g, const Partition& p, std::ostream& out) {
  check_partition(g, p);
  std::vector<NodeId> order(g.node_count());
  std::iota(order.begin(), order.end(), 0u);
  std::sort(order.begin(), order.end(), [&](NodeId a, NodeId b) {
    return g.label(a) < g.label(b);
  });
  for (const NodeId id : order)
    out << g.label(id) << '\t' << p.community_of(id) << '\n';
}

void save_partition_file(const SimilarityGraph& g, const Partition& p,
                         const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open for writing: " + path);
  save_partition(g, p, out);
  if (!out) throw IoError("write failed: " + path);
}

Partition load_partition(const SimilarityGraph& g, std::istream& in) {
  std::vector<std::uint32_t> raw(g.node_count(), 0);
  std::vector<bool> assigned(g.node_count(), false);

  std::string line;
  std::size_t line_no = 0;
  std::size_t blank_run = 0;
  while (detail::getline_crlf(in, line)) {
    ++line_no;
    if (line.empty()) {
      ++blank_run;
      continue;
    }
    if (blank_run > 0)
      throw ParseError("blank line inside partition file", line_no - blank_run);
    const auto fields = detail::split(line, '\t');
    if (fields.size() != 2)
      throw ParseError("expected 2 tab-separated fields", line_no);
    const auto id = g.find(fields[0]);
    if (!id)
      throw ParseError("unknown word: " + std::string(fields[0]), line_no);
    std::uint64_t c = 0;
    if (!detail::parse_u64(fields[1], c) || c > 0xFFFFFFFFull)
      throw ParseError("malformed community id", line_no);
    if (assigned[*id])
      throw ParseError("duplicate word: " + std::string(fields[0]), line_no);
    assigned[*id] = true;
    raw[*id] = static_cast<std::uint32_t>(c);
  }
  for (std::size_t i = 0; i < assigned.size(); ++i)
    if (!assigned[i])
      throw ParseError("word missing from partition: " + g.label(static_cast<NodeId>(i)));

  return Partition::from_assignment(std::move(raw));
}

Partition load_partition_file(const SimilarityGraph& g, const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open partition file: " + path);
  return load_partition(g, in);
}

double adjusted_rand_index(std::span<const std::uint32_t> a,
                           std::span<const std::uint32_t> b) {
  if (a.size() != b.size())
    throw DomainError("adjusted_rand_index: label vectors differ in length");
  const std::size_t n = a.size();
  if (n == 0) return 1.0;

  std::unordered_map<std::uint64_t, std::uint64_t> cells;
  std::unordered_map<std::uint32_t, std::uint64_t> rows, cols;
  for (std::size_t i = 0; i < n; ++i) {
    cells[(static_cast<std::uint64_t>(a[i]) << 32) | b[i]] += 1;
    rows[a[i]] += 1;
    cols[b[i]] += 1;
  }
  const auto pairs = [](std::uint64_t x) {
    return static_cast<double>(x) * static_cast<double>(x - 1) / 2.0;
  };
  double sum_cells = 0.0, sum_rows = 0.0, sum_cols = 0.0;
  for (const auto& [_, c] : cells) sum_cells += pairs(c);
  for (const auto& [_, c] : rows) sum_rows += pairs(c);
  for (const auto& [_, c] : cols) sum_cols += pairs(c);
  const double all_pairs = pairs(n);
  const double expected = sum_rows * sum_cols / all_pairs;
  const double maximum = 0.5 * (sum_rows + sum_cols) - expected;
  if (maximum == 0.0) return sum_cells == expected ? 1.0 : 0.0;
  return (sum_cells - expected) / maximum;
}

}  // namespace wordgraph
